#include "baker/io.hpp"

#include <bit>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <ostream>

#include "baker/errors.hpp"

namespace baker::io {

static_assert(std::endian::native == std::endian::little, "binary container assumes a little-endian host");

void write_matrix(std::ostream& out, const CMatrix& m) {
    if (m.rows() != m.cols()) {
        throw InvalidDimension("only square matrices are serialized");
    }
    const auto dim = static_cast<std::uint64_t>(m.rows());
    out.write(reinterpret_cast<const char*>(&dim), sizeof dim);
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            const double parts[2] = {m(r, c).real(), m(r, c).imag()};
            out.write(reinterpret_cast<const char*>(parts), sizeof parts);
        }
    }
    if (!out) {
        throw Error("failed writing matrix container");
    }
}

CMatrix read_matrix(std::istream& in) {
    std::uint64_t dim = 0;
    in.read(reinterpret_cast<char*>(&dim), sizeof dim);
    if (!in || dim == 0 || dim > (1u << 16)) {
        throw Error("malformed matrix container header");
    }
    const auto n = static_cast<Eigen::Index>(dim);
    CMatrix m(n, n);
    for (Eigen::Index r = 0; r < n; ++r) {
        for (Eigen::Index c = 0; c < n; ++c) {
            double parts[2];
            in.read(reinterpret_cast<char*>(parts), sizeof parts);
            m(r, c) = Complex(parts[0], parts[1]);
        }
    }
    if (!in) {
        throw Error("truncated matrix container");
    }
    return m;
}

void write_matrix_file(const std::filesystem::path& path, const CMatrix& m) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw Error("cannot open " + path.string() + " for writing");
    }
    write_matrix(out, m);
}

CMatrix read_matrix_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error("cannot open " + path.string());
    }
    return read_matrix(in);
}

std::string format_double(double value) {
    char buf[40];
    for (int precision = 15; precision <= 17; ++precision) {
        std::snprintf(buf, sizeof buf, "%.*g", precision, value);
        if (std::strtod(buf, nullptr) == value) {
            break;
        }
    }
    return buf;
}

void write_spectrum_csv(std::ostream& out, const SpectrumData& spectrum) {
    CsvWriter csv(out, {"index", "angle"});
    for (std::size_t k = 0; k < spectrum.angles.size(); ++k) {
        csv.cell(static_cast<long long>(k)).cell(spectrum.angles[k]);
        csv.end_row();
    }
}

CsvWriter::CsvWriter(std::ostream& out, const std::vector<std::string>& header)
    : out_(out), columns_(header.size()) {
    for (std::size_t k = 0; k < header.size(); ++k) {
        out_ << (k ? "," : "") << header[k];
    }
    out_ << '\n';
}

CsvWriter& CsvWriter::cell(double value) {
    return cell(std::string_view(format_double(value)));
}

CsvWriter& CsvWriter::cell(long long value) {
    return cell(std::string_view(std::to_string(value)));
}

CsvWriter& CsvWriter::cell(std::string_view value) {
    if (written_ > 0) {
        out_ << ',';
    }
    if (value.find_first_of(",\"\n") == std::string_view::npos) {
        out_ << value;
    } else {
        out_ << '"';
        for (char c : value) {
            if (c == '"') {
                out_ << '"';
            }
            out_ << c;
        }
        out_ << '"';
    }
    ++written_;
    return *this;
}

void CsvWriter::end_row() {
    if (written_ != columns_) {
        throw Error("csv row has " + std::to_string(written_) + " cells, header has " + std::to_string(columns_));
    }
    out_ << '\n';
    written_ = 0;
}

} // namespace baker::io
