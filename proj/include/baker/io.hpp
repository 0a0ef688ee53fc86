#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "baker/linalg.hpp"

namespace baker::io {

/// Binary container: little-endian uint64 dim, then dim*dim complex doubles
/// (re, im) in row-major order.
void write_matrix(std::ostream& out, const CMatrix& m);
CMatrix read_matrix(std::istream& in);
void write_matrix_file(const std::filesystem::path& path, const CMatrix& m);
CMatrix read_matrix_file(const std::filesystem::path& path);

/// CSV with header "index,angle", one row per eigenangle.
void write_spectrum_csv(std::ostream& out, const SpectrumData& spectrum);

/// Shortest round-trippable decimal form of a double.
std::string format_double(double value);

// Minimal CSV emitter. Text cells holding a comma, quote or newline are quoted.
class CsvWriter {
public:
    CsvWriter(std::ostream& out, const std::vector<std::string>& header);

    CsvWriter& cell(double value);
    CsvWriter& cell(long long value);
    CsvWriter& cell(std::string_view value);
    void end_row();

private:
    std::ostream& out_;
    std::size_t columns_;
    std::size_t written_ = 0;
};

} // namespace baker::io
