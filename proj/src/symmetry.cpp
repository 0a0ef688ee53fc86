#include "baker/symmetry.hpp"

#include <cmath>

#include "baker/errors.hpp"

namespace baker {

CMatrix reflection_permutation(std::size_t n) {
    if (n == 0) {
        throw InvalidDimension("reflection needs N >= 1");
    }
    const auto size = static_cast<Eigen::Index>(n);
    CMatrix r = CMatrix::Zero(size, size);
    for (Eigen::Index x = 0; x < size; ++x) {
        r(size - 1 - x, x) = 1.0;
    }
    return r;
}

CMatrix fourier_square(std::size_t n, double omega1, double omega2) {
    const CMatrix f = gdft_entries(n, omega1, omega2);
    return f * f;
}

double tr_defect(const QuantizationSpec& spec, const UnitaryMatrix& u) {
    if (u.dim() != spec.n) {
        throw InvalidDimension("matrix dimension does not match the spec");
    }
    const CMatrix f = gdft_entries(spec.n, spec.theta1, spec.theta2);
    // conj(U^{-1}) = U^T for unitary U
    return frobenius_norm(f * u.entries() * f.adjoint() - u.entries().transpose());
}

double reflection_defect(const CMatrix& u, double omega1, double omega2) {
    return frobenius_norm(commutator(u, fourier_square(static_cast<std::size_t>(u.rows()), omega1, omega2)));
}

std::vector<ReflectionDefect> fourier_reflection_scan(const CMatrix& u, int g1, int g2) {
    if (g1 < 1 || g2 < 1) {
        throw PreconditionError("reflection scan grid needs at least one point per axis");
    }
    std::vector<ReflectionDefect> out;
    out.reserve(static_cast<std::size_t>(g1) * static_cast<std::size_t>(g2));
    for (int i = 0; i < g1; ++i) {
        for (int j = 0; j < g2; ++j) {
            const double w1 = static_cast<double>(i) / g1;
            const double w2 = static_cast<double>(j) / g2;
            out.push_back({w1, w2, reflection_defect(u, w1, w2)});
        }
    }
    return out;
}

ClassSplit classify_eigenvectors(const SpectrumData& spectrum, const CMatrix& reflection) {
    if (!spectrum.eigenvectors) {
        throw PreconditionError("classification needs eigenvectors");
    }
    const CMatrix& v = *spectrum.eigenvectors;
    if (reflection.rows() != v.rows() || reflection.cols() != v.rows()) {
        throw InvalidDimension("reflection operator does not match the eigenvectors");
    }
    const CMatrix rv = reflection * v;
    ClassSplit out;
    double err = 0.0;
    for (Eigen::Index k = 0; k < v.cols(); ++k) {
        const Complex o = v.col(k).dot(rv.col(k));
        out.overlaps.push_back(o);
        const double re = o.real();
        (re >= 0.0 || std::abs(re) < 1e-12 ? out.plus : out.minus).push_back(static_cast<std::size_t>(k));
        const double d = std::abs(o) - 1.0;
        err += d * d;
    }
    out.mse = v.cols() > 0 ? err / static_cast<double>(v.cols()) : 0.0;
    return out;
}

std::vector<ClassStatistics> split_statistics(const SpectrumData& spectrum,
                                              const std::vector<std::vector<std::size_t>>& classes) {
    std::vector<char> seen(spectrum.size(), 0);
    std::size_t total = 0;
    for (const auto& cls : classes) {
        for (std::size_t k : cls) {
            if (k >= spectrum.size() || seen[k]) {
                throw PreconditionError("classes must partition the spectrum");
            }
            seen[k] = 1;
            ++total;
        }
    }
    if (total != spectrum.size()) {
        throw PreconditionError("classes must partition the spectrum");
    }
    std::vector<ClassStatistics> out;
    for (const auto& cls : classes) {
        if (cls.size() < 3) {
            throw PreconditionError("every class needs at least three levels");
        }
        std::vector<double> angles;
        angles.reserve(cls.size());
        for (std::size_t k : cls) {
            angles.push_back(spectrum.angles[k]);
        }
        ClassStatistics st;
        st.levels = cls.size();
        st.spacings = spacings(spectrum_from_angles(std::move(angles)), true);
        st.gap_ratio = mean_gap_ratio(st.spacings);
        out.push_back(std::move(st));
    }
    return out;
}

CommutatorStructure bv_commutator_structure(int base, std::size_t n) {
    const QuantizationSpec spec = QuantizationSpec::standard(Family::BalazsVoros, base, n);
    const UnitaryMatrix b = build_map(spec);
    const CMatrix c = commutator(b.entries(), fourier_square(n, 0.0, 0.0));
    const std::size_t cell = n / static_cast<std::size_t>(base);
    const double large = 10.0 * std::sqrt(static_cast<double>(base)) / static_cast<double>(n);
    CommutatorStructure out;
    for (std::size_t y = 0; y < n; y += cell) {
        out.special_columns.push_back(y);
    }
    for (std::size_t y = 0; y < n; ++y) {
        const bool special = y % cell == 0;
        for (std::size_t x = 0; x < n; ++x) {
            const double m = std::abs(c(static_cast<Eigen::Index>(x), static_cast<Eigen::Index>(y)));
            if (x % static_cast<std::size_t>(base) == 0) {
                out.max_multiple_of_a_row = std::max(out.max_multiple_of_a_row, m);
            }
            if (!special) {
                out.max_small_entry = std::max(out.max_small_entry, m);
            }
            if (m > out.max_entry) {
                out.max_entry = m;
                out.max_row = x;
                out.max_col = y;
            }
            if (m > large) {
                out.large_entry_positions.emplace_back(x, y);
            }
        }
    }
    return out;
}

} // namespace baker
