#pragma once

#include <complex>
#include <cstddef>
#include <optional>
#include <vector>

#include <Eigen/Dense>

namespace baker {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

inline constexpr double kTwoPi = 6.283185307179586476925286766559;
inline constexpr double kPi = 3.141592653589793238462643383280;

/// Dense N x N matrix that is unitary up to rounding. The Frobenius norm of
/// U U^dagger - I is measured once at construction and carried along.
class UnitaryMatrix {
public:
    explicit UnitaryMatrix(CMatrix entries);

    std::size_t dim() const noexcept { return static_cast<std::size_t>(entries_.rows()); }
    const CMatrix& entries() const noexcept { return entries_; }
    double unitarity_defect() const noexcept { return defect_; }

    Complex operator()(std::size_t row, std::size_t col) const {
        return entries_(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col));
    }

private:
    CMatrix entries_;
    double defect_;
};

/// Sorted eigenangles in [0, 2pi), optionally with the matching eigenvectors
/// (column k belongs to angles[k]).
struct SpectrumData {
    std::vector<double> angles;
    std::optional<CMatrix> eigenvectors;

    std::size_t size() const noexcept { return angles.size(); }
};

/// Generalized DFT, entry (j,k) = N^{-1/2} exp(-2 pi i (j+theta1)(k+theta2)/N).
UnitaryMatrix build_gdft(std::size_t n, double theta1, double theta2);

/// Same matrix as build_gdft without the unitarity bookkeeping; used by the
/// builders that assemble larger operators from DFT blocks.
CMatrix gdft_entries(std::size_t n, double theta1, double theta2);

/// Full spectrum of a unitary matrix. The residual of the result is checked;
/// a failing check raises ConvergenceError.
SpectrumData eigendecompose(const UnitaryMatrix& u, bool with_vectors);
SpectrumData eigendecompose(const CMatrix& u, bool with_vectors);

double frobenius_norm(const CMatrix& m);

/// V diag(exp(i angles)) V^dagger; requires eigenvectors.
CMatrix reassemble(const SpectrumData& spectrum);

/// U V - V U.
CMatrix commutator(const CMatrix& u, const CMatrix& v);

/// Block-diagonal direct sum.
CMatrix direct_sum(const CMatrix& a, const CMatrix& b);

/// Maps an arbitrary real angle into [0, 2pi).
double wrap_angle(double angle);

/// Builds a SpectrumData from raw angles (wrapped and sorted, ties by input order).
SpectrumData spectrum_from_angles(std::vector<double> angles);

} // namespace baker
