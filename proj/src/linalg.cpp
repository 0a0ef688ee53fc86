#include "baker/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "baker/errors.hpp"
#include "lapack.hpp"

namespace baker {

namespace {

// Rotation applied before the Cayley transform; an irrational fraction of a
// turn keeps special angles such as pi away from the pole of the transform.
constexpr double kInitialShift = 0.6180339887498949;
// |h| above this means an eigenvalue sits within ~1e-7 of the pole.
constexpr double kPoleLimit = 1e7;

double compute_defect(const CMatrix& u) {
    const Eigen::Index n = u.rows();
    CMatrix gram = CMatrix::Zero(n, n);
    gram.selfadjointView<Eigen::Lower>().rankUpdate(u);
    gram.triangularView<Eigen::StrictlyUpper>() = gram.adjoint();
    gram.diagonal().array() -= 1.0;
    return gram.norm();
}

struct RawSpectrum {
    std::vector<double> angles;
    CMatrix vectors;
    bool ok = false;
};

// Eigenvalues of a unitary U through the Hermitian matrix
//   H = i (I - U') (I + U')^{-1},  U' = e^{i shift} U,
// which shares eigenvectors with U and has eigenvalues tan(theta'/2).
RawSpectrum cayley_attempt(const CMatrix& u, double shift, bool with_vectors) {
    const lapack_int n = static_cast<lapack_int>(u.rows());
    RawSpectrum out;

    CMatrix m = std::polar(1.0, shift) * u;
    m.diagonal().array() += 1.0;
    std::vector<lapack_int> pivots(static_cast<std::size_t>(n));
    lapack_int info = LAPACKE_zgetrf(LAPACK_COL_MAJOR, n, n, m.data(), n, pivots.data());
    if (info != 0) {
        return out;
    }
    info = LAPACKE_zgetri(LAPACK_COL_MAJOR, n, m.data(), n, pivots.data());
    if (info != 0) {
        return out;
    }

    // H = i (2 (I + U')^{-1} - I)
    CMatrix h = Complex(0.0, 2.0) * m;
    h.diagonal().array() -= Complex(0.0, 1.0);
    CMatrix herm = 0.5 * (h + h.adjoint());

    Eigen::VectorXd values(n);
    info = LAPACKE_zheevd(LAPACK_COL_MAJOR, with_vectors ? 'V' : 'N', 'L', n, herm.data(), n,
                          values.data());
    if (info != 0) {
        return out;
    }

    out.angles.resize(static_cast<std::size_t>(n));
    double largest = 0.0;
    for (lapack_int k = 0; k < n; ++k) {
        largest = std::max(largest, std::abs(values[k]));
        out.angles[static_cast<std::size_t>(k)] = wrap_angle(2.0 * std::atan(values[k]) - shift);
    }
    if (with_vectors) {
        out.vectors = std::move(herm);
    }
    out.ok = largest < kPoleLimit;
    return out;
}

// Shift that puts the pole of the Cayley transform in the middle of the
// largest gap of an approximate spectrum.
double shift_from_spectrum(std::vector<double> angles) {
    std::sort(angles.begin(), angles.end());
    double best_gap = kTwoPi - (angles.back() - angles.front());
    double best_mid = wrap_angle(angles.back() + 0.5 * best_gap);
    for (std::size_t k = 0; k + 1 < angles.size(); ++k) {
        const double gap = angles[k + 1] - angles[k];
        if (gap > best_gap) {
            best_gap = gap;
            best_mid = angles[k] + 0.5 * gap;
        }
    }
    return wrap_angle(kPi - best_mid);
}

RawSpectrum general_eigensolver(const CMatrix& u, bool with_vectors) {
    const lapack_int n = static_cast<lapack_int>(u.rows());
    CMatrix work = u;
    CVector values(n);
    CMatrix right;
    if (with_vectors) {
        right.resize(n, n);
    }
    lapack_int info = LAPACKE_zgeev(LAPACK_COL_MAJOR, 'N', with_vectors ? 'V' : 'N', n, work.data(), n,
                                    values.data(), nullptr, 1, with_vectors ? right.data() : nullptr,
                                    with_vectors ? n : 1);
    RawSpectrum out;
    if (info != 0) {
        return out;
    }
    out.angles.resize(static_cast<std::size_t>(n));
    for (lapack_int k = 0; k < n; ++k) {
        out.angles[static_cast<std::size_t>(k)] = wrap_angle(std::arg(values[k]));
    }
    if (with_vectors) {
        for (lapack_int k = 0; k < n; ++k) {
            right.col(k).normalize();
        }
        out.vectors = std::move(right);
    }
    out.ok = true;
    return out;
}

double residual_of(const CMatrix& u, const RawSpectrum& raw, bool with_vectors) {
    const Eigen::Index n = u.rows();
    if (with_vectors) {
        CMatrix scaled = raw.vectors;
        for (Eigen::Index k = 0; k < n; ++k) {
            scaled.col(k) *= std::polar(1.0, raw.angles[static_cast<std::size_t>(k)]);
        }
        CMatrix diff = u * raw.vectors - scaled;
        double worst = 0.0;
        for (Eigen::Index k = 0; k < n; ++k) {
            worst = std::max(worst, diff.col(k).norm());
            worst = std::max(worst, std::abs(raw.vectors.col(k).norm() - 1.0));
        }
        return worst;
    }
    // Power-sum check against tr U and tr U^2.
    Complex s1 = 0.0;
    Complex s2 = 0.0;
    for (double a : raw.angles) {
        s1 += std::polar(1.0, a);
        s2 += std::polar(1.0, 2.0 * a);
    }
    const Complex t1 = u.trace();
    const Complex t2 = (u.array() * u.transpose().array()).sum();
    return std::max(std::abs(s1 - t1), std::abs(s2 - t2));
}

SpectrumData finish(RawSpectrum raw, bool with_vectors) {
    const std::size_t n = raw.angles.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return raw.angles[a] < raw.angles[b]; });
    SpectrumData out;
    out.angles.reserve(n);
    for (std::size_t k : order) {
        out.angles.push_back(raw.angles[k]);
    }
    if (with_vectors) {
        CMatrix sorted(raw.vectors.rows(), raw.vectors.cols());
        for (std::size_t k = 0; k < n; ++k) {
            sorted.col(static_cast<Eigen::Index>(k)) = raw.vectors.col(static_cast<Eigen::Index>(order[k]));
        }
        out.eigenvectors = std::move(sorted);
    }
    return out;
}

} // namespace

UnitaryMatrix::UnitaryMatrix(CMatrix entries) : entries_(std::move(entries)), defect_(0.0) {
    if (entries_.rows() == 0 || entries_.rows() != entries_.cols()) {
        throw InvalidDimension("unitary matrix must be square with dim >= 1");
    }
    defect_ = compute_defect(entries_);
}

double wrap_angle(double angle) {
    double r = std::fmod(angle, kTwoPi);
    if (r < 0.0) {
        r += kTwoPi;
    }
    if (r >= kTwoPi) {
        r = 0.0;
    }
    return r;
}

CMatrix gdft_entries(std::size_t n, double theta1, double theta2) {
    if (n == 0) {
        throw InvalidDimension("generalized DFT needs N >= 1");
    }
    const auto size = static_cast<Eigen::Index>(n);
    const double scale = 1.0 / std::sqrt(static_cast<double>(n));
    CMatrix f(size, size);
    // (j+a)(k+b) = jk + j b + k a + a b; jk is reduced mod N exactly so the
    // phase argument stays O(1).
    for (std::size_t k = 0; k < n; ++k) {
        for (std::size_t j = 0; j < n; ++j) {
            const double integral = static_cast<double>((j * k) % n);
            const double frac = static_cast<double>(j) * theta2 + static_cast<double>(k) * theta1 + theta1 * theta2;
            const double phase = -kTwoPi * (integral + frac) / static_cast<double>(n);
            f(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(k)) = std::polar(scale, phase);
        }
    }
    return f;
}

UnitaryMatrix build_gdft(std::size_t n, double theta1, double theta2) {
    return UnitaryMatrix(gdft_entries(n, theta1, theta2));
}

SpectrumData eigendecompose(const UnitaryMatrix& u, bool with_vectors) {
    return eigendecompose(u.entries(), with_vectors);
}

SpectrumData eigendecompose(const CMatrix& u, bool with_vectors) {
    const Eigen::Index n = u.rows();
    if (n == 0 || n != u.cols()) {
        throw InvalidDimension("eigendecompose needs a square matrix with dim >= 1");
    }
    const double tolerance = (with_vectors ? 1e-6 : 1e-8) * static_cast<double>(n);

    RawSpectrum raw = cayley_attempt(u, kInitialShift, with_vectors);
    if (!raw.ok && !raw.angles.empty()) {
        raw = cayley_attempt(u, shift_from_spectrum(raw.angles), with_vectors);
    }
    double residual = raw.ok ? residual_of(u, raw, with_vectors) : INFINITY;
    if (!raw.ok || residual > tolerance) {
        // Schur-based fallback, also covers matrices that are not quite unitary.
        raw = general_eigensolver(u, with_vectors);
        if (!raw.ok) {
            throw ConvergenceError("eigensolver did not converge", residual);
        }
        residual = residual_of(u, raw, with_vectors);
        if (residual > tolerance) {
            throw ConvergenceError("eigendecomposition failed the residual check", residual);
        }
    }
    return finish(std::move(raw), with_vectors);
}

double frobenius_norm(const CMatrix& m) {
    return m.norm();
}

CMatrix reassemble(const SpectrumData& spectrum) {
    if (!spectrum.eigenvectors) {
        throw PreconditionError("reassemble needs eigenvectors");
    }
    const CMatrix& v = *spectrum.eigenvectors;
    CMatrix scaled = v;
    for (Eigen::Index k = 0; k < v.cols(); ++k) {
        scaled.col(k) *= std::polar(1.0, spectrum.angles[static_cast<std::size_t>(k)]);
    }
    return scaled * v.adjoint();
}

CMatrix commutator(const CMatrix& u, const CMatrix& v) {
    CMatrix out = u * v;
    out.noalias() -= v * u;
    return out;
}

CMatrix direct_sum(const CMatrix& a, const CMatrix& b) {
    CMatrix out = CMatrix::Zero(a.rows() + b.rows(), a.cols() + b.cols());
    out.topLeftCorner(a.rows(), a.cols()) = a;
    out.bottomRightCorner(b.rows(), b.cols()) = b;
    return out;
}

SpectrumData spectrum_from_angles(std::vector<double> angles) {
    for (double& a : angles) {
        a = wrap_angle(a);
    }
    std::stable_sort(angles.begin(), angles.end());
    SpectrumData out;
    out.angles = std::move(angles);
    return out;
}

} // namespace baker
