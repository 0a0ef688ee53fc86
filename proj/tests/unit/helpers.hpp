#pragma once

#include <cmath>
#include <complex>
#include <vector>

#include "baker/linalg.hpp"

namespace testing {

// Naive O(N^2) DFT with the same conventions as build_gdft, written out
// entry by entry.
inline baker::CMatrix naive_gdft(std::size_t n, double t1, double t2) {
    baker::CMatrix f(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    const double scale = 1.0 / std::sqrt(static_cast<double>(n));
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t k = 0; k < n; ++k) {
            const double phase = -2.0 * M_PI * (j + t1) * (k + t2) / static_cast<double>(n);
            f(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(k)) = scale * std::polar(1.0, phase);
        }
    }
    return f;
}

inline double unitarity(const baker::CMatrix& u) {
    const auto n = u.rows();
    return (u * u.adjoint() - baker::CMatrix::Identity(n, n)).norm();
}

// tr(U^t) by repeated multiplication.
inline std::complex<double> power_trace(const baker::CMatrix& u, int t) {
    baker::CMatrix p = baker::CMatrix::Identity(u.rows(), u.cols());
    for (int k = 0; k < t; ++k) {
        p = p * u;
    }
    return p.trace();
}

inline baker::CMatrix permutation_minus(std::size_t n) {
    baker::CMatrix p = baker::CMatrix::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (std::size_t x = 0; x < n; ++x) {
        p(static_cast<Eigen::Index>((n - x) % n), static_cast<Eigen::Index>(x)) = 1.0;
    }
    return p;
}

inline baker::CMatrix permutation_reverse(std::size_t n) {
    baker::CMatrix p = baker::CMatrix::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (std::size_t x = 0; x < n; ++x) {
        p(static_cast<Eigen::Index>(n - 1 - x), static_cast<Eigen::Index>(x)) = 1.0;
    }
    return p;
}

} // namespace testing
