#pragma once

#include <cstddef>
#include <vector>

#include "baker/linalg.hpp"

namespace baker {

/// Torus coherent state centred at (q0, p0): a Gaussian
/// exp(-pi N sigma (q-q0)^2 + 2 pi i N p0 q) sampled on the lattice
/// q_n = (n + theta2)/N and periodized over the images q + m, |m| <= 5, with
/// the Bloch factor e^{-2 pi i m theta1}. Unit norm.
CVector coherent_state(double q0, double p0, std::size_t n, double theta1, double theta2, double sigma = 1.0);

/// Husimi density |<coherent(q,p)|v>|^2 sampled at q_i = i/gq, p_j = j/gp.
class HusimiGrid {
public:
    HusimiGrid(std::size_t gq, std::size_t gp);

    std::size_t q_points() const noexcept { return gq_; }
    std::size_t p_points() const noexcept { return gp_; }
    double q(std::size_t i) const noexcept { return static_cast<double>(i) / static_cast<double>(gq_); }
    double p(std::size_t j) const noexcept { return static_cast<double>(j) / static_cast<double>(gp_); }

    double& at(std::size_t i, std::size_t j) { return values_[i * gp_ + j]; }
    double at(std::size_t i, std::size_t j) const { return values_[i * gp_ + j]; }
    const std::vector<double>& values() const noexcept { return values_; }

    /// Grid of (q,p) -> (1-q, 1-p).
    HusimiGrid reflected() const;
    /// Grid of (q,p) -> (p,q); requires a square grid.
    HusimiGrid transposed() const;

private:
    std::size_t gq_;
    std::size_t gp_;
    std::vector<double> values_;
};

HusimiGrid husimi(const CVector& v, std::size_t gq, std::size_t gp, double theta1, double theta2,
                  double sigma = 1.0);

/// Husimi density of the mixed state sum_k w_k |v_k><v_k| over the columns of
/// `vectors` (equal weights 1/cols).
HusimiGrid husimi_mixed(const CMatrix& vectors, std::size_t gq, std::size_t gp, double theta1, double theta2,
                        double sigma = 1.0);

/// Relative L1 distance sum|a-b| / sum|a|.
double relative_l1(const HusimiGrid& a, const HusimiGrid& b);

} // namespace baker
