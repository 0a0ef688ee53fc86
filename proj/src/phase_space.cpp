#include "baker/phase_space.hpp"

#include <cmath>

#include "baker/errors.hpp"

namespace baker {

namespace {

constexpr int kImages = 5;
// exp(-x) below 1e-18 is dropped.
constexpr double kGaussianCut = 41.5;

struct SparseState {
    std::vector<std::size_t> index;
    std::vector<Complex> value;
};

// Unnormalized coherent state restricted to the lattice sites where it is
// non-negligible. `scratch` must be an N-vector of zeros and is restored.
SparseState sparse_coherent(double q0, double p0, std::size_t n, double theta1, double theta2, double sigma,
                            std::vector<Complex>& scratch, std::vector<char>& touched) {
    const double nd = static_cast<double>(n);
    const double width = std::sqrt(kGaussianCut / (kPi * nd * sigma));
    SparseState out;
    for (int m = -kImages; m <= kImages; ++m) {
        // sites with |q_n + m - q0| <= width
        const double lo = nd * (q0 - m - width) - theta2;
        const double hi = nd * (q0 - m + width) - theta2;
        const long first = std::max(0L, static_cast<long>(std::ceil(lo)));
        const long last = std::min(static_cast<long>(n) - 1, static_cast<long>(std::floor(hi)));
        if (first > last) {
            continue;
        }
        const Complex bloch = std::polar(1.0, -kTwoPi * m * theta1);
        for (long site = first; site <= last; ++site) {
            const auto s = static_cast<std::size_t>(site);
            const double q = (static_cast<double>(site) + theta2) / nd + m;
            const double d = q - q0;
            const double envelope = std::exp(-kPi * nd * sigma * d * d);
            // N p0 q reduced mod 1 before forming the phase
            const double turns = std::fmod(p0 * (static_cast<double>(site) + theta2) + nd * p0 * m, 1.0);
            scratch[s] += bloch * std::polar(envelope, kTwoPi * turns);
            if (!touched[s]) {
                touched[s] = 1;
                out.index.push_back(s);
            }
        }
    }
    out.value.reserve(out.index.size());
    for (std::size_t s : out.index) {
        out.value.push_back(scratch[s]);
        scratch[s] = 0.0;
        touched[s] = 0;
    }
    return out;
}

void check_args(std::size_t n, double sigma) {
    if (n < 2) {
        throw InvalidDimension("coherent states need N >= 2");
    }
    if (!(sigma > 0.0)) {
        throw PreconditionError("coherent state squeezing must be positive");
    }
}

} // namespace

CVector coherent_state(double q0, double p0, std::size_t n, double theta1, double theta2, double sigma) {
    check_args(n, sigma);
    std::vector<Complex> scratch(n, 0.0);
    std::vector<char> touched(n, 0);
    const SparseState s = sparse_coherent(q0, p0, n, theta1, theta2, sigma, scratch, touched);
    CVector v = CVector::Zero(static_cast<Eigen::Index>(n));
    for (std::size_t k = 0; k < s.index.size(); ++k) {
        v[static_cast<Eigen::Index>(s.index[k])] = s.value[k];
    }
    return v / v.norm();
}

HusimiGrid::HusimiGrid(std::size_t gq, std::size_t gp) : gq_(gq), gp_(gp), values_(gq * gp, 0.0) {
    if (gq == 0 || gp == 0) {
        throw InvalidDimension("Husimi grid needs at least one point per axis");
    }
}

HusimiGrid HusimiGrid::reflected() const {
    HusimiGrid out(gq_, gp_);
    for (std::size_t i = 0; i < gq_; ++i) {
        for (std::size_t j = 0; j < gp_; ++j) {
            out.at((gq_ - i) % gq_, (gp_ - j) % gp_) = at(i, j);
        }
    }
    return out;
}

HusimiGrid HusimiGrid::transposed() const {
    if (gq_ != gp_) {
        throw InvalidDimension("transpose needs a square Husimi grid");
    }
    HusimiGrid out(gq_, gp_);
    for (std::size_t i = 0; i < gq_; ++i) {
        for (std::size_t j = 0; j < gp_; ++j) {
            out.at(j, i) = at(i, j);
        }
    }
    return out;
}

HusimiGrid husimi_mixed(const CMatrix& vectors, std::size_t gq, std::size_t gp, double theta1, double theta2,
                        double sigma) {
    const auto n = static_cast<std::size_t>(vectors.rows());
    check_args(n, sigma);
    if (vectors.cols() == 0) {
        throw InvalidDimension("Husimi needs at least one vector");
    }
    HusimiGrid grid(gq, gp);
    std::vector<Complex> scratch(n, 0.0);
    std::vector<char> touched(n, 0);
    const double weight = 1.0 / static_cast<double>(vectors.cols());
    for (std::size_t i = 0; i < gq; ++i) {
        for (std::size_t j = 0; j < gp; ++j) {
            const SparseState s = sparse_coherent(grid.q(i), grid.p(j), n, theta1, theta2, sigma, scratch, touched);
            double norm2 = 0.0;
            for (const Complex& c : s.value) {
                norm2 += std::norm(c);
            }
            double total = 0.0;
            for (Eigen::Index col = 0; col < vectors.cols(); ++col) {
                Complex overlap = 0.0;
                for (std::size_t k = 0; k < s.index.size(); ++k) {
                    overlap += std::conj(s.value[k]) * vectors(static_cast<Eigen::Index>(s.index[k]), col);
                }
                total += std::norm(overlap);
            }
            grid.at(i, j) = weight * total / norm2;
        }
    }
    return grid;
}

HusimiGrid husimi(const CVector& v, std::size_t gq, std::size_t gp, double theta1, double theta2, double sigma) {
    return husimi_mixed(CMatrix(v), gq, gp, theta1, theta2, sigma);
}

double relative_l1(const HusimiGrid& a, const HusimiGrid& b) {
    if (a.q_points() != b.q_points() || a.p_points() != b.p_points()) {
        throw InvalidDimension("Husimi grids differ in shape");
    }
    double diff = 0.0;
    double mass = 0.0;
    for (std::size_t k = 0; k < a.values().size(); ++k) {
        diff += std::abs(a.values()[k] - b.values()[k]);
        mass += std::abs(a.values()[k]);
    }
    return diff / mass;
}

} // namespace baker
