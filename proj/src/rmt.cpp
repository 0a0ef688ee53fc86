#include "baker/rmt.hpp"

#include <cmath>
#include <random>
#include <string>

#include "baker/errors.hpp"
#include "baker/io.hpp"

namespace baker {

namespace {

constexpr EnsembleKind kAllKinds[] = {EnsembleKind::CUE,
                                      EnsembleKind::COE,
                                      EnsembleKind::TwoBlockCOE,
                                      EnsembleKind::TwoBlockCUE,
                                      EnsembleKind::InterpCOEtoCUE,
                                      EnsembleKind::Interp2COEtoCOE,
                                      EnsembleKind::Interp2COEtoCUE};

bool is_two_block(EnsembleKind kind) {
    return kind == EnsembleKind::TwoBlockCOE || kind == EnsembleKind::TwoBlockCUE ||
           kind == EnsembleKind::Interp2COEtoCOE || kind == EnsembleKind::Interp2COEtoCUE;
}

CMatrix haar(std::size_t n, std::mt19937_64& gen) {
    const auto size = static_cast<Eigen::Index>(n);
    std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
    CMatrix z(size, size);
    for (Eigen::Index c = 0; c < size; ++c) {
        for (Eigen::Index r = 0; r < size; ++r) {
            const double re = normal(gen);
            const double im = normal(gen);
            z(r, c) = Complex(re, im);
        }
    }
    Eigen::HouseholderQR<CMatrix> qr(z);
    CMatrix q = qr.householderQ();
    const CMatrix& r = qr.matrixQR();
    for (Eigen::Index k = 0; k < size; ++k) {
        const Complex d = r(k, k);
        const double mag = std::abs(d);
        q.col(k) *= mag > 0.0 ? d / mag : Complex(1.0);
    }
    return q;
}

CMatrix haar_blocks(std::size_t n, bool two_block, std::mt19937_64& gen) {
    if (!two_block) {
        return haar(n, gen);
    }
    const CMatrix first = haar(n / 2, gen);
    const CMatrix second = haar(n / 2, gen);
    return direct_sum(first, second);
}

// [0, 2pi) -> (-pi, pi]; eigenvalues at -1 are nudged so the branch is deterministic.
double principal_angle(double a) {
    if (a > kPi) {
        a -= kTwoPi;
    }
    if (kPi - std::abs(a) < 1e-12) {
        a += 1e-9;
        if (a > kPi) {
            a -= kTwoPi;
        }
    }
    return a;
}

CMatrix circular_orthogonal(const CMatrix& w) {
    return w.transpose() * w;
}

} // namespace

std::string_view to_string(EnsembleKind kind) {
    switch (kind) {
    case EnsembleKind::CUE:
        return "CUE";
    case EnsembleKind::COE:
        return "COE";
    case EnsembleKind::TwoBlockCOE:
        return "TwoBlockCOE";
    case EnsembleKind::TwoBlockCUE:
        return "TwoBlockCUE";
    case EnsembleKind::InterpCOEtoCUE:
        return "InterpCOEtoCUE";
    case EnsembleKind::Interp2COEtoCOE:
        return "Interp2COEtoCOE";
    case EnsembleKind::Interp2COEtoCUE:
        return "Interp2COEtoCUE";
    }
    return "unknown";
}

EnsembleKind parse_ensemble_kind(std::string_view name) {
    for (EnsembleKind k : kAllKinds) {
        if (name == to_string(k)) {
            return k;
        }
    }
    throw InvalidSpec("unknown ensemble kind '" + std::string(name) + "'");
}

void EnsembleSpec::validate() const {
    if (n == 0) {
        throw InvalidSpec("ensemble dimension must be positive");
    }
    if (is_two_block(kind) && n % 2 != 0) {
        throw InvalidSpec(std::string(to_string(kind)) + " needs an even N");
    }
    if (!(t_interp >= 0.0 && t_interp <= 1.0)) {
        throw InvalidSpec("t_interp must lie in [0,1]");
    }
}

std::string EnsembleSpec::canonical() const {
    return "ensemble=" + std::string(to_string(kind)) + ";N=" + std::to_string(n) +
           ";t=" + io::format_double(t_interp) + ";seed=" + std::to_string(seed);
}

UnitaryMatrix haar_unitary(std::size_t n, std::uint64_t seed) {
    if (n == 0) {
        throw InvalidDimension("Haar unitary needs N >= 1");
    }
    std::mt19937_64 gen(seed);
    return UnitaryMatrix(haar(n, gen));
}

CMatrix unitary_log(const CMatrix& u) {
    const SpectrumData spec = eigendecompose(u, true);
    const CMatrix& v = *spec.eigenvectors;
    Eigen::VectorXd angles(static_cast<Eigen::Index>(spec.size()));
    for (std::size_t k = 0; k < spec.size(); ++k) {
        angles[static_cast<Eigen::Index>(k)] = principal_angle(spec.angles[k]);
    }
    return v * angles.asDiagonal() * v.adjoint();
}

CMatrix geodesic(const CMatrix& u0, const CMatrix& u1, double t) {
    if (u0.rows() != u1.rows() || u0.cols() != u1.cols()) {
        throw InvalidDimension("geodesic endpoints differ in shape");
    }
    const SpectrumData spec = eigendecompose(CMatrix(u0.adjoint() * u1), true);
    const CMatrix& v = *spec.eigenvectors;
    CVector phases(static_cast<Eigen::Index>(spec.size()));
    for (std::size_t k = 0; k < spec.size(); ++k) {
        phases[static_cast<Eigen::Index>(k)] = std::polar(1.0, t * principal_angle(spec.angles[k]));
    }
    return u0 * (v * phases.asDiagonal() * v.adjoint());
}

UnitaryMatrix sample(const EnsembleSpec& spec) {
    spec.validate();
    std::mt19937_64 gen(spec.seed);
    const std::size_t n = spec.n;
    switch (spec.kind) {
    case EnsembleKind::CUE:
        return UnitaryMatrix(haar(n, gen));
    case EnsembleKind::COE:
        return UnitaryMatrix(circular_orthogonal(haar(n, gen)));
    case EnsembleKind::TwoBlockCUE:
        return UnitaryMatrix(haar_blocks(n, true, gen));
    case EnsembleKind::TwoBlockCOE:
        return UnitaryMatrix(circular_orthogonal(haar_blocks(n, true, gen)));
    case EnsembleKind::InterpCOEtoCUE: {
        const CMatrix u0 = circular_orthogonal(haar(n, gen));
        const CMatrix u1 = haar(n, gen);
        return UnitaryMatrix(geodesic(u0, u1, spec.t_interp));
    }
    case EnsembleKind::Interp2COEtoCUE: {
        const CMatrix u0 = circular_orthogonal(haar_blocks(n, true, gen));
        const CMatrix u1 = haar(n, gen);
        return UnitaryMatrix(geodesic(u0, u1, spec.t_interp));
    }
    case EnsembleKind::Interp2COEtoCOE: {
        const CMatrix v = haar_blocks(n, true, gen);
        const CMatrix w = haar(n, gen);
        const CMatrix f = geodesic(v, w, spec.t_interp);
        return UnitaryMatrix(circular_orthogonal(f));
    }
    }
    throw InvalidSpec("unhandled ensemble kind");
}

SpectrumData uniform_angles(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 gen(seed);
    std::uniform_real_distribution<double> uniform(0.0, kTwoPi);
    std::vector<double> angles(n);
    for (double& a : angles) {
        a = uniform(gen);
    }
    return spectrum_from_angles(std::move(angles));
}

} // namespace baker
