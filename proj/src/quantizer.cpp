#include "baker/quantizer.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "baker/errors.hpp"
#include "baker/io.hpp"
#include "baker/orbits.hpp"
#include "baker/phase_space.hpp"

namespace baker {

std::string_view to_string(Family family) {
    switch (family) {
    case Family::BalazsVoros:
        return "BalazsVoros";
    case Family::Saraceno:
        return "Saraceno";
    case Family::Generic:
        return "Generic";
    case Family::ShorBaker:
        return "ShorBaker";
    }
    return "unknown";
}

Family parse_family(std::string_view name) {
    for (Family f : {Family::BalazsVoros, Family::Saraceno, Family::Generic, Family::ShorBaker}) {
        if (name == to_string(f)) {
            return f;
        }
    }
    throw InvalidSpec("unknown quantization family '" + std::string(name) + "'");
}

namespace {

double frac(double x) {
    const double r = x - std::floor(x);
    return r >= 1.0 ? 0.0 : r;
}

std::pair<double, double> pinned_theta(Family family, double theta1, double theta2) {
    switch (family) {
    case Family::BalazsVoros:
    case Family::ShorBaker:
        return {0.0, 0.0};
    case Family::Saraceno:
        return {0.5, 0.5};
    case Family::Generic:
        break;
    }
    return {theta1, theta2};
}

bool in_unit(double x) {
    return x >= 0.0 && x < 1.0;
}

} // namespace

std::vector<double> standard_phases(Family family, int base) {
    if (base < 2) {
        throw InvalidSpec("A must be at least 2");
    }
    std::vector<double> alpha(static_cast<std::size_t>(base), 0.0);
    if (family == Family::ShorBaker) {
        for (int j = 0; j < base; ++j) {
            alpha[static_cast<std::size_t>(j)] = static_cast<double>((j * j) % base) / base;
        }
    }
    return alpha;
}

std::vector<double> random_phases(int count, std::uint64_t seed) {
    std::mt19937_64 gen(seed);
    std::vector<double> alpha(static_cast<std::size_t>(std::max(count, 0)));
    for (double& a : alpha) {
        a = static_cast<double>(gen() >> 11) * 0x1.0p-53;
    }
    return alpha;
}

QuantizationSpec QuantizationSpec::standard(Family family, int base, std::size_t n, double theta1, double theta2) {
    QuantizationSpec s;
    s.family = family;
    s.base = base;
    s.n = n;
    std::tie(s.theta1, s.theta2) = pinned_theta(family, theta1, theta2);
    s.alpha = standard_phases(family, base);
    return s;
}

QuantizationSpec QuantizationSpec::with_phases(Family family, int base, std::size_t n, std::vector<double> alpha,
                                               double theta1, double theta2) {
    QuantizationSpec s;
    s.family = family;
    s.base = base;
    s.n = n;
    std::tie(s.theta1, s.theta2) = pinned_theta(family, theta1, theta2);
    for (double& a : alpha) {
        a = frac(a);
    }
    s.alpha = std::move(alpha);
    return s;
}

QuantizationSpec QuantizationSpec::random_phases(Family family, int base, std::size_t n, std::uint64_t seed,
                                                 double theta1, double theta2) {
    QuantizationSpec s = with_phases(family, base, n, baker::random_phases(base, seed), theta1, theta2);
    s.alpha_seed = seed;
    return s;
}

void QuantizationSpec::validate() const {
    if (base < 2) {
        throw InvalidSpec("A must be at least 2");
    }
    if (n == 0) {
        throw InvalidSpec("N must be positive");
    }
    if (n % static_cast<std::size_t>(base) != 0) {
        throw InvalidSpec("A = " + std::to_string(base) + " does not divide N = " + std::to_string(n));
    }
    if (alpha.size() != static_cast<std::size_t>(base)) {
        throw InvalidSpec("expected " + std::to_string(base) + " block phases, got " + std::to_string(alpha.size()));
    }
    for (double a : alpha) {
        if (!in_unit(a)) {
            throw InvalidSpec("block phases must lie in [0,1)");
        }
    }
    if (!in_unit(theta1) || !in_unit(theta2)) {
        throw InvalidSpec("boundary phases must lie in [0,1)");
    }
    const auto pinned = pinned_theta(family, theta1, theta2);
    if (pinned.first != theta1 || pinned.second != theta2) {
        throw InvalidSpec(std::string(to_string(family)) + " fixes the boundary phases");
    }
}

std::string QuantizationSpec::canonical() const {
    std::ostringstream out;
    out << "family=" << to_string(family) << ";A=" << base << ";N=" << n << ";theta=" << io::format_double(theta1) << ','
        << io::format_double(theta2) << ";alpha=";
    for (std::size_t j = 0; j < alpha.size(); ++j) {
        out << (j ? "," : "") << io::format_double(alpha[j]);
    }
    if (alpha_seed) {
        out << ";seed=" << *alpha_seed;
    }
    return out.str();
}

CMatrix block_factor(const QuantizationSpec& spec) {
    spec.validate();
    const std::size_t m = spec.n / static_cast<std::size_t>(spec.base);
    const auto ms = static_cast<Eigen::Index>(m);
    CMatrix out = CMatrix::Zero(static_cast<Eigen::Index>(spec.n), static_cast<Eigen::Index>(spec.n));
    CMatrix shared;
    if (is_generic_type(spec.family)) {
        shared = gdft_entries(m, spec.theta1, spec.theta2);
    }
    for (int j = 0; j < spec.base; ++j) {
        const Complex phase = std::polar(1.0, kTwoPi * spec.alpha[static_cast<std::size_t>(j)]);
        const Eigen::Index at = j * ms;
        if (is_generic_type(spec.family)) {
            out.block(at, at, ms, ms) = phase * shared;
        } else {
            out.block(at, at, ms, ms) = phase * gdft_entries(m, 0.0, -static_cast<double>(j) / spec.base);
        }
    }
    return out;
}

UnitaryMatrix build_map(const QuantizationSpec& spec) {
    const CMatrix blocks = block_factor(spec);
    const CMatrix f = gdft_entries(spec.n, spec.theta1, spec.theta2);
    return UnitaryMatrix(f.adjoint() * blocks);
}

namespace {

std::size_t check_tstep(const QuantizationSpec& spec, int t) {
    spec.validate();
    if (t < 1) {
        throw InvalidSpec("t-step propagator needs t >= 1");
    }
    const std::uint64_t cells = checked_power(spec.base, t);
    if (spec.n % cells != 0) {
        throw InvalidSpec("A^t = " + std::to_string(cells) + " does not divide N = " + std::to_string(spec.n));
    }
    return static_cast<std::size_t>(cells);
}

double alpha_turns(const QuantizationSpec& spec, const OrbitCode& code) {
    const std::vector<int> counts = digit_counts(code);
    double turns = 0.0;
    for (std::size_t j = 0; j < counts.size(); ++j) {
        turns += counts[j] * spec.alpha[j];
    }
    return turns;
}

template <typename BlockFn>
MixedPropagator assemble_tstep(const QuantizationSpec& spec, int t, std::size_t cells, BlockFn block_of) {
    MixedPropagator prop;
    prop.t = t;
    prop.base = spec.base;
    prop.n = spec.n;
    prop.block_index.resize(cells);
    const auto m = static_cast<Eigen::Index>(spec.n / cells);
    prop.entries = CMatrix::Zero(static_cast<Eigen::Index>(spec.n), static_cast<Eigen::Index>(spec.n));
    for (std::uint64_t nu = 0; nu < cells; ++nu) {
        const OrbitCode code(nu, spec.base, t);
        const std::uint64_t row = reversal(code).nu();
        prop.block_index[nu] = row;
        prop.entries.block(static_cast<Eigen::Index>(row) * m, static_cast<Eigen::Index>(nu) * m, m, m) =
            block_of(code);
    }
    return prop;
}

} // namespace

MixedPropagator build_tstep_generic(const QuantizationSpec& spec, int t) {
    if (!is_generic_type(spec.family)) {
        throw InvalidSpec("build_tstep_generic does not handle ShorBaker");
    }
    const std::size_t cells = check_tstep(spec, t);
    const CMatrix dft = gdft_entries(spec.n / cells, spec.theta1, spec.theta2);
    return assemble_tstep(spec, t, cells, [&](const OrbitCode& code) -> CMatrix {
        return std::polar(1.0, kTwoPi * alpha_turns(spec, code)) * dft;
    });
}

MixedPropagator build_tstep_shor(const QuantizationSpec& spec, int t) {
    if (spec.family != Family::ShorBaker) {
        throw InvalidSpec("build_tstep_shor needs the ShorBaker family");
    }
    const std::size_t cells = check_tstep(spec, t);
    const std::size_t m = spec.n / cells;
    return assemble_tstep(spec, t, cells, [&](const OrbitCode& code) -> CMatrix {
        const Rational shift = (phi(code) * Rational::make(-1, spec.base)).mod1();
        const double turns = shift.value() + alpha_turns(spec, code);
        const double beta = -static_cast<double>(code.nu()) / static_cast<double>(cells);
        return std::polar(1.0, kTwoPi * turns) * gdft_entries(m, 0.0, beta);
    });
}

CMatrix propagator_position_form(const MixedPropagator& propagator, double theta1, double theta2) {
    return gdft_entries(propagator.n, theta1, theta2).adjoint() * propagator.entries;
}

std::pair<double, double> classical_map(int base, double q, double p) {
    if (base < 2) {
        throw InvalidSpec("A must be at least 2");
    }
    const double scaled = base * q;
    const double j = std::floor(scaled);
    return {scaled - j, (p + j) / base};
}

CoherentStep coherent_state_step(const QuantizationSpec& spec, const UnitaryMatrix& map, double q0, double p0,
                                 double sigma) {
    spec.validate();
    if (map.dim() != spec.n) {
        throw InvalidDimension("map dimension does not match the spec");
    }
    if (!(sigma > 0.0)) {
        throw PreconditionError("coherent state squeezing must be positive");
    }
    if (!in_unit(q0) || !in_unit(p0)) {
        throw PreconditionError("coherent state centre must lie in [0,1)^2");
    }
    const double margin = 3.0 / std::sqrt(static_cast<double>(spec.base) * static_cast<double>(spec.n));
    const double cell = q0 * spec.base;
    const double gap = std::min(cell - std::floor(cell), std::ceil(cell) - cell) / spec.base;
    if (gap < margin) {
        throw PreconditionError("q0 lies within " + io::format_double(margin) + " of a cell boundary");
    }
    CoherentStep step;
    step.block = static_cast<int>(std::floor(cell));
    std::tie(step.q, step.p) = classical_map(spec.base, q0, p0);
    const CVector initial = coherent_state(q0, p0, spec.n, spec.theta1, spec.theta2, sigma);
    const double a2 = static_cast<double>(spec.base) * spec.base;
    const CVector image = coherent_state(step.q, step.p, spec.n, spec.theta1, spec.theta2, sigma / a2);
    const Complex overlap = image.dot(map.entries() * initial);
    step.overlap = std::abs(overlap);
    step.phase = std::arg(overlap);
    return step;
}

CoherentStep coherent_state_step(const QuantizationSpec& spec, double q0, double p0, double sigma) {
    return coherent_state_step(spec, build_map(spec), q0, p0, sigma);
}

} // namespace baker
