#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "baker/linalg.hpp"
#include "baker/quantizer_fwd.hpp"

namespace baker {

/// Recipe for one quantized A-baker's map.
///
/// The boundary phases are pinned by the family: (0,0) for BalazsVoros and
/// ShorBaker, (1/2,1/2) for Saraceno, free for Generic. alpha holds the A
/// block phases in turns; the "standard" phases are all zero except for
/// ShorBaker, whose standard phases are alpha_j = j^2/A mod 1.
struct QuantizationSpec {
    Family family = Family::BalazsVoros;
    int base = 2;
    std::size_t n = 2;
    double theta1 = 0.0;
    double theta2 = 0.0;
    std::vector<double> alpha;
    std::optional<std::uint64_t> alpha_seed;

    static QuantizationSpec standard(Family family, int base, std::size_t n, double theta1 = 0.0,
                                     double theta2 = 0.0);
    static QuantizationSpec with_phases(Family family, int base, std::size_t n, std::vector<double> alpha,
                                        double theta1 = 0.0, double theta2 = 0.0);
    /// alpha_j i.i.d. uniform on [0,1) drawn from the seed.
    static QuantizationSpec random_phases(Family family, int base, std::size_t n, std::uint64_t seed,
                                          double theta1 = 0.0, double theta2 = 0.0);

    /// Throws InvalidSpec when an invariant is violated.
    void validate() const;

    /// Stable textual form, used as the cache key.
    std::string canonical() const;
};

/// Standard block phases of a family (zeros, or j^2/A for ShorBaker).
std::vector<double> standard_phases(Family family, int base);

/// i.i.d. uniform phases in [0,1); bit-stable for a given seed.
std::vector<double> random_phases(int count, std::uint64_t seed);

/// Position-basis unitary of the quantization.
UnitaryMatrix build_map(const QuantizationSpec& spec);

/// Block-diagonal middle factor: direct sum of e^{2 pi i alpha_j} times the
/// family's DFT block (so the map is (F_N^theta)^{-1} times this).
CMatrix block_factor(const QuantizationSpec& spec);

/// t-step propagator in the mixed momentum-position basis.
struct MixedPropagator {
    int t = 1;
    int base = 2;
    std::size_t n = 0;
    CMatrix entries;
    /// block_index[nu] = momentum block receiving position block nu (= reverse(nu)).
    std::vector<std::uint64_t> block_index;

    std::size_t block_size() const noexcept { return n / block_index.size(); }
};

MixedPropagator build_tstep_generic(const QuantizationSpec& spec, int t);
MixedPropagator build_tstep_shor(const QuantizationSpec& spec, int t);

/// Position-basis form (F_N^theta)^{-1} * mixed, for trace comparisons.
CMatrix propagator_position_form(const MixedPropagator& propagator, double theta1, double theta2);

struct CoherentStep {
    double q = 0.0;           // classical image
    double p = 0.0;
    int block = 0;            // floor(A q0)
    double overlap = 0.0;     // |<image state| U |initial state>|
    double phase = 0.0;       // arg of the same overlap
};

/// Propagates the torus coherent state at (q0,p0) one step and compares it
/// with the squeezed coherent state (width sigma/A^2) at the classical image.
CoherentStep coherent_state_step(const QuantizationSpec& spec, const UnitaryMatrix& map, double q0, double p0,
                                 double sigma = 1.0);
CoherentStep coherent_state_step(const QuantizationSpec& spec, double q0, double p0, double sigma = 1.0);

/// Classical A-baker's map.
std::pair<double, double> classical_map(int base, double q, double p);

} // namespace baker
