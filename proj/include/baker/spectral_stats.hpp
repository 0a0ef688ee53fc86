#pragma once

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "baker/linalg.hpp"

namespace baker {

/// Cyclic nearest-neighbour gaps of a spectrum, s_i = theta_{i+1} - theta_i
/// with the wraparound gap last. Normalized spacings are scaled by N/2pi.
struct SpacingData {
    std::vector<double> spacings;
    bool normalized = false;
};

SpacingData spacings(const SpectrumData& spectrum, bool normalize);

/// Mean over cyclic i of min(s_{i+1}/s_i, s_i/s_{i+1}).
double mean_gap_ratio(const SpacingData& data);

struct RmtReference {
    static constexpr double GOE = 0.53590;
    static constexpr double TwoBlockGOE = 0.423415;
    static constexpr double GUE = 0.60266;
    static constexpr double TwoBlockGUE = 0.422085;
    static constexpr double Poisson = 0.38629;
};

struct HistogramBin {
    double center = 0.0;
    double density = 0.0;
};

inline constexpr int kDefaultBins = 50;
inline constexpr double kDefaultHistogramMax = 4.0;

/// Density histogram over [lo, hi); samples outside the range are dropped and
/// the in-range mass is normalized to area 1.
std::vector<HistogramBin> histogram(std::span<const double> values, int bins = kDefaultBins, double lo = 0.0,
                                    double hi = kDefaultHistogramMax);

enum class ReferenceKind { GOE, GUE, Poisson, TwoBlockGOE };

ReferenceKind parse_reference_kind(std::string_view name);

struct ReferenceOptions {
    std::size_t n = 200;        // matrix size for the Monte-Carlo overlay
    int samples = 40;
    std::uint64_t seed = 1;
    int bins = 80;
};

/// Spacing densities at the grid points: GOE/GUE Wigner surmises, e^{-s},
/// and a Monte-Carlo 2-block COE histogram interpolated to the grid.
std::vector<HistogramBin> reference_curves(ReferenceKind kind, std::span<const double> grid,
                                           const ReferenceOptions& options = {});

} // namespace baker
