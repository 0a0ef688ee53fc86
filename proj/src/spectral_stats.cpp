#include "baker/spectral_stats.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "baker/errors.hpp"
#include "baker/rmt.hpp"

namespace baker {

SpacingData spacings(const SpectrumData& spectrum, bool normalize) {
    const std::size_t n = spectrum.size();
    if (n < 2) {
        throw InvalidDimension("spacings need at least two eigenangles");
    }
    SpacingData out;
    out.normalized = normalize;
    out.spacings.resize(n);
    const auto& a = spectrum.angles;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        out.spacings[i] = a[i + 1] - a[i];
    }
    out.spacings[n - 1] = kTwoPi - (a[n - 1] - a[0]);
    if (normalize) {
        const double scale = static_cast<double>(n) / kTwoPi;
        for (double& s : out.spacings) {
            s *= scale;
        }
    }
    return out;
}

double mean_gap_ratio(const SpacingData& data) {
    const auto& s = data.spacings;
    const std::size_t n = s.size();
    if (n < 3) {
        throw InvalidDimension("gap ratio needs at least three spacings");
    }
    if (std::all_of(s.begin(), s.end(), [](double x) { return x == 0.0; })) {
        throw PreconditionError("gap ratio undefined for an all-zero spacing sequence");
    }
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double a = s[i];
        const double b = s[(i + 1) % n];
        if (a == 0.0 && b == 0.0) {
            total += 1.0;
        } else if (a > 0.0 && b > 0.0) {
            total += std::min(a / b, b / a);
        }
    }
    return total / static_cast<double>(n);
}

std::vector<HistogramBin> histogram(std::span<const double> values, int bins, double lo, double hi) {
    if (bins < 1) {
        throw PreconditionError("histogram needs at least one bin");
    }
    if (!(hi > lo)) {
        throw PreconditionError("histogram range is empty");
    }
    if (values.empty()) {
        throw PreconditionError("histogram of an empty sample");
    }
    const double width = (hi - lo) / bins;
    std::vector<double> counts(static_cast<std::size_t>(bins), 0.0);
    double kept = 0.0;
    for (double v : values) {
        if (v < lo || v >= hi) {
            continue;
        }
        auto k = static_cast<std::size_t>((v - lo) / width);
        k = std::min(k, counts.size() - 1);
        counts[k] += 1.0;
        kept += 1.0;
    }
    std::vector<HistogramBin> out(counts.size());
    for (std::size_t k = 0; k < counts.size(); ++k) {
        out[k].center = lo + (static_cast<double>(k) + 0.5) * width;
        out[k].density = kept > 0.0 ? counts[k] / (kept * width) : 0.0;
    }
    return out;
}

ReferenceKind parse_reference_kind(std::string_view name) {
    if (name == "GOE") {
        return ReferenceKind::GOE;
    }
    if (name == "GUE") {
        return ReferenceKind::GUE;
    }
    if (name == "Poisson") {
        return ReferenceKind::Poisson;
    }
    if (name == "TwoBlockGOE") {
        return ReferenceKind::TwoBlockGOE;
    }
    throw InvalidSpec("unknown reference curve '" + std::string(name) + "'");
}

namespace {

// Linear interpolation through the bin centres; extrapolates linearly below
// the first centre and clamps at the top.
double interpolate(const std::vector<HistogramBin>& h, double s) {
    if (s <= h.front().center) {
        const double slope = (h[1].density - h[0].density) / (h[1].center - h[0].center);
        return std::max(0.0, h[0].density + slope * (s - h[0].center));
    }
    if (s >= h.back().center) {
        return h.back().density;
    }
    const auto it = std::upper_bound(h.begin(), h.end(), s,
                                     [](double x, const HistogramBin& b) { return x < b.center; });
    const HistogramBin& right = *it;
    const HistogramBin& left = *(it - 1);
    const double w = (s - left.center) / (right.center - left.center);
    return left.density + w * (right.density - left.density);
}

std::vector<HistogramBin> two_block_goe_histogram(const ReferenceOptions& options) {
    std::vector<double> all;
    for (int k = 0; k < options.samples; ++k) {
        EnsembleSpec spec;
        spec.kind = EnsembleKind::TwoBlockCOE;
        spec.n = options.n;
        spec.seed = options.seed + static_cast<std::uint64_t>(k);
        const SpacingData s = spacings(eigendecompose(sample(spec), false), true);
        all.insert(all.end(), s.spacings.begin(), s.spacings.end());
    }
    return histogram(all, options.bins, 0.0, kDefaultHistogramMax);
}

} // namespace

std::vector<HistogramBin> reference_curves(ReferenceKind kind, std::span<const double> grid,
                                           const ReferenceOptions& options) {
    std::vector<HistogramBin> out;
    out.reserve(grid.size());
    std::vector<HistogramBin> mc;
    if (kind == ReferenceKind::TwoBlockGOE) {
        if (options.n < 4 || options.n % 2 != 0 || options.samples < 1 || options.bins < 2) {
            throw PreconditionError("2-block reference needs an even N >= 4, samples >= 1, bins >= 2");
        }
        mc = two_block_goe_histogram(options);
    }
    for (double s : grid) {
        double density = 0.0;
        switch (kind) {
        case ReferenceKind::GOE:
            density = 0.5 * kPi * s * std::exp(-0.25 * kPi * s * s);
            break;
        case ReferenceKind::GUE:
            density = 32.0 / (kPi * kPi) * s * s * std::exp(-4.0 * s * s / kPi);
            break;
        case ReferenceKind::Poisson:
            density = std::exp(-s);
            break;
        case ReferenceKind::TwoBlockGOE:
            density = interpolate(mc, s);
            break;
        }
        out.push_back({s, s < 0.0 ? 0.0 : density});
    }
    return out;
}

} // namespace baker
