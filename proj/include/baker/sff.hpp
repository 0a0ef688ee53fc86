#pragma once

#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "baker/linalg.hpp"
#include "baker/quantizer.hpp"

namespace baker {

/// Spectral form factor |sum_j e^{i t theta_j}|^2 / N on t = 1..T. `averaged`
/// is empty until average_sff fills it.
struct SffSeries {
    std::size_t n = 0;
    std::vector<int> times;
    std::vector<double> raw;
    std::vector<double> averaged;
    int ell = 0;

    std::size_t length() const noexcept { return times.size(); }
};

SffSeries sff(const SpectrumData& spectrum, int max_time);

/// Window mean of raw over [t-ell, t+ell] for t > ell and over [1, 2t-1]
/// otherwise; near T the window is shrunk symmetrically.
SffSeries average_sff(SffSeries series, int ell);

enum class ResidualNorm { SumOfSquares, L2, Rms };

ResidualNorm parse_residual_norm(std::string_view name);

struct SlopeFit {
    double slope = 0.0;
    double scaled_residual = 0.0;
    int f = 0;
    bool is_outlier = false;
};

/// Least-squares line through the origin of averaged SFF against tau = t/N
/// on t = 1..f. The residual is measured on y = N * SFF against x = t.
SlopeFit fit_slope(const SffSeries& series, int f, double threshold,
                   ResidualNorm norm = ResidualNorm::Rms);

/// Ensemble-averaged COE form factor.
double coe_reference(double tau);
/// 2-block COE form factor, coe_reference(2 tau).
double two_block_reference(double tau);

int default_ell(std::size_t n);
int default_fit_points(std::size_t n);
double default_residual_threshold(int base);

struct SlopeScanParams {
    std::optional<int> ell;
    std::optional<int> fit_points;
    std::optional<double> threshold;
    ResidualNorm norm = ResidualNorm::Rms;
    double smoothing_radius = 10.0;
};

struct SlopeScanRow {
    std::size_t n = 0;
    SlopeFit fit;
    /// Mean slope over non-outliers with |N' - N| <= radius; empty when every
    /// such neighbour is an outlier.
    std::optional<double> smoothed;
};

using SpectrumProvider = std::function<SpectrumData(const QuantizationSpec&)>;

/// Fits the early-time slope for every spec and smooths over N.
std::vector<SlopeScanRow> slope_scan(std::span<const QuantizationSpec> specs, const SlopeScanParams& params,
                                     const SpectrumProvider& provider = {});

/// Fit of one spectrum with the defaults resolved for (N, A).
SlopeFit fit_spectrum(const SpectrumData& spectrum, int base, const SlopeScanParams& params);

/// Neighbour smoothing step of slope_scan, exposed for testing.
void smooth_slopes(std::vector<SlopeScanRow>& rows, double radius);

} // namespace baker
