#include "baker/sff.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "baker/errors.hpp"

namespace baker {

SffSeries sff(const SpectrumData& spectrum, int max_time) {
    if (max_time < 1) {
        throw PreconditionError("SFF needs T >= 1");
    }
    const std::size_t n = spectrum.size();
    if (n == 0) {
        throw InvalidDimension("SFF of an empty spectrum");
    }
    SffSeries out;
    out.n = n;
    out.times.resize(static_cast<std::size_t>(max_time));
    out.raw.assign(static_cast<std::size_t>(max_time), 0.0);
    // advance e^{i t theta} by repeated multiplication, re-anchored every 64 steps
    std::vector<Complex> step(n), current(n);
    for (std::size_t j = 0; j < n; ++j) {
        step[j] = std::polar(1.0, spectrum.angles[j]);
        current[j] = step[j];
    }
    for (int t = 1; t <= max_time; ++t) {
        if (t % 64 == 0) {
            for (std::size_t j = 0; j < n; ++j) {
                current[j] = std::polar(1.0, std::fmod(t * spectrum.angles[j], kTwoPi));
            }
        }
        Complex sum = 0.0;
        for (const Complex& c : current) {
            sum += c;
        }
        out.times[static_cast<std::size_t>(t - 1)] = t;
        out.raw[static_cast<std::size_t>(t - 1)] = std::norm(sum) / static_cast<double>(n);
        for (std::size_t j = 0; j < n; ++j) {
            current[j] *= step[j];
        }
    }
    return out;
}

SffSeries average_sff(SffSeries series, int ell) {
    if (ell < 1) {
        throw PreconditionError("SFF averaging needs ell >= 1");
    }
    const auto len = static_cast<int>(series.raw.size());
    std::vector<double> prefix(series.raw.size() + 1, 0.0);
    for (int k = 0; k < len; ++k) {
        prefix[static_cast<std::size_t>(k) + 1] = prefix[static_cast<std::size_t>(k)] + series.raw[static_cast<std::size_t>(k)];
    }
    series.averaged.assign(series.raw.size(), 0.0);
    for (int t = 1; t <= len; ++t) {
        int half = t > ell ? ell : t - 1;
        half = std::min(half, len - t);
        const int lo = t - half;
        const int hi = t + half;
        series.averaged[static_cast<std::size_t>(t - 1)] =
            (prefix[static_cast<std::size_t>(hi)] - prefix[static_cast<std::size_t>(lo - 1)]) / (hi - lo + 1);
    }
    series.ell = ell;
    return series;
}

ResidualNorm parse_residual_norm(std::string_view name) {
    if (name == "sum-of-squares") {
        return ResidualNorm::SumOfSquares;
    }
    if (name == "l2") {
        return ResidualNorm::L2;
    }
    if (name == "rms") {
        return ResidualNorm::Rms;
    }
    throw InvalidSpec("unknown residual norm '" + std::string(name) + "'");
}

SlopeFit fit_slope(const SffSeries& series, int f, double threshold, ResidualNorm norm) {
    if (series.averaged.size() != series.raw.size() || series.averaged.empty()) {
        throw PreconditionError("fit_slope needs an averaged SFF series");
    }
    if (f < 1 || static_cast<std::size_t>(f) > series.averaged.size()) {
        throw PreconditionError("fit_slope needs 1 <= f <= T");
    }
    const double nd = static_cast<double>(series.n);
    double sxy = 0.0;
    double sxx = 0.0;
    for (int t = 1; t <= f; ++t) {
        const double x = t;
        const double y = nd * series.averaged[static_cast<std::size_t>(t - 1)];
        sxy += x * y;
        sxx += x * x;
    }
    SlopeFit fit;
    fit.f = f;
    fit.slope = sxy / sxx;
    double ss = 0.0;
    for (int t = 1; t <= f; ++t) {
        const double r = nd * series.averaged[static_cast<std::size_t>(t - 1)] - fit.slope * t;
        ss += r * r;
    }
    switch (norm) {
    case ResidualNorm::SumOfSquares:
        fit.scaled_residual = ss;
        break;
    case ResidualNorm::L2:
        fit.scaled_residual = std::sqrt(ss);
        break;
    case ResidualNorm::Rms:
        fit.scaled_residual = std::sqrt(ss / f);
        break;
    }
    fit.is_outlier = fit.scaled_residual > threshold;
    return fit;
}

double coe_reference(double tau) {
    if (!(tau > 0.0)) {
        throw PreconditionError("COE form factor needs tau > 0");
    }
    if (tau <= 1.0) {
        return 2.0 * tau - tau * std::log1p(2.0 * tau);
    }
    return 2.0 - tau * std::log((2.0 * tau + 1.0) / (2.0 * tau - 1.0));
}

double two_block_reference(double tau) {
    return coe_reference(2.0 * tau);
}

int default_ell(std::size_t n) {
    return n < 1000 ? 20 : 40;
}

int default_fit_points(std::size_t n) {
    if (n < 1000) {
        return 20;
    }
    return n < 5000 ? 40 : 60;
}

double default_residual_threshold(int base) {
    return base == 15 ? 400.0 : 100.0;
}

SlopeFit fit_spectrum(const SpectrumData& spectrum, int base, const SlopeScanParams& params) {
    const std::size_t n = spectrum.size();
    const int ell = params.ell.value_or(default_ell(n));
    const int f = params.fit_points.value_or(default_fit_points(n));
    const double threshold = params.threshold.value_or(default_residual_threshold(base));
    const SffSeries series = average_sff(sff(spectrum, f + ell), ell);
    return fit_slope(series, f, threshold, params.norm);
}

void smooth_slopes(std::vector<SlopeScanRow>& rows, double radius) {
    for (SlopeScanRow& row : rows) {
        double total = 0.0;
        int count = 0;
        for (const SlopeScanRow& other : rows) {
            const double gap = std::abs(static_cast<double>(other.n) - static_cast<double>(row.n));
            if (!other.fit.is_outlier && gap <= radius) {
                total += other.fit.slope;
                ++count;
            }
        }
        row.smoothed = count > 0 ? std::optional<double>(total / count) : std::nullopt;
    }
}

std::vector<SlopeScanRow> slope_scan(std::span<const QuantizationSpec> specs, const SlopeScanParams& params,
                                     const SpectrumProvider& provider) {
    if (specs.empty()) {
        throw InvalidSpec("slope scan needs at least one spec");
    }
    for (const QuantizationSpec& s : specs) {
        if (s.family != specs.front().family || s.base != specs.front().base) {
            throw InvalidSpec("slope scan specs must share family and A");
        }
    }
    std::vector<SlopeScanRow> rows;
    rows.reserve(specs.size());
    for (const QuantizationSpec& s : specs) {
        const SpectrumData spectrum = provider ? provider(s) : eigendecompose(build_map(s), false);
        SlopeScanRow row;
        row.n = s.n;
        row.fit = fit_spectrum(spectrum, s.base, params);
        rows.push_back(row);
    }
    std::stable_sort(rows.begin(), rows.end(), [](const SlopeScanRow& a, const SlopeScanRow& b) { return a.n < b.n; });
    smooth_slopes(rows, params.smoothing_radius);
    return rows;
}

} // namespace baker
