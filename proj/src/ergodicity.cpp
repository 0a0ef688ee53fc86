#include "baker/ergodicity.hpp"

#include <algorithm>
#include <cmath>

#include "baker/errors.hpp"

namespace baker {

PersistenceSeries persistence(const SpectrumData& spectrum, int max_time, double c) {
    const std::size_t n = spectrum.size();
    if (n < 2) {
        throw InvalidDimension("persistence needs N >= 2");
    }
    if (max_time < 0) {
        throw PreconditionError("persistence needs T >= 0");
    }
    const double nd = static_cast<double>(n);
    std::vector<double> detuning(n);
    for (std::size_t k = 0; k < n; ++k) {
        detuning[k] = spectrum.angles[k] - kTwoPi * static_cast<double>(k) / nd;
    }
    PersistenceSeries out;
    out.n = n;
    out.eta2 = c / nd;
    for (int t = 0; t <= max_time; ++t) {
        Complex sum = 0.0;
        for (double d : detuning) {
            sum += std::polar(1.0, std::fmod(d * t, kTwoPi));
        }
        out.times.push_back(t);
        out.z2.push_back(t == 0 ? 1.0 : std::min(1.0, std::norm(sum / nd)));
        out.z2_coe_ref.push_back(z2_coe(t, n));
    }
    return out;
}

double z2_coe(double t, std::size_t n) {
    const double nd = static_cast<double>(n);
    return std::exp(-4.0 * t * t * std::log(nd) / (nd * nd));
}

double delta_squared(const SffSeries& series) {
    if (series.n == 0 || series.n % 2 != 0) {
        throw PreconditionError("delta squared needs an even N");
    }
    const std::size_t half = series.n / 2;
    if (series.raw.size() < half) {
        throw PreconditionError("delta squared needs the SFF up to t = N/2");
    }
    double total = 0.0;
    for (std::size_t t = 1; t <= half; ++t) {
        const double td = static_cast<double>(t);
        total += series.raw[t - 1] / (td * td);
    }
    return 2.0 * total / static_cast<double>(series.n);
}

ErgodicityVerdict cyc_ergodicity_check(const PersistenceSeries& series, double c, double epsilon, double slack) {
    if (series.z2.empty()) {
        throw PreconditionError("empty persistence series");
    }
    const double nd = static_cast<double>(series.n);
    const double eta2 = c / nd;
    ErgodicityVerdict v;
    v.window = static_cast<int>(std::floor(nd * (1.0 - epsilon) / 2.0));
    v.min_z2 = 1.0;
    v.worst_coe_gap = INFINITY;
    v.above_cutoff = true;
    v.matches_coe = true;
    for (std::size_t k = 0; k < series.times.size(); ++k) {
        if (series.times[k] > v.window) {
            continue;
        }
        const double z = series.z2[k];
        const double gap = z - series.z2_coe_ref[k];
        v.min_z2 = std::min(v.min_z2, z);
        v.worst_coe_gap = std::min(v.worst_coe_gap, gap);
        v.above_cutoff = v.above_cutoff && z >= eta2;
        v.matches_coe = v.matches_coe && gap >= -slack / nd;
    }
    return v;
}

namespace {

double sample_at(const PersistenceSeries& s, double tau) {
    const double x = tau * static_cast<double>(s.n);
    const auto last = static_cast<double>(s.times.back());
    if (x >= last) {
        return s.z2.back();
    }
    const auto lo = static_cast<std::size_t>(std::floor(x));
    const double w = x - std::floor(x);
    return (1.0 - w) * s.z2[lo] + w * s.z2[lo + 1];
}

} // namespace

PersistenceSeries persistence_average(std::span<const PersistenceSeries> series) {
    if (series.empty()) {
        throw PreconditionError("persistence average of an empty set");
    }
    for (const PersistenceSeries& s : series) {
        if (s.times.empty() || s.times.front() != 0 || s.times.size() != s.z2.size()) {
            throw PreconditionError("persistence series must start at t = 0");
        }
    }
    PersistenceSeries out = series.front();
    const double nd = static_cast<double>(out.n);
    for (std::size_t k = 0; k < out.times.size(); ++k) {
        const double tau = out.times[k] / nd;
        double total = 0.0;
        for (const PersistenceSeries& s : series) {
            total += sample_at(s, tau);
        }
        out.z2[k] = total / static_cast<double>(series.size());
    }
    return out;
}

CMatrix dft_of_eigenbasis(const SpectrumData& spectrum) {
    if (!spectrum.eigenvectors) {
        throw PreconditionError("DFT of the eigenbasis needs eigenvectors");
    }
    const std::size_t n = spectrum.size();
    // gdft_entries(n,0,0)^dagger has entry (n,k) = N^{-1/2} e^{2 pi i n k/N}
    return *spectrum.eigenvectors * gdft_entries(n, 0.0, 0.0).adjoint();
}

} // namespace baker
