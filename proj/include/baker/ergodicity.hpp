#pragma once

#include <span>
#include <vector>

#include "baker/linalg.hpp"
#include "baker/sff.hpp"

namespace baker {

/// z^2(t) = |N^{-1} sum_n e^{i(E_n - 2 pi n/N) t}|^2 on t = 0..T with the COE
/// reference exp(-4 t^2 ln N / N^2) and the cutoff eta^2 = c/N.
struct PersistenceSeries {
    std::size_t n = 0;
    std::vector<int> times;
    std::vector<double> z2;
    std::vector<double> z2_coe_ref;
    double eta2 = 0.0;
};

inline constexpr double kDefaultCutoff = 1.0;
inline constexpr double kDefaultEpsilon = 0.05;
inline constexpr double kDefaultSlack = 5.0;

PersistenceSeries persistence(const SpectrumData& spectrum, int max_time, double c = kDefaultCutoff);

double z2_coe(double t, std::size_t n);

/// 2 sum_{t=1}^{N/2} SFF(t) / (N t^2).
double delta_squared(const SffSeries& series);

struct ErgodicityVerdict {
    bool above_cutoff = false;
    bool matches_coe = false;
    int window = 0;            // checked t range is 0..window
    double min_z2 = 0.0;
    double worst_coe_gap = 0.0;  // min over the window of z2 - z2_coe
};

ErgodicityVerdict cyc_ergodicity_check(const PersistenceSeries& series, double c = kDefaultCutoff,
                                       double epsilon = kDefaultEpsilon, double slack = kDefaultSlack);

/// Pointwise mean after resampling every series to tau = t/N of the first
/// series (linear interpolation in tau).
PersistenceSeries persistence_average(std::span<const PersistenceSeries> series);

/// Columns C_k = N^{-1/2} sum_n e^{2 pi i k n/N} v_n of the DFT of the
/// eigenbasis (eigenvectors ordered by ascending angle).
CMatrix dft_of_eigenbasis(const SpectrumData& spectrum);

} // namespace baker
