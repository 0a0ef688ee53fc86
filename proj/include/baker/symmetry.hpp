#pragma once

#include <vector>

#include "baker/linalg.hpp"
#include "baker/quantizer.hpp"
#include "baker/spectral_stats.hpp"

namespace baker {

/// Permutation |x> -> |N-1-x>.
CMatrix reflection_permutation(std::size_t n);

/// (F_N^{w1,w2})^2.
CMatrix fourier_square(std::size_t n, double omega1, double omega2);

/// || F^theta U (F^theta)^{-1} - conj(U^{-1}) ||_F with the quantization's theta.
double tr_defect(const QuantizationSpec& spec, const UnitaryMatrix& u);

struct ReflectionDefect {
    double omega1 = 0.0;
    double omega2 = 0.0;
    double defect = 0.0;
};

/// ||[U, (F^w)^2]||_F on the grid w = (i/g1, j/g2), row-major in i.
std::vector<ReflectionDefect> fourier_reflection_scan(const CMatrix& u, int g1 = 50, int g2 = 50);

double reflection_defect(const CMatrix& u, double omega1, double omega2);

struct ClassSplit {
    std::vector<std::size_t> plus;
    std::vector<std::size_t> minus;
    std::vector<Complex> overlaps;  // <phi_k|R|phi_k> per eigenvector
    double mse = 0.0;               // mean of (|overlap| - 1)^2
};

/// Splits eigenvectors by the sign of Re <phi|R|phi> (ties go to S+).
ClassSplit classify_eigenvectors(const SpectrumData& spectrum, const CMatrix& reflection);

struct ClassStatistics {
    SpacingData spacings;
    double gap_ratio = 0.0;
    std::size_t levels = 0;
};

/// Spacings and gap ratio recomputed inside each class.
std::vector<ClassStatistics> split_statistics(const SpectrumData& spectrum,
                                              const std::vector<std::vector<std::size_t>>& classes);

struct CommutatorStructure {
    double max_multiple_of_a_row = 0.0;   // max |C(x,y)| over x in AZ
    double max_small_entry = 0.0;         // max |C(x,y)| over y not in (N/A)Z
    double max_entry = 0.0;
    std::size_t max_row = 0;
    std::size_t max_col = 0;
    std::vector<std::size_t> special_columns;  // (N/A)Z within [0, N)
    /// (x, y) with |C(x,y)| > 10 sqrt(A)/N, all expected in special columns.
    std::vector<std::pair<std::size_t, std::size_t>> large_entry_positions;
};

/// Entrywise structure of [B, F_N^2] for the Balazs-Voros map.
CommutatorStructure bv_commutator_structure(int base, std::size_t n);

} // namespace baker
