#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "baker/linalg.hpp"
#include "baker/quantizer_fwd.hpp"

namespace baker {

/// Length-t base-A string a_1..a_t (most significant digit first) encoding
/// nu = sum a_j A^{t-j}; labels a period-t orbit of the A-ary shift.
class OrbitCode {
public:
    OrbitCode(std::uint64_t nu, int base, int length);

    std::uint64_t nu() const noexcept { return nu_; }
    int base() const noexcept { return base_; }
    int length() const noexcept { return length_; }
    std::vector<int> digits() const;

    friend bool operator==(const OrbitCode&, const OrbitCode&) = default;

private:
    std::uint64_t nu_;
    int base_;
    int length_;
};

/// A^t, throwing InvalidSpec if it does not fit comfortably in 64 bits.
std::uint64_t checked_power(int base, int exponent);

OrbitCode reversal(const OrbitCode& code);
/// R(nu) = A^t - 1 - nu, i.e. every digit a -> A-1-a.
OrbitCode reflect(const OrbitCode& code);
/// eta_0..eta_{A-1}: how many times each digit occurs.
std::vector<int> digit_counts(const OrbitCode& code);
/// One-step cyclic rotation a_1 a_2..a_t -> a_2..a_t a_1.
OrbitCode rotate(const OrbitCode& code);
/// True if the string is a repetition of a strictly shorter string.
bool is_repetition(const OrbitCode& code);

/// Exact reduced fraction with 64-bit parts; arithmetic runs in 128 bits and
/// throws on overflow of the reduced result.
struct Rational {
    std::int64_t num = 0;
    std::int64_t den = 1;

    static Rational make(__int128 num, __int128 den);
    double value() const noexcept { return static_cast<double>(num) / static_cast<double>(den); }
    /// Representative of this value modulo 1, in [0, 1).
    Rational mod1() const;

    friend Rational operator+(const Rational& a, const Rational& b);
    friend Rational operator-(const Rational& a, const Rational& b);
    friend Rational operator*(const Rational& a, const Rational& b);
    friend bool operator==(const Rational&, const Rational&) = default;
};

/// Classical action nu * reverse(nu) / (A^t - 1).
Rational action(const OrbitCode& code);

/// phi(nu) = -sum_{j=2}^t a_j sum_{i=1}^{j-1} a_i A^{i-j}; the extra phase
/// of the Shor-type block DFTs along the orbit.
Rational phi(const OrbitCode& code);

/// nu*reverse(nu) / (A^t (A^t - 1)) - phi(nu)/A; invariant under cyclic rotation.
Rational shor_orbit_phase(const OrbitCode& code);

struct TraceApproximation {
    int t = 0;
    Complex value;
    Family family = Family::BalazsVoros;
    std::vector<double> alpha;
    double theta1 = 0.0;
    double theta2 = 0.0;
    std::uint64_t n = 0;
};

/// Largest orbit count enumerated by trace_po.
inline constexpr std::uint64_t kOrbitEnumerationCap = std::uint64_t{1} << 26;

/// Periodic-orbit sum for tr U^t: sum over nu of A^{-t/2} e^{2 pi i N S_nu}
/// times the block phases e^{2 pi i sum alpha_j eta_j(nu)}; the Shor family
/// also carries e^{2 pi i nu nubar/(A^t(A^t-1))} e^{-2 pi i phi(nu)/A}.
TraceApproximation trace_po(Family family, int base, int t, std::uint64_t n, double theta1, double theta2,
                            std::span<const double> alpha);

/// Diagonal-approximation SFF at integer time t (real part).
double diag_sff_prediction(Family family, int base, int t, std::uint64_t n, std::span<const double> alpha);

/// Second term of diag_sff_prediction divided by 2t/N.
Complex diag_sff_correction_ratio(Family family, int base, int t, std::span<const double> alpha);

enum class SlopeClass { Four, Two };

/// Early-time SFF slope predicted from the block phases.
SlopeClass slope_class(Family family, int base, std::span<const double> alpha, double tolerance = 1e-9);

} // namespace baker
