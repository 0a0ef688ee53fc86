#include "baker/orbits.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "baker/errors.hpp"

namespace baker {

namespace {

using i128 = __int128;

i128 gcd128(i128 a, i128 b) {
    if (a < 0) {
        a = -a;
    }
    if (b < 0) {
        b = -b;
    }
    while (b != 0) {
        const i128 r = a % b;
        a = b;
        b = r;
    }
    return a;
}

i128 mod_positive(i128 a, i128 m) {
    const i128 r = a % m;
    return r < 0 ? r + m : r;
}

// Digits a_1..a_t of nu, most significant first.
void fill_digits(std::uint64_t nu, int base, int length, int* out) {
    for (int j = length - 1; j >= 0; --j) {
        out[j] = static_cast<int>(nu % static_cast<std::uint64_t>(base));
        nu /= static_cast<std::uint64_t>(base);
    }
}

std::uint64_t from_digits(const int* digits, int base, int length) {
    std::uint64_t nu = 0;
    for (int j = 0; j < length; ++j) {
        nu = nu * static_cast<std::uint64_t>(base) + static_cast<std::uint64_t>(digits[j]);
    }
    return nu;
}

// P with phi = -P / A^{t-1}: P = sum_{j=2}^t a_j A^{t-j} L_{j-1}, L_k = sum_{i<=k} a_i A^{i-1}.
i128 phi_numerator(const int* digits, int base, int length) {
    std::vector<i128> power(static_cast<std::size_t>(length) + 1, 1);
    for (int k = 1; k <= length; ++k) {
        power[static_cast<std::size_t>(k)] = power[static_cast<std::size_t>(k) - 1] * base;
    }
    i128 total = 0;
    i128 prefix = 0;
    for (int j = 1; j <= length; ++j) {
        const int a = digits[j - 1];
        if (j >= 2) {
            total += static_cast<i128>(a) * power[static_cast<std::size_t>(length - j)] * prefix;
        }
        prefix += static_cast<i128>(a) * power[static_cast<std::size_t>(j - 1)];
    }
    return total;
}

void check_alpha(int base, std::span<const double> alpha) {
    if (base < 2) {
        throw InvalidSpec("A must be at least 2");
    }
    if (alpha.size() != static_cast<std::size_t>(base)) {
        throw InvalidSpec("expected " + std::to_string(base) + " block phases, got " + std::to_string(alpha.size()));
    }
}

double wrap_turns(double x) {
    return x - std::floor(x);
}

} // namespace

std::uint64_t checked_power(int base, int exponent) {
    if (base < 2 || exponent < 0) {
        throw InvalidSpec("A^t needs A >= 2 and t >= 0");
    }
    std::uint64_t value = 1;
    for (int k = 0; k < exponent; ++k) {
        if (value > (std::uint64_t{1} << 62) / static_cast<std::uint64_t>(base)) {
            throw InvalidSpec("A^t overflows the supported range");
        }
        value *= static_cast<std::uint64_t>(base);
    }
    return value;
}

OrbitCode::OrbitCode(std::uint64_t nu, int base, int length) : nu_(nu), base_(base), length_(length) {
    if (length < 1) {
        throw InvalidSpec("orbit code length must be positive");
    }
    if (nu >= checked_power(base, length)) {
        throw InvalidSpec("orbit code nu must be below A^t");
    }
}

std::vector<int> OrbitCode::digits() const {
    std::vector<int> out(static_cast<std::size_t>(length_));
    fill_digits(nu_, base_, length_, out.data());
    return out;
}

OrbitCode reversal(const OrbitCode& code) {
    std::vector<int> d = code.digits();
    std::reverse(d.begin(), d.end());
    return OrbitCode(from_digits(d.data(), code.base(), code.length()), code.base(), code.length());
}

OrbitCode reflect(const OrbitCode& code) {
    return OrbitCode(checked_power(code.base(), code.length()) - 1 - code.nu(), code.base(), code.length());
}

std::vector<int> digit_counts(const OrbitCode& code) {
    std::vector<int> counts(static_cast<std::size_t>(code.base()), 0);
    for (int a : code.digits()) {
        ++counts[static_cast<std::size_t>(a)];
    }
    return counts;
}

OrbitCode rotate(const OrbitCode& code) {
    std::vector<int> d = code.digits();
    std::rotate(d.begin(), d.begin() + 1, d.end());
    return OrbitCode(from_digits(d.data(), code.base(), code.length()), code.base(), code.length());
}

bool is_repetition(const OrbitCode& code) {
    const std::vector<int> d = code.digits();
    const int t = code.length();
    for (int period = 1; period < t; ++period) {
        if (t % period != 0) {
            continue;
        }
        bool same = true;
        for (int j = period; j < t && same; ++j) {
            same = d[static_cast<std::size_t>(j)] == d[static_cast<std::size_t>(j - period)];
        }
        if (same) {
            return true;
        }
    }
    return false;
}

Rational Rational::make(__int128 num, __int128 den) {
    if (den == 0) {
        throw PreconditionError("rational with zero denominator");
    }
    if (den < 0) {
        num = -num;
        den = -den;
    }
    const i128 g = gcd128(num, den);
    if (g > 1) {
        num /= g;
        den /= g;
    }
    constexpr i128 lo = std::numeric_limits<std::int64_t>::min();
    constexpr i128 hi = std::numeric_limits<std::int64_t>::max();
    if (num < lo || num > hi || den > hi) {
        throw PreconditionError("rational overflow");
    }
    return Rational{static_cast<std::int64_t>(num), static_cast<std::int64_t>(den)};
}

Rational Rational::mod1() const {
    return make(mod_positive(num, den), den);
}

Rational operator+(const Rational& a, const Rational& b) {
    return Rational::make(static_cast<i128>(a.num) * b.den + static_cast<i128>(b.num) * a.den,
                          static_cast<i128>(a.den) * b.den);
}

Rational operator-(const Rational& a, const Rational& b) {
    return Rational::make(static_cast<i128>(a.num) * b.den - static_cast<i128>(b.num) * a.den,
                          static_cast<i128>(a.den) * b.den);
}

Rational operator*(const Rational& a, const Rational& b) {
    return Rational::make(static_cast<i128>(a.num) * b.num, static_cast<i128>(a.den) * b.den);
}

Rational action(const OrbitCode& code) {
    const std::uint64_t cells = checked_power(code.base(), code.length());
    return Rational::make(static_cast<i128>(code.nu()) * reversal(code).nu(), static_cast<i128>(cells) - 1);
}

Rational phi(const OrbitCode& code) {
    const std::vector<int> d = code.digits();
    const std::uint64_t scale = checked_power(code.base(), code.length() - 1);
    return Rational::make(-phi_numerator(d.data(), code.base(), code.length()), scale);
}

Rational shor_orbit_phase(const OrbitCode& code) {
    const std::uint64_t cells = checked_power(code.base(), code.length());
    const Rational first =
        Rational::make(static_cast<i128>(code.nu()) * reversal(code).nu(),
                       static_cast<i128>(cells) * (static_cast<i128>(cells) - 1));
    return first - phi(code) * Rational::make(1, code.base());
}

TraceApproximation trace_po(Family family, int base, int t, std::uint64_t n, double theta1, double theta2,
                            std::span<const double> alpha) {
    check_alpha(base, alpha);
    if (t < 1) {
        throw InvalidSpec("trace_po needs t >= 1");
    }
    std::uint64_t cells = 0;
    try {
        cells = checked_power(base, t);
    } catch (const InvalidSpec&) {
        cells = kOrbitEnumerationCap + 1;
    }
    if (cells > kOrbitEnumerationCap) {
        throw InvalidSpec("A^t exceeds the orbit enumeration cap of 2^26");
    }
    const i128 m = static_cast<i128>(cells) - 1;
    const i128 big = static_cast<i128>(cells) * m; // A^t (A^t - 1)
    const bool shor = family == Family::ShorBaker;
    const i128 n_mod = static_cast<i128>(n % static_cast<std::uint64_t>(shor ? big : m));

    std::vector<int> digits(static_cast<std::size_t>(t));
    std::vector<int> counts(static_cast<std::size_t>(base));
    Complex sum = 0.0;
    for (std::uint64_t nu = 0; nu < cells; ++nu) {
        fill_digits(nu, base, t, digits.data());
        std::fill(counts.begin(), counts.end(), 0);
        std::uint64_t rev = 0;
        for (int j = t - 1; j >= 0; --j) {
            rev = rev * static_cast<std::uint64_t>(base) + static_cast<std::uint64_t>(digits[static_cast<std::size_t>(j)]);
            ++counts[static_cast<std::size_t>(digits[static_cast<std::size_t>(j)])];
        }
        double turns = 0.0;
        for (int j = 0; j < base; ++j) {
            turns += counts[static_cast<std::size_t>(j)] * alpha[static_cast<std::size_t>(j)];
        }
        const i128 prod = static_cast<i128>(nu) * rev;
        if (shor) {
            // N nu nubar/(A^t-1) + nu nubar/(A^t(A^t-1)) + P/A^t over the common denominator A^t(A^t-1)
            const i128 p = phi_numerator(digits.data(), base, t);
            const i128 prod_big = mod_positive(prod, big);
            i128 num = mod_positive(n_mod * static_cast<i128>(cells) % big * prod_big, big);
            num = mod_positive(num + prod_big + mod_positive(p, big) * m % big, big);
            turns += static_cast<double>(num) / static_cast<double>(big);
        } else {
            const i128 num = n_mod * mod_positive(prod, m) % m;
            turns += static_cast<double>(num) / static_cast<double>(m);
        }
        sum += std::polar(1.0, kTwoPi * wrap_turns(turns));
    }
    TraceApproximation out;
    out.t = t;
    out.value = sum / std::pow(static_cast<double>(base), 0.5 * t);
    out.family = family;
    out.alpha.assign(alpha.begin(), alpha.end());
    out.theta1 = theta1;
    out.theta2 = theta2;
    out.n = n;
    return out;
}

Complex diag_sff_correction_ratio(Family family, int base, int t, std::span<const double> alpha) {
    check_alpha(base, alpha);
    const bool shor = family == Family::ShorBaker;
    Complex s = 0.0;
    for (int j = 0; j < base; ++j) {
        double turns = alpha[static_cast<std::size_t>(j)] - alpha[static_cast<std::size_t>(base - 1 - j)];
        if (shor) {
            turns += 2.0 * j / base;
        }
        s += std::polar(1.0, kTwoPi * wrap_turns(turns));
    }
    Complex ratio = std::pow(s / static_cast<double>(base), t);
    if (shor) {
        ratio *= std::polar(1.0, kTwoPi * wrap_turns(static_cast<double>(t) / base));
    }
    return ratio;
}

double diag_sff_prediction(Family family, int base, int t, std::uint64_t n, std::span<const double> alpha) {
    if (n == 0) {
        throw InvalidSpec("N must be positive");
    }
    const double lead = 2.0 * t / static_cast<double>(n);
    return lead + lead * diag_sff_correction_ratio(family, base, t, alpha).real();
}

SlopeClass slope_class(Family family, int base, std::span<const double> alpha, double tolerance) {
    check_alpha(base, alpha);
    for (int j = 0; j < base; ++j) {
        double diff = alpha[static_cast<std::size_t>(base - 1 - j)] - alpha[static_cast<std::size_t>(j)];
        if (family == Family::ShorBaker) {
            diff -= (2.0 * j + 1.0) / base;
        }
        const double r = wrap_turns(diff);
        if (std::min(r, 1.0 - r) > tolerance) {
            return SlopeClass::Two;
        }
    }
    return SlopeClass::Four;
}

} // namespace baker
