#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "baker/errors.hpp"
#include "baker/quantizer.hpp"
#include "baker/symmetry.hpp"
#include "helpers.hpp"

using namespace baker;

namespace {

const double kCoe = 0.5359;

CMatrix bv(int base, std::size_t n) {
    return build_map(QuantizationSpec::standard(Family::BalazsVoros, base, n)).entries();
}

double naive_reflection_defect(const CMatrix& u, double w1, double w2) {
    const CMatrix f = testing::naive_gdft(static_cast<std::size_t>(u.rows()), w1, w2);
    const CMatrix r = f * f;
    return (u * r - r * u).norm();
}

double fraction_above(const std::vector<Complex>& overlaps, double level) {
    const auto n = std::count_if(overlaps.begin(), overlaps.end(),
                                 [&](Complex o) { return std::abs(o) > level; });
    return static_cast<double>(n) / static_cast<double>(overlaps.size());
}

} // namespace

TEST_CASE("reflection operators") {
    CHECK((reflection_permutation(7) - testing::permutation_reverse(7)).norm() == 0.0);
    CHECK_THROWS_AS(reflection_permutation(0), InvalidDimension);

    for (std::size_t n : {5u, 8u, 31u}) {
        CHECK((fourier_square(n, 0.0, 0.0) - testing::permutation_minus(n)).norm() < 1e-12);
        CHECK((fourier_square(n, 0.5, 0.5) + testing::permutation_reverse(n)).norm() < 1e-12);
        const CMatrix f = testing::naive_gdft(n, 0.3, 0.8);
        CHECK((fourier_square(n, 0.3, 0.8) - f * f).norm() < 1e-12);
    }
}

TEST_CASE("time reversal defect") {
    const auto bv64 = QuantizationSpec::standard(Family::BalazsVoros, 2, 64);
    const auto sar = QuantizationSpec::standard(Family::Saraceno, 3, 63);
    const auto gen = QuantizationSpec::standard(Family::Generic, 2, 64, 0.2, 0.7);
    CHECK(tr_defect(bv64, build_map(bv64)) < 1e-10);
    CHECK(tr_defect(sar, build_map(sar)) < 1e-10);
    CHECK(tr_defect(gen, build_map(gen)) > 0.1);

    // direct F U F^-1 - conj(U^-1)
    for (const auto& spec : {bv64, sar, gen}) {
        const CMatrix u = build_map(spec).entries();
        const CMatrix f = testing::naive_gdft(spec.n, spec.theta1, spec.theta2);
        const double direct = (f * u * f.inverse() - u.inverse().conjugate()).norm();
        CHECK(tr_defect(spec, build_map(spec)) == doctest::Approx(direct).epsilon(1e-8));
    }

    CHECK_THROWS_AS(tr_defect(bv64, build_map(sar)), InvalidDimension);
}

TEST_CASE("Fourier reflection scan") {
    const CMatrix sar = build_map(QuantizationSpec::standard(Family::Saraceno, 2, 64)).entries();
    CHECK(reflection_defect(sar, 0.5, 0.5) < 1e-10);
    const auto coarse = fourier_reflection_scan(sar, 2, 2);
    REQUIRE(coarse.size() == 4);
    CHECK(coarse[3].omega1 == 0.5);
    CHECK(coarse[3].omega2 == 0.5);
    CHECK(coarse[3].defect < 1e-10);

    const CMatrix gen = build_map(QuantizationSpec::standard(Family::Generic, 2, 64, 0.5, 0.0)).entries();
    CHECK(reflection_defect(gen, 0.0, 0.0) < 1e-10);

    const std::size_t n = 100;
    const CMatrix b = bv(2, n);
    const auto scan = fourier_reflection_scan(b, 20, 20);
    REQUIRE(scan.size() == 400);
    CHECK(scan[21].omega1 == doctest::Approx(0.05));
    CHECK(scan[21].omega2 == doctest::Approx(0.05));
    double lowest = scan.front().defect;
    for (const auto& d : scan) {
        CHECK(d.defect >= 0.0);
        lowest = std::min(lowest, d.defect);
    }
    CHECK(lowest > 0.05 * std::sqrt(static_cast<double>(n)));

    for (const auto& [w1, w2] : {std::pair{0.3, 0.6}, std::pair{0.85, 0.1}}) {
        CHECK(reflection_defect(b, w1, w2) == doctest::Approx(naive_reflection_defect(b, w1, w2)).epsilon(1e-9));
    }

    CHECK_THROWS_AS(fourier_reflection_scan(b, 0, 3), PreconditionError);
}

TEST_CASE("reflection defect is periodic in omega with period N") {
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (std::size_t n : {12u, 30u}) {
        const CMatrix u = bv(3, n);
        const double big = static_cast<double>(n);
        for (int s = 0; s < 5; ++s) {
            const double w1 = unit(rng);
            const double w2 = unit(rng);
            const double base = reflection_defect(u, w1, w2);
            CHECK(reflection_defect(u, w1 + big, w2) == doctest::Approx(base).epsilon(1e-9));
            CHECK(reflection_defect(u, w1, w2 + big) == doctest::Approx(base).epsilon(1e-9));
            CHECK(reflection_defect(u, w1 - big, w2 + big) == doctest::Approx(base).epsilon(1e-9));
        }
    }
}

TEST_CASE("a unit shift of omega1 shifts the Fourier rows") {
    const std::size_t n = 9;
    const double w1 = 0.27;
    const double w2 = 0.64;
    const CMatrix f = gdft_entries(n, w1, w2);
    const CMatrix g = gdft_entries(n, w1 + 1.0, w2);
    const auto last = static_cast<Eigen::Index>(n - 1);
    CHECK((g.topRows(last) - f.bottomRows(last)).norm() < 1e-12);
    CHECK((g.row(last) - std::polar(1.0, -2.0 * M_PI * w2) * f.row(0)).norm() < 1e-12);
}

TEST_CASE("classification by an exact symmetry") {
    const SpectrumData sp = eigendecompose(bv(2, 40), true);
    const ClassSplit id = classify_eigenvectors(sp, CMatrix::Identity(40, 40));
    CHECK(id.plus.size() == 40);
    CHECK(id.minus.empty());
    CHECK(id.mse < 1e-24);
    for (const Complex o : id.overlaps) {
        CHECK(std::abs(o - Complex(1.0, 0.0)) < 1e-12);
    }

    const CMatrix neg = -CMatrix::Identity(40, 40);
    const ClassSplit minus = classify_eigenvectors(sp, neg);
    CHECK(minus.minus.size() == 40);

    CHECK_THROWS_AS(classify_eigenvectors(eigendecompose(bv(2, 40), false), neg), PreconditionError);
    CHECK_THROWS_AS(classify_eigenvectors(sp, CMatrix::Identity(10, 10)), InvalidDimension);
}

TEST_CASE("Saraceno sectors of the exact reflection") {
    const std::size_t n = 998;
    const SpectrumData sp = eigendecompose(build_map(QuantizationSpec::standard(Family::Saraceno, 2, n)), true);
    const ClassSplit split = classify_eigenvectors(sp, reflection_permutation(n));
    CHECK(split.plus.size() + split.minus.size() == n);
    CHECK(split.mse < 1e-16);
    const auto stats = split_statistics(sp, {split.plus, split.minus});
    REQUIRE(stats.size() == 2);
    for (const auto& st : stats) {
        CHECK(st.gap_ratio == doctest::Approx(kCoe).epsilon(0.02 / kCoe));
    }
}

TEST_CASE("Balazs-Voros A=2 overlaps cluster near +-1") {
    for (std::size_t n : {1000u, 1002u}) {
        const SpectrumData sp = eigendecompose(build_map(QuantizationSpec::standard(Family::BalazsVoros, 2, n)), true);
        const ClassSplit split = classify_eigenvectors(sp, fourier_square(n, 0.0, 0.0));
        INFO("N = " << n << ", mse = " << split.mse);
        CHECK(fraction_above(split.overlaps, 0.8) > 0.8);
    }
}

TEST_CASE("Balazs-Voros approximate classes") {
    for (std::size_t n : {1000u, 1002u}) {
        const SpectrumData sp = eigendecompose(build_map(QuantizationSpec::standard(Family::BalazsVoros, 2, n)), true);
        const CMatrix p = testing::permutation_minus(n);
        const ClassSplit split = classify_eigenvectors(sp, fourier_square(n, 0.0, 0.0));

        // overlaps from the plain permutation x -> -x
        const CMatrix& v = *sp.eigenvectors;
        double mse = 0.0;
        for (Eigen::Index k = 0; k < v.cols(); ++k) {
            const Complex o = v.col(k).adjoint() * (p * v.col(k));
            CHECK(std::abs(o - split.overlaps[static_cast<std::size_t>(k)]) < 1e-10);
            CHECK(std::abs(o.imag()) < 1e-8);
            mse += (std::abs(o) - 1.0) * (std::abs(o) - 1.0);
        }
        CHECK(split.mse == doctest::Approx(mse / static_cast<double>(n)));

        const auto stats = split_statistics(sp, {split.plus, split.minus});
        for (const auto& st : stats) {
            CHECK(std::abs(st.gap_ratio - kCoe) < 0.04);
        }
    }
}

TEST_CASE("Balazs-Voros A=16 loses the clustering") {
    for (std::size_t n : {992u, 1008u}) {
        const SpectrumData sp = eigendecompose(build_map(QuantizationSpec::standard(Family::BalazsVoros, 16, n)), true);
        const ClassSplit split = classify_eigenvectors(sp, fourier_square(n, 0.0, 0.0));
        CHECK(fraction_above(split.overlaps, 0.8) < 0.5);
    }
}

TEST_CASE("split statistics") {
    const SpectrumData sp = eigendecompose(bv(3, 60), false);
    std::vector<std::size_t> all(60);
    for (std::size_t k = 0; k < all.size(); ++k) {
        all[k] = k;
    }
    const auto one = split_statistics(sp, {all});
    REQUIRE(one.size() == 1);
    const SpacingData direct = spacings(sp, true);
    CHECK(one[0].levels == 60);
    CHECK(one[0].gap_ratio == doctest::Approx(mean_gap_ratio(direct)).epsilon(1e-14));
    REQUIRE(one[0].spacings.spacings.size() == direct.spacings.size());
    for (std::size_t k = 0; k < direct.spacings.size(); ++k) {
        CHECK(one[0].spacings.spacings[k] == doctest::Approx(direct.spacings[k]).epsilon(1e-12));
    }

    std::vector<std::size_t> a(all.begin(), all.begin() + 58);
    CHECK_THROWS_AS(split_statistics(sp, {a, {58, 59}}), PreconditionError);
    CHECK_THROWS_AS(split_statistics(sp, {a}), PreconditionError);
    CHECK_THROWS_AS(split_statistics(sp, {all, {0}}), PreconditionError);
}

TEST_CASE("Balazs-Voros commutator structure") {
    for (const auto& [base, n] : {std::pair{2, std::size_t{128}}, std::pair{3, std::size_t{129}}}) {
        const CommutatorStructure s = bv_commutator_structure(base, n);
        const double bound = 10.0 * std::sqrt(static_cast<double>(base)) / static_cast<double>(n);
        const std::size_t cell = n / static_cast<std::size_t>(base);
        CHECK(s.max_multiple_of_a_row < 1e-12);
        CHECK(s.max_small_entry <= bound);
        CHECK(s.special_columns.size() == static_cast<std::size_t>(base));
        CHECK(s.max_col % cell == 0);
        CHECK(s.max_row % static_cast<std::size_t>(base) != 0);
        CHECK(!s.large_entry_positions.empty());
        for (const auto& [x, y] : s.large_entry_positions) {
            CHECK(y % cell == 0);
            CHECK(std::min(x, n - x) < n / 4);
        }

        // largest entry from an independent commutator
        const CMatrix f = testing::naive_gdft(n, 0.0, 0.0);
        const CMatrix u = bv(base, n);
        const CMatrix c = u * (f * f) - (f * f) * u;
        CHECK(s.max_entry == doctest::Approx(c.cwiseAbs().maxCoeff()).epsilon(1e-9));
    }
}

TEST_CASE("palindromic Saraceno phases keep the reflection symmetry") {
    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int base : {2, 3, 4, 5}) {
        std::vector<double> alpha(static_cast<std::size_t>(base));
        for (int j = 0; j <= (base - 1) / 2; ++j) {
            alpha[static_cast<std::size_t>(j)] = alpha[static_cast<std::size_t>(base - 1 - j)] = unit(rng);
        }
        const std::size_t n = static_cast<std::size_t>(base) * 12;
        const CMatrix u = build_map(QuantizationSpec::with_phases(Family::Saraceno, base, n, alpha)).entries();
        const CMatrix r = testing::permutation_reverse(n);
        CHECK((u * r - r * u).norm() < 1e-10 * static_cast<double>(n));
    }
}

TEST_CASE("only Saraceno has both symmetries at its own theta") {
    for (int base : {2, 3}) {
        const std::size_t n = 60;
        const std::vector<QuantizationSpec> specs = {
            QuantizationSpec::standard(Family::BalazsVoros, base, n),
            QuantizationSpec::standard(Family::Saraceno, base, n),
            QuantizationSpec::standard(Family::Generic, base, n, 0.2, 0.7),
            QuantizationSpec::standard(Family::ShorBaker, base, n),
        };
        for (const auto& spec : specs) {
            const UnitaryMatrix u = build_map(spec);
            const bool both = tr_defect(spec, u) < 1e-10 &&
                              reflection_defect(u.entries(), spec.theta1, spec.theta2) < 1e-10;
            CAPTURE(spec.canonical());
            CHECK(both == (spec.family == Family::Saraceno));
        }
    }
}
