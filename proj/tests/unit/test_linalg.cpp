#include <doctest.h>

#include <random>

#include "baker/errors.hpp"
#include "baker/linalg.hpp"
#include "baker/rmt.hpp"
#include "helpers.hpp"

using namespace baker;

TEST_CASE("gdft matches the entry formula") {
    const CMatrix f2 = build_gdft(2, 0.0, 0.0).entries();
    const double r = 1.0 / std::sqrt(2.0);
    CHECK(std::abs(f2(0, 0) - Complex(r, 0)) < 1e-15);
    CHECK(std::abs(f2(0, 1) - Complex(r, 0)) < 1e-15);
    CHECK(std::abs(f2(1, 0) - Complex(r, 0)) < 1e-15);
    CHECK(std::abs(f2(1, 1) - Complex(-r, 0)) < 1e-15);

    for (auto [n, t1, t2] : {std::tuple{7, 0.2, 0.7}, std::tuple{12, 0.5, 0.5}, std::tuple{5, 0.0, 0.9}}) {
        const CMatrix diff = build_gdft(n, t1, t2).entries() - testing::naive_gdft(n, t1, t2);
        CHECK(diff.norm() < 1e-13);
    }
}

TEST_CASE("gdft is unitary for any boundary phases") {
    CHECK(build_gdft(7, 0.2, 0.7).unitarity_defect() < 1e-12);
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int k = 0; k < 20; ++k) {
        const std::size_t n = 1 + rng() % 60;
        const UnitaryMatrix f = build_gdft(n, u(rng), u(rng));
        CHECK(f.unitarity_defect() < 1e-10 * static_cast<double>(n));
        CHECK(testing::unitarity(f.entries()) < 1e-10 * static_cast<double>(n));
    }
}

TEST_CASE("gdft rejects N = 0") {
    CHECK_THROWS_AS(build_gdft(0, 0.0, 0.0), InvalidDimension);
}

TEST_CASE("square of the half-shifted DFT is the reversal up to sign") {
    // (F^{1/2,1/2})^2 sends |x> to -|N-1-x>.
    for (std::size_t n : {4u, 5u, 6u, 9u}) {
        const CMatrix f = build_gdft(n, 0.5, 0.5).entries();
        CHECK((f * f + testing::permutation_reverse(n)).norm() < 1e-12);
    }
}

TEST_CASE("square of the plain DFT is x -> -x mod N entrywise") {
    for (std::size_t n = 2; n <= 12; ++n) {
        const CMatrix f = build_gdft(n, 0.0, 0.0).entries();
        const CMatrix sq = f * f;
        const CMatrix p = testing::permutation_minus(n);
        for (Eigen::Index i = 0; i < sq.rows(); ++i) {
            for (Eigen::Index j = 0; j < sq.cols(); ++j) {
                CHECK(std::abs(sq(i, j) - p(i, j)) < 1e-12);
            }
        }
    }
}

TEST_CASE("eigendecompose on simple inputs") {
    SUBCASE("identity") {
        const SpectrumData s = eigendecompose(CMatrix::Identity(5, 5), true);
        REQUIRE(s.size() == 5);
        for (double a : s.angles) {
            CHECK(std::abs(a) < 1e-12);
        }
    }
    SUBCASE("diagonal") {
        CVector d(4);
        d << Complex(1, 0), Complex(0, 1), Complex(-1, 0), Complex(0, -1);
        const SpectrumData s = eigendecompose(CMatrix(d.asDiagonal()), false);
        REQUIRE(s.size() == 4);
        CHECK(std::abs(s.angles[0]) < 1e-12);
        CHECK(std::abs(s.angles[1] - kPi / 2) < 1e-12);
        CHECK(std::abs(s.angles[2] - kPi) < 1e-12);
        CHECK(std::abs(s.angles[3] - 3 * kPi / 2) < 1e-12);
        CHECK_FALSE(s.eigenvectors.has_value());
    }
}

TEST_CASE("eigendecompose satisfies the spectrum contract") {
    EnsembleSpec spec;
    spec.kind = EnsembleKind::COE;
    spec.n = 50;
    spec.seed = 3;
    const UnitaryMatrix u = sample(spec);
    const SpectrumData s = eigendecompose(u, true);
    REQUIRE(s.eigenvectors);
    for (std::size_t k = 0; k < s.size(); ++k) {
        CHECK(s.angles[k] >= 0.0);
        CHECK(s.angles[k] < kTwoPi);
        if (k > 0) {
            CHECK(s.angles[k - 1] <= s.angles[k]);
        }
        const CVector v = s.eigenvectors->col(static_cast<Eigen::Index>(k));
        CHECK(std::abs(v.norm() - 1.0) < 1e-8);
        CHECK((u.entries() * v - std::polar(1.0, s.angles[k]) * v).norm() < 1e-6 * 50);
    }
    CHECK((reassemble(s) - u.entries()).norm() < 1e-8);
}

TEST_CASE("reassemble inverts eigendecompose on random unitaries") {
    for (std::uint64_t seed : {1u, 2u, 3u}) {
        const std::size_t n = 20 + 13 * seed;
        const UnitaryMatrix u = haar_unitary(n, seed);
        CHECK((reassemble(eigendecompose(u, true)) - u.entries()).norm() < 1e-8 * static_cast<double>(n));
    }
}

TEST_CASE("reassemble needs eigenvectors") {
    CHECK_THROWS_AS(reassemble(spectrum_from_angles({0.0, 1.0})), PreconditionError);
}

TEST_CASE("frobenius norm") {
    CHECK(frobenius_norm(CMatrix::Zero(3, 3)) == 0.0);
    CHECK(frobenius_norm(CMatrix::Identity(9, 9)) == doctest::Approx(3.0));
    CMatrix m(2, 2);
    m << 3.0, 4.0, 0.0, 0.0;
    CHECK(frobenius_norm(m) == doctest::Approx(5.0));
}

TEST_CASE("direct sum and commutator") {
    const CMatrix a = CMatrix::Constant(2, 2, Complex(1, 1));
    const CMatrix b = CMatrix::Identity(3, 3);
    const CMatrix s = direct_sum(a, b);
    CHECK(s.rows() == 5);
    CHECK(s.block(0, 0, 2, 2) == a);
    CHECK(s.block(2, 2, 3, 3) == b);
    CHECK(s.block(0, 2, 2, 3).norm() == 0.0);
    CHECK(commutator(a, CMatrix::Identity(2, 2)).norm() == 0.0);
}

TEST_CASE("wrap_angle and spectrum_from_angles") {
    CHECK(wrap_angle(-0.5) == doctest::Approx(kTwoPi - 0.5));
    CHECK(wrap_angle(kTwoPi) == doctest::Approx(0.0));
    CHECK(wrap_angle(3 * kTwoPi + 1.0) == doctest::Approx(1.0));
    const SpectrumData s = spectrum_from_angles({3.0, -1.0, 1.0});
    REQUIRE(s.size() == 3);
    CHECK(s.angles[0] == doctest::Approx(1.0));
    CHECK(s.angles[1] == doctest::Approx(3.0));
    CHECK(s.angles[2] == doctest::Approx(kTwoPi - 1.0));
}

TEST_CASE("non-square input is rejected") {
    CHECK_THROWS_AS(UnitaryMatrix(CMatrix::Zero(2, 3)), InvalidDimension);
}
