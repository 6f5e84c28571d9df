#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "lowrank/matrix_core.hpp"
#include "test_support.hpp"

#include <cmath>
#include <cstring>
#include <limits>

using namespace lowrank;
using testsupport::random_matrix;
using testsupport::random_low_rank;

namespace {

Matrix from_rows(std::initializer_list<std::initializer_list<double>> rows) {
    Matrix a(static_cast<Index>(rows.size()), static_cast<Index>(rows.begin()->size()));
    Index i = 0;
    for (const auto& row : rows) {
        Index j = 0;
        for (double v : row)
            a(i, j++) = v;
        ++i;
    }
    return a;
}

bool bit_equal(const Matrix& a, const Matrix& b) {
    return a.rows() == b.rows() && a.cols() == b.cols() &&
           std::memcmp(a.data(), b.data(), sizeof(double) * static_cast<std::size_t>(a.size())) == 0;
}

// Brute-force oracle for r = 1: the only orthogonal 1x1 matrices are +-1.
double procrustes_oracle_r1(const FactorStack& f, const FactorStack& g) {
    double best = std::numeric_limits<double>::infinity();
    for (double s : {1.0, -1.0}) {
        double d2 = (f.top - s * g.top).squaredNorm() + (f.bottom - s * g.bottom).squaredNorm();
        best = std::min(best, std::sqrt(d2));
    }
    return best;
}

// Grid oracle for r = 2: scan rotations and reflections.
double procrustes_oracle_r2(const FactorStack& f, const FactorStack& g) {
    double best = std::numeric_limits<double>::infinity();
    const int steps = 20000;
    for (int k = 0; k < steps; ++k) {
        double t = 2.0 * M_PI * k / steps;
        double c = std::cos(t), s = std::sin(t);
        Matrix rot(2, 2), refl(2, 2);
        rot << c, -s, s, c;
        refl << c, s, s, -c;
        for (const Matrix& r : {rot, refl}) {
            double d2 = (f.top - g.top * r).squaredNorm() + (f.bottom - g.bottom * r).squaredNorm();
            best = std::min(best, std::sqrt(d2));
        }
    }
    return best;
}

} // namespace

TEST_CASE("svd of a diagonal matrix") {
    Matrix a = from_rows({{3, 0}, {0, 2}});
    SvdResult r = svd_deterministic(a);
    CHECK(r.sigma(0) == doctest::Approx(3.0).epsilon(1e-14));
    CHECK(r.sigma(1) == doctest::Approx(2.0).epsilon(1e-14));
    CHECK((r.u - Matrix::Identity(2, 2)).norm() < 1e-12);
    CHECK((r.v - Matrix::Identity(2, 2)).norm() < 1e-12);
}

TEST_CASE("svd of the zero matrix") {
    Matrix a = Matrix::Zero(2, 2);
    SvdResult r = svd_deterministic(a);
    CHECK(r.sigma(0) == 0.0);
    CHECK(r.sigma(1) == 0.0);
}

TEST_CASE("svd invariants on random rectangular matrices") {
    for (std::uint64_t seed : {11u, 12u, 13u}) {
        Matrix a = random_matrix(seed, 7, 4);
        SvdResult r = svd_deterministic(a);
        Index k = std::min<Index>(7, 4);
        REQUIRE(r.u.cols() == k);
        REQUIRE(r.v.cols() == k);
        CHECK((r.u.transpose() * r.u - Matrix::Identity(k, k)).norm() < 1e-10);
        CHECK((r.v.transpose() * r.v - Matrix::Identity(k, k)).norm() < 1e-10);
        for (Index i = 0; i + 1 < k; ++i)
            CHECK(r.sigma(i) >= r.sigma(i + 1));
        Matrix rebuilt = r.u * r.sigma.asDiagonal() * r.v.transpose();
        CHECK((rebuilt - a).norm() <= 1e-10 * std::max(1.0, a.norm()));
    }
}

TEST_CASE("svd sign convention and determinism") {
    // Columns engineered so the dominant entries start out negative.
    Matrix a = from_rows({{-5, 1, 0}, {1, -4, 0}, {0, 0, -3}});
    SvdResult r = svd_deterministic(a);
    for (Index k = 0; k < r.u.cols(); ++k) {
        Index best = 0;
        for (Index i = 1; i < r.u.rows(); ++i)
            if (std::abs(r.u(i, k)) > std::abs(r.u(best, k)))
                best = i;
        CHECK(r.u(best, k) >= 0.0);
    }
    SvdResult r2 = svd_deterministic(a);
    CHECK(bit_equal(r.u, r2.u));
    CHECK(bit_equal(r.v, r2.v));
    CHECK(r.sigma == r2.sigma);
}

TEST_CASE("truncation of a diagonal matrix") {
    Matrix a = from_rows({{3, 0, 0}, {0, 2, 0}, {0, 0, 1}});
    TruncationResult t = truncate_rank(a, 2);
    Matrix expected = from_rows({{3, 0, 0}, {0, 2, 0}, {0, 0, 0}});
    CHECK((t.matrix - expected).norm() < 1e-12);
    CHECK_FALSE(t.degenerate);
}

TEST_CASE("truncation keeps a rank-1 matrix fixed") {
    Matrix a = random_low_rank(21, 6, 5, 1);
    TruncationResult t = truncate_rank(a, 1);
    CHECK((t.matrix - a).norm() <= 1e-12 * a.norm());
}

TEST_CASE("truncation flags a degenerate spectral gap") {
    Matrix a = from_rows({{2, 0, 0}, {0, 2, 0}, {0, 0, 1}});
    CHECK(truncate_rank(a, 1).degenerate);
    CHECK_FALSE(truncate_rank(a, 2).degenerate);
    // Full rank: sigma_{r+1} treated as zero.
    CHECK_FALSE(truncate_rank(a, 3).degenerate);
}

TEST_CASE("truncation rank range is validated") {
    Matrix a = random_matrix(31, 4, 4);
    CHECK_THROWS_AS(truncate_rank(a, 0), InputError);
    CHECK_THROWS_AS(truncate_rank(a, 5), InputError);
}

TEST_CASE("truncation satisfies the tail-energy identity") {
    // ||A - A_r||_F^2 equals the sum of the squared trailing singular values.
    for (std::uint64_t seed : {41u, 42u, 43u}) {
        Index rows = 5 + static_cast<Index>(seed % 3);
        Matrix a = random_matrix(seed, rows, 6);
        SvdResult svd = svd_deterministic(a);
        Index k = std::min(rows, Index(6));
        for (int r = 1; r <= k; ++r) {
            double tail = 0.0;
            for (Index i = r; i < k; ++i)
                tail += svd.sigma(i) * svd.sigma(i);
            double resid = (a - truncate_rank(a, r).matrix).squaredNorm();
            CHECK(std::abs(resid - tail) <= 1e-8 * std::max(1.0, a.squaredNorm()));
        }
    }
}

TEST_CASE("norm suite on a hand matrix") {
    Matrix a = from_rows({{3, 4}, {0, 0}});
    NormSuite n = norm_suite(a);
    CHECK(n.frobenius == doctest::Approx(5.0).epsilon(1e-14));
    CHECK(n.spectral == doctest::Approx(5.0).epsilon(1e-12));
    CHECK(n.entry_l1 == doctest::Approx(7.0).epsilon(1e-14));
    CHECK(n.max_entry == doctest::Approx(4.0).epsilon(1e-14));
}

TEST_CASE("norm ordering holds on random matrices") {
    for (std::uint64_t seed : {51u, 52u, 53u, 54u}) {
        Matrix a = random_matrix(seed, 8, 6);
        NormSuite n = norm_suite(a);
        double root_size = std::sqrt(static_cast<double>(a.size()));
        CHECK(n.spectral <= n.frobenius * (1 + 1e-12));
        CHECK(n.frobenius <= root_size * n.max_entry * (1 + 1e-12));
        CHECK(n.entry_l1 <= root_size * n.frobenius * (1 + 1e-12));
        CHECK(n.frobenius <= n.entry_l1 * (1 + 1e-12));
        CHECK(n.max_entry <= n.spectral * (1 + 1e-12));
    }
}

TEST_CASE("row and column norms") {
    Matrix a = from_rows({{3, 4}, {0, 1}});
    auto [rows, cols] = row_col_norms(a);
    CHECK(rows(0) == doctest::Approx(5.0));
    CHECK(rows(1) == doctest::Approx(1.0));
    CHECK(cols(0) == doctest::Approx(3.0));
    CHECK(cols(1) == doctest::Approx(std::sqrt(17.0)));
}

TEST_CASE("procrustes distance is zero for identical and rotated stacks") {
    // The squared distance is a difference of nearly equal sums, so after
    // the square root only ~sqrt(eps) of the stack scale survives.
    FactorStack f{random_matrix(61, 6, 2), random_matrix(62, 5, 2)};
    double scale = std::sqrt(f.top.squaredNorm() + f.bottom.squaredNorm());
    CHECK(procrustes_distance(f, f) <= 1e-6 * scale);

    double t = 0.7;
    Matrix rot(2, 2);
    rot << std::cos(t), -std::sin(t), std::sin(t), std::cos(t);
    FactorStack g{f.top * rot, f.bottom * rot};
    CHECK(procrustes_distance(f, g) <= 1e-6 * scale);
}

TEST_CASE("procrustes distance matches the sign-flip oracle at r = 1") {
    // Stacked vectors (0, 1) vs (1, 0): both sign choices give sqrt(2).
    FactorStack f{from_rows({{0}}), from_rows({{1}})};
    FactorStack g{from_rows({{1}}), from_rows({{0}})};
    double d = procrustes_distance(f, g);
    CHECK(d == doctest::Approx(procrustes_oracle_r1(f, g)).epsilon(1e-12));
    CHECK(d == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));

    for (std::uint64_t seed : {71u, 72u, 73u}) {
        FactorStack a{random_matrix(seed, 5, 1), random_matrix(seed + 100, 4, 1)};
        FactorStack b{random_matrix(seed + 200, 5, 1), random_matrix(seed + 300, 4, 1)};
        CHECK(procrustes_distance(a, b) ==
              doctest::Approx(procrustes_oracle_r1(a, b)).epsilon(1e-10));
    }
}

TEST_CASE("procrustes distance matches the rotation-grid oracle at r = 2") {
    for (std::uint64_t seed : {81u, 82u}) {
        FactorStack a{random_matrix(seed, 4, 2), random_matrix(seed + 10, 3, 2)};
        FactorStack b{random_matrix(seed + 20, 4, 2), random_matrix(seed + 30, 3, 2)};
        double exact = procrustes_distance(a, b);
        double grid = procrustes_oracle_r2(a, b);
        // The grid oracle only overestimates, and by O(step^2).
        CHECK(exact <= grid + 1e-12);
        CHECK(grid - exact <= 1e-4);
    }
}

TEST_CASE("procrustes distance is invariant under a shared rotation") {
    FactorStack a{random_matrix(91, 5, 3), random_matrix(92, 4, 3)};
    FactorStack b{random_matrix(93, 5, 3), random_matrix(94, 4, 3)};
    double before = procrustes_distance(a, b);
    Matrix q = svd_deterministic(random_matrix(95, 3, 3)).u; // a random orthogonal matrix
    FactorStack a2{a.top * q, a.bottom * q};
    FactorStack b2{b.top * q, b.bottom * q};
    CHECK(procrustes_distance(a2, b2) == doctest::Approx(before).epsilon(1e-9));
}

TEST_CASE("procrustes distance validates shapes") {
    FactorStack a{random_matrix(96, 5, 2), random_matrix(97, 4, 2)};
    FactorStack b{random_matrix(98, 5, 3), random_matrix(99, 4, 3)};
    CHECK_THROWS_AS(procrustes_distance(a, b), InputError);
    FactorStack c{random_matrix(98, 6, 2), random_matrix(99, 4, 2)};
    CHECK_THROWS_AS(procrustes_distance(a, c), InputError);
}

TEST_CASE("non-finite input is rejected") {
    Matrix a = from_rows({{1, 2}, {3, std::numeric_limits<double>::quiet_NaN()}});
    CHECK_THROWS_AS(svd_deterministic(a), InputError);
    CHECK_THROWS_AS(norm_suite(a), InputError);
}
