#include <doctest.h>

#include <cmath>
#include <random>

#include "posbasis/construct.hpp"
#include "posbasis/error.hpp"
#include "posbasis/spanning.hpp"
#include "test_support.hpp"

using namespace posbasis;

namespace {

bool farkas_holds(const Mat& a, const Vec& b, double lower, const Vec& y) {
    const Vec ya = a.transpose() * y;
    for (double v : ya)
        if (v > 1e-8) return false;
    Vec shifted = b;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) shifted[i] -= lower * a(i, j);
    return dot(y, shifted) > 1e-8;
}

bool feasible_point_holds(const Mat& a, const Vec& b, double lower, const Vec& x) {
    for (double v : x)
        if (v < lower - 1e-9) return false;
    const Vec ax = a * x;
    for (std::size_t i = 0; i < b.size(); ++i)
        if (std::abs(ax[i] - b[i]) > 1e-8) return false;
    return true;
}

const double kHalfRoot3 = std::sqrt(3.0) / 2.0;

Mat d35() { return Mat::from_rows({{1, -0.5, -0.5, 0, 0}, {0, kHalfRoot3, -kHalfRoot3, 0, 0}, {0, 0, 0, 1, -1}}); }

Mat d2_in_r3() { return Mat::from_rows({{1, -0.5, -0.5}, {0, kHalfRoot3, -kHalfRoot3}, {0, 0, 0}}); }

}  // namespace

TEST_CASE("LP feasibility on small systems") {
    const Mat a = Mat::from_rows({{1, 1}});
    SUBCASE("feasible") {
        const Vec b{2};
        const LpResult r = lp_nonneg_feasible(a, b, 0.0);
        REQUIRE(r.feasible);
        CHECK(feasible_point_holds(a, b, 0.0, r.x));
    }
    SUBCASE("negative right-hand side") {
        const Vec b{-1};
        const LpResult r = lp_nonneg_feasible(a, b, 0.0);
        REQUIRE_FALSE(r.feasible);
        CHECK(farkas_holds(a, b, 0.0, r.dual));
    }
    SUBCASE("lower bound pushes the system out of reach") {
        const Vec b{1};
        const LpResult r = lp_nonneg_feasible(a, b, 1.0);
        REQUIRE_FALSE(r.feasible);
        CHECK(farkas_holds(a, b, 1.0, r.dual));
    }
    SUBCASE("cancelling pair with lower bound") {
        const Mat c = Mat::from_rows({{1, -1}});
        const Vec b{0};
        const LpResult r = lp_nonneg_feasible(c, b, 1.0);
        REQUIRE(r.feasible);
        CHECK(feasible_point_holds(c, b, 1.0, r.x));
    }
}

TEST_CASE("LP results self-check on random systems") {
    std::mt19937_64 rng(41);
    int feasible = 0;
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t m = 1 + trial % 4;
        const std::size_t k = 1 + (trial / 4) % 6;
        const Mat a = testing::random_gaussian(m, k, rng);
        const Vec b = testing::random_gaussian(m, 1, rng).col(0);
        const double lower = (trial % 3 == 0) ? 1.0 : 0.0;
        const LpResult r = lp_nonneg_feasible(a, b, lower);
        if (r.feasible) {
            ++feasible;
            CHECK(feasible_point_holds(a, b, lower, r.x));
        } else {
            CHECK(farkas_holds(a, b, lower, r.dual));
        }
    }
    CHECK(feasible > 10);
}

TEST_CASE("unit column enforcement") {
    CHECK(has_unit_columns(Mat::identity(3)));
    CHECK_FALSE(has_unit_columns(Mat::from_rows({{2, 0}, {0, 1}})));
    CHECK_THROWS_AS(require_unit_columns(Mat::from_rows({{2, 0}, {0, 1}})), Error);
    const Mat n = normalize_columns(Mat::from_rows({{3, 0}, {4, 2}}));
    CHECK(n(0, 0) == doctest::Approx(0.6));
    CHECK(n(1, 0) == doctest::Approx(0.8));
    CHECK(n(1, 1) == doctest::Approx(1.0));
    CHECK_THROWS_AS(normalize_columns(Mat(2, 1)), Error);
}

TEST_CASE("positive spanning of standard bases") {
    for (std::size_t n = 1; n <= 6; ++n) {
        const Mat mx = maximal(n).columns;
        const SpanResult r = is_positive_spanning(mx);
        CHECK(r.positive_spanning);
        CHECK(r.certificate.kind == CertificateKind::PositiveCoefficients);
        CHECK(r.certificate.verify(mx));
        CHECK(is_positively_independent(mx));
        CHECK(is_positive_basis(mx));

        const Mat mn = optimal_minimal(n, n);
        CHECK(is_positive_basis(mn));
        CHECK(is_positive_spanning(mn).certificate.verify(mn));
    }
}

TEST_CASE("a coordinate basis does not positively span") {
    const Mat id = Mat::identity(3);
    const SpanResult r = is_positive_spanning(id);
    CHECK_FALSE(r.positive_spanning);
    REQUIRE(r.certificate.kind == CertificateKind::SeparatingVector);
    CHECK(r.certificate.verify(id));
    CHECK(norm(r.certificate.witness) == doctest::Approx(1.0));
}

TEST_CASE("rank-deficient sets get a complement witness") {
    const Mat flat = Mat::from_rows({{1, -1, 0}, {0, 0, 0}, {0, 0, 1}});
    const Mat planar = normalize_columns(Mat::from_rows({{1, -1, 0, 0}, {0, 0, 1, -1}, {0, 0, 0, 0}}));
    for (const Mat& s : {normalize_columns(flat.select_columns(std::vector<std::size_t>{0, 1})), planar}) {
        const SpanResult r = is_positive_spanning(s);
        CHECK_FALSE(r.positive_spanning);
        REQUIRE(r.certificate.kind == CertificateKind::SeparatingVector);
        CHECK(r.certificate.verify(s));
    }
}

TEST_CASE("deleting a column of a minimal basis breaks spanning but keeps rank") {
    for (std::size_t n = 2; n <= 6; ++n) {
        const Mat mn = optimal_minimal(n, n);
        for (std::size_t i = 0; i <= n; ++i) {
            const std::vector<std::size_t> drop{i};
            const Mat cut = mn.without_columns(drop);
            CHECK(rank(cut) == n);
            const SpanResult r = is_positive_spanning(cut);
            CHECK_FALSE(r.positive_spanning);
            CHECK(r.certificate.kind == CertificateKind::SeparatingVector);
            CHECK(r.certificate.verify(cut));
        }
    }
}

TEST_CASE("certificates reject tampering") {
    const Mat mx = maximal(2).columns;
    SpanCertificate cert = is_positive_spanning(mx).certificate;
    REQUIRE(cert.verify(mx));
    cert.alpha[0] = 0.5;
    CHECK_FALSE(cert.verify(mx));

    const Mat id = Mat::identity(2);
    SpanCertificate sep = is_positive_spanning(id).certificate;
    REQUIRE(sep.verify(id));
    for (double& x : sep.witness) x = -x;
    CHECK_FALSE(sep.verify(id));
}

TEST_CASE("positive independence") {
    const double r = 1.0 / std::sqrt(2.0);
    const Mat redundant = Mat::from_rows({{1, -1, 0, 0, r}, {0, 0, 1, -1, r}});
    CHECK(is_positive_spanning(redundant).positive_spanning);
    CHECK_FALSE(is_positively_independent(redundant));
    CHECK_FALSE(is_positive_basis(redundant));

    const Mat duplicated = hstack(optimal_minimal(2, 2), optimal_minimal(2, 2).select_columns(std::vector<std::size_t>{0}));
    CHECK_FALSE(is_positively_independent(duplicated));
    CHECK(is_positively_independent(Mat::identity(3)));
}

TEST_CASE("the two example sets in R^3 are positive bases") {
    CHECK(is_positive_basis(d35()));
    Mat shifted = d35();
    shifted(0, 3) = -1.0;
    shifted(0, 4) = -1.0;
    CHECK(is_positive_basis(normalize_columns(shifted)));
    CHECK_THROWS_AS(is_positive_basis(shifted), Error);
}

TEST_CASE("minimal positive basis of its span") {
    CHECK(is_minimal_positive_basis_of_span(d2_in_r3()));
    CHECK(is_minimal_positive_basis_of_span(Mat::from_rows({{0, 0}, {0, 0}, {1, -1}})));
    CHECK_FALSE(is_minimal_positive_basis_of_span(Mat::from_rows({{1, 0}, {0, 1}, {0, 0}})));
    CHECK_FALSE(is_minimal_positive_basis_of_span(maximal(2).columns));
    // Columns on a line, all same sign.
    CHECK_FALSE(is_minimal_positive_basis_of_span(Mat::from_rows({{1, 1}, {0, 0}})));
}

TEST_CASE("critical vectors of the planar regular simplex") {
    const Mat d = d2_in_r3();
    CHECK(is_critical_vector_minimal(d, Vec{-1, 0, 0}));
    CHECK_FALSE(is_critical_vector_minimal(d, Vec{0, 1, 0}));
    CHECK(is_critical_vector_minimal(d, Vec{0, 0, 0}));
    // -pspan(d_2) and -pspan(d_3).
    CHECK(is_critical_vector_minimal(d, Vec{0.5, -kHalfRoot3, 0}));
    CHECK(is_critical_vector_minimal(d, Vec{1.5, 3 * kHalfRoot3, 0}));
    // Outside the span of the block.
    CHECK_FALSE(is_critical_vector_minimal(d, Vec{-1, 0, 1}));
    CHECK_THROWS_AS(is_critical_vector_minimal(Mat::identity(3), Vec{0, 0, 0}), Error);
}

TEST_CASE("a one-dimensional block has only the zero critical vector") {
    const Mat d = Mat::from_rows({{1, -1}, {0, 0}});
    CHECK(is_critical_vector_minimal(d, Vec{0, 0}));
    CHECK_FALSE(is_critical_vector_minimal(d, Vec{-1, 0}));
}

TEST_CASE("random composed bases verify with self-checking certificates") {
    std::mt19937_64 rng(43);
    for (int trial = 0; trial < 60; ++trial) {
        const std::size_t n = 2 + trial % 4;
        const std::size_t s = n + 1 + trial % n;
        testing::RandomBasisOptions opt;
        opt.critical_shift = trial % 2 == 0;
        const Mat d = testing::random_positive_basis(n, s, rng, opt).columns;
        const SpanResult r = is_positive_spanning(d);
        CHECK(r.positive_spanning);
        CHECK(r.certificate.verify(d));
        CHECK(is_positively_independent(d));
    }
}

TEST_CASE("reference LP and spanning cases") {
    const Vec zero1{0};
    CHECK_FALSE(lp_nonneg_feasible(Mat::from_rows({{1, 1}}), zero1, 1.0).feasible);
    const Mat d2 = optimal_minimal(2, 2);
    const LpResult r = lp_nonneg_feasible(d2, Vec{0, 0}, 1.0);
    REQUIRE(r.feasible);
    CHECK(feasible_point_holds(d2, Vec{0, 0}, 1.0, r.x));

    const Mat mx3 = maximal(3).columns;
    const SpanResult s = is_positive_spanning(mx3);
    REQUIRE(s.positive_spanning);
    for (double a : s.certificate.alpha) CHECK(a >= 1.0 - 1e-9);

    const double q = 1.0 / std::sqrt(2.0);
    CHECK_FALSE(is_positively_independent(Mat::from_rows({{1, 0, q}, {0, 1, q}})));
    CHECK(is_positively_independent(d35()));
    CHECK(is_positively_independent(maximal(2).columns));

    const double t = 1.0 / std::sqrt(3.0);
    Mat seven(3, 7);
    for (std::size_t j = 0; j < 6; ++j) seven.set_col(j, mx3.col(j));
    seven.set_col(6, Vec{t, t, t});
    CHECK_FALSE(is_positive_basis(seven));
}

TEST_CASE("critical vectors of the planar simplex in R^2") {
    const Mat d = Mat::from_rows({{1, -0.5, -0.5}, {0, kHalfRoot3, -kHalfRoot3}});
    CHECK(is_critical_vector_minimal(d, Vec{0, 0}));
    CHECK_FALSE(is_critical_vector_minimal(d, Vec{0, 1}));
    CHECK(is_critical_vector_minimal(d, Vec{-2, 0}));
}

TEST_CASE("separating witnesses of rank-n failures have a nonnegative maximum") {
    std::mt19937_64 rng(47);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t n = 2 + trial % 4;
        const Mat s = normalize_columns(testing::random_gaussian(n, n + 1 + trial % 3, rng));
        const SpanResult r = is_positive_spanning(s);
        CHECK(r.certificate.verify(s));
        if (!r.positive_spanning) {
            double best = -1.0;
            for (std::size_t j = 0; j < s.cols(); ++j) best = std::max(best, dot(r.certificate.witness, s.col(j)));
            CHECK(best >= 0.0);
        }
    }
}
