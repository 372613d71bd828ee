#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "sjg/inverse.hpp"
#include "sjg/verify.hpp"

using namespace sjg;

namespace {

Mat make(int r, int c, std::initializer_list<double> vals) {
    Mat m(r, c);
    int k = 0;
    for (double v : vals) m(k / c, k % c) = v, ++k;
    return m;
}

RowVec rv(std::initializer_list<double> vals) {
    RowVec v(vals.size());
    int k = 0;
    for (double x : vals) v[k++] = x;
    return v;
}

ExtendedJacobiPoint point1(double x, double y, double p, double q) {
    ExtendedJacobiPoint pt;
    pt.base.x = SymMat(1);
    pt.base.x.set(0, 0, x);
    pt.base.y = SymMat(1);
    pt.base.y.set(0, 0, y);
    pt.p = rv({p});
    pt.q = rv({q});
    pt.kappa = 0.0;
    return pt;
}

}  // namespace

TEST_CASE("schur inverse of a block-diagonal matrix") {
    Partition2x2 h;
    h.h1 = make(2, 2, {2, 1, 1, 1});
    h.h4 = make(1, 1, {4});
    h.h2 = Mat::Zero(2, 1);
    h.h3 = Mat::Zero(1, 2);
    const Mat inv = schur_inverse(h);
    CHECK(max_abs(inv.topLeftCorner(2, 2) - make(2, 2, {1, -1, -1, 2})) < 1e-14);
    CHECK(inv(2, 2) == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(max_abs(inv.topRightCorner(2, 1)) == 0.0);
}

TEST_CASE("schur inverse with a 1 + 1 split") {
    // blockwise: top = 1/(2 - 1*1*1) = 1, bottom = 1/(1 - 1*(1/2)*1) = 2, off = -1
    Partition2x2 h{make(1, 1, {2}), make(1, 1, {1}), make(1, 1, {1}), make(1, 1, {1})};
    CHECK(max_abs(schur_inverse(h) - make(2, 2, {1, -1, -1, 2})) < 1e-14);
}

TEST_CASE("schur inverse equals the oracle on random SPD input") {
    Rng rng(301);
    for (int trial = 0; trial < 50; ++trial) {
        Mat a(6, 6);
        for (int i = 0; i < 6; ++i)
            for (int j = 0; j < 6; ++j) a(i, j) = rng.uniform(-1.0, 1.0);
        const Mat spd = a * a.transpose() + 0.5 * Mat::Identity(6, 6);
        Partition2x2 h{spd.topLeftCorner(4, 4), spd.topRightCorner(4, 2),
                       spd.bottomLeftCorner(2, 4), spd.bottomRightCorner(2, 2)};
        CHECK(max_abs(schur_inverse(h) - lu_inverse(spd)) < 1e-10);
    }
}

TEST_CASE("schur inverse names the failing block") {
    Partition2x2 h{Mat::Zero(2, 2), Mat::Zero(2, 2), Mat::Zero(2, 2), Mat::Identity(2, 2)};
    CHECK_THROWS_WITH_AS(schur_inverse(h), "singular block: h1", SingularBlock);
    Partition2x2 h2{Mat::Identity(2, 2), Mat::Zero(2, 2), Mat::Zero(2, 2), Mat::Zero(2, 2)};
    CHECK_THROWS_WITH_AS(schur_inverse(h2), "singular block: h4", SingularBlock);
    CHECK_THROWS_AS(
        schur_inverse(Partition2x2{Mat::Zero(2, 2), Mat::Zero(1, 1), Mat::Zero(1, 1),
                                   Mat::Zero(1, 1)}),
        DimensionMismatch);
}

TEST_CASE("closed non-extended inverse at simple points") {
    SUBCASE("x = 0 decouples q from p") {
        const MetricParams params{1.0, 1.6, 1.0};
        const BaseMetricInverse inv = base_metric_inverse(params, point1(0, 1, 0, 0));
        CHECK(max_abs(inv.qp_inv - Mat((1.0 / params.gamma) * Mat::Identity(2, 2))) < 1e-15);
    }
    SUBCASE("x = 1, y = 2 gives (1/(2 gamma)) [[5, -1], [-1, 1]]") {
        const MetricParams params{1.0, 0.7, 1.0};
        const BaseMetricInverse inv = base_metric_inverse(params, point1(1, 2, 0, 0));
        const Mat expected = make(2, 2, {5, -1, -1, 1}) / (2.0 * params.gamma);
        CHECK(max_abs(inv.qp_inv - expected) < 1e-14);
    }
}

TEST_CASE("closed non-extended inverse blocks multiply to the identity") {
    CHECK(checks::base_inverse_blocks(311, 1, 100, 1e-10).passed);
    CHECK(checks::base_inverse_blocks(312, 2, 100, 1e-10).passed);
    CHECK(checks::base_inverse_blocks(313, 3, 100, 1e-10).passed);
}

TEST_CASE("closed extended corner at n = 1") {
    SUBCASE("x = 0, y = 1, p = 1, q = 0") {
        const MetricParams params{1.0, 1.2, 0.7};
        const Mat inv = qp_inverse_extended_n1(params, 0, 1, 1, 0);
        CHECK(inv(0, 0) == doctest::Approx(1.0 / (params.gamma + params.delta)).epsilon(1e-14));
        CHECK(inv(1, 1) == doctest::Approx(1.0 / params.gamma).epsilon(1e-14));
        CHECK(std::abs(inv(0, 1)) < 1e-16);
    }
    SUBCASE("delta -> 0 recovers the non-extended inverse") {
        const MetricParams tiny{1.0, 1.0, 1e-12};
        const Mat inv = qp_inverse_extended_n1(tiny, 1, 2, 0.4, -0.3);
        const Mat base = make(2, 2, {5, -1, -1, 1}) / 2.0;
        CHECK(max_abs(inv - base) < 1e-9);
    }
    SUBCASE("product with the forward corner is the identity") {
        CHECK(checks::extended_corner_n1(331, 200, 1e-10).passed);
    }
}

TEST_CASE("blockwise extended inverse at simple points") {
    const MetricParams params{1.0, 1.5, 2.5};
    SUBCASE("p = q = 0 gives b22 = 1/delta") {
        const auto blocks = invert_qpk_by_blocks(params, make(1, 1, {0.3}), make(1, 1, {1.1}),
                                                 rv({0}), rv({0}), Coupling::metric);
        CHECK(blocks.b22 == doctest::Approx(1.0 / params.delta).epsilon(1e-14));
    }
    SUBCASE("x = 0, y = 1, p = 1, q = 0 gives a22 = 1/gamma") {
        const auto blocks = invert_qpk_by_blocks(params, make(1, 1, {0}), make(1, 1, {1}),
                                                 rv({1}), rv({0}), Coupling::metric);
        CHECK(blocks.a22(0, 0) == doctest::Approx(1.0 / params.gamma).epsilon(1e-13));
        CHECK(blocks.a22_simplified(0, 0) == doctest::Approx(1.0 / params.gamma).epsilon(1e-13));
    }
}

TEST_CASE("blockwise extended inverse equals the oracle in both conventions") {
    for (Coupling c : {Coupling::metric, Coupling::closed_form}) {
        CHECK(checks::qpk_blockwise_vs_lu(341, 1, 100, 1e-9, c).passed);
        CHECK(checks::qpk_blockwise_vs_lu(342, 2, 100, 1e-9, c).passed);
        CHECK(checks::qpk_blockwise_vs_lu(343, 3, 50, 1e-9, c).passed);
    }
}

TEST_CASE("the two a22 routes agree in both conventions") {
    for (Coupling c : {Coupling::metric, Coupling::closed_form}) {
        CHECK(checks::a22_two_routes(351, 1, 100, 1e-9, c).passed);
        CHECK(checks::a22_two_routes(352, 2, 100, 1e-9, c).passed);
        CHECK(checks::a22_two_routes(353, 3, 50, 1e-9, c).passed);
    }
}

TEST_CASE("b22 Schur route equals its expanded display") {
    Rng rng(359);
    for (int trial = 0; trial < 50; ++trial) {
        const int n = 1 + static_cast<int>(rng.raw() % 3);
        const MetricParams params{1.0, rng.uniform(0.5, 2.0), rng.uniform(0.5, 2.0)};
        const ExtendedJacobiPoint pt = random_point(n, true, rng);
        const auto blocks = invert_qpk_by_blocks(params, pt.base.x.dense(), pt.base.y.dense(),
                                                 pt.p, pt.q, Coupling::metric);
        CHECK(std::abs(blocks.b22 - blocks.b22_display) <
              1e-12 * std::max(1.0, std::abs(blocks.b22)));
    }
}

TEST_CASE("in the metric convention b11 equals the closed non-extended inverse") {
    // the kappa Schur complement cancels the rank-one coupling exactly
    Rng rng(367);
    for (int n : {1, 2, 3}) {
        for (int trial = 0; trial < 20; ++trial) {
            const MetricParams params{1.0, rng.uniform(0.5, 2.0), rng.uniform(0.5, 2.0)};
            const ExtendedJacobiPoint pt = random_point(n, true, rng);
            const auto blocks = invert_qpk_by_blocks(params, pt.base.x.dense(),
                                                     pt.base.y.dense(), pt.p, pt.q,
                                                     Coupling::metric);
            const BaseMetricInverse base = base_metric_inverse(params, pt);
            CHECK(max_abs(blocks.b11 - base.qp_inv) < 1e-10);
        }
    }
}

TEST_CASE("a-blocks tend to the non-extended inverse as delta -> 0") {
    Rng rng(373);
    for (int n : {1, 2}) {
        const MetricParams tiny{1.0, 1.0, 1e-10};
        const ExtendedJacobiPoint pt = random_point(n, true, rng);
        const auto blocks = invert_qpk_by_blocks(tiny, pt.base.x.dense(), pt.base.y.dense(),
                                                 pt.p, pt.q, Coupling::metric);
        Mat a_full(2 * n, 2 * n);
        a_full.topLeftCorner(n, n) = blocks.a11;
        a_full.topRightCorner(n, n) = blocks.a12;
        a_full.bottomLeftCorner(n, n) = blocks.a21;
        a_full.bottomRightCorner(n, n) = blocks.a22;
        const BaseMetricInverse base = base_metric_inverse(tiny, pt);
        CHECK(max_abs(a_full - base.qp_inv) < 1e-7);
    }
}

TEST_CASE("n = 1 determinant identity gamma^2 delta") {
    SUBCASE("gamma = 2, delta = 3 at the base point") {
        CHECK(qpk_det_n1({1.0, 2.0, 3.0}, 0, 1, 0, 0) == doctest::Approx(12.0).epsilon(1e-12));
    }
    SUBCASE("point independence") {
        CHECK(qpk_det_n1({1.0, 1.0, 1.0}, 1, 2, 3, -1) == doctest::Approx(1.0).epsilon(1e-10));
    }
    SUBCASE("sweep") { CHECK(checks::det_n1_identity(379, 10, 100, 1e-10).passed); }
}

TEST_CASE("scalar invariants at simple inputs") {
    const MetricParams params{1.0, 1.0, 1.0};
    SUBCASE("I2 = p2 q1 - p1 q2") {
        const auto s = n2_invariants(params, Mat::Zero(2, 2), Mat::Identity(2, 2), rv({1, 0}),
                                     rv({0, 1}));
        CHECK(s.I2 == -1.0);
        CHECK(s.A == 0.0);
        CHECK(s.B == 2.0);  // y11^2 + y22^2
        CHECK(s.D == 1.0);
    }
    SUBCASE("D = det y") {
        const auto s = n2_invariants(params, Mat::Zero(2, 2), make(2, 2, {2, 1, 1, 1}),
                                     rv({0, 0}), rv({0, 0}));
        CHECK(s.D == 1.0);
    }
}

TEST_CASE("closed n = 2 determinant") {
    SUBCASE("p = q = 0 gives delta gamma^4") {
        const MetricParams params{1.0, 1.3, 0.6};
        Rng rng(383);
        const ExtendedJacobiPoint pt = random_point(2, true, rng);
        const double closed = closed_coupling_det_n2(params, pt.base.x.dense(),
                                                     pt.base.y.dense(), rv({0, 0}), rv({0, 0}));
        CHECK(closed == doctest::Approx(params.delta * std::pow(params.gamma, 4)).epsilon(1e-14));
    }
    SUBCASE("a real zero of the quartic, confirmed by the oracle") {
        // I2 = -1, A = 0, B = 2, D = 1: bracket = 1 - 2 + 1 = 0
        const MetricParams params{1.0, 1.0, 1.0};
        const Mat x = Mat::Zero(2, 2), y = Mat::Identity(2, 2);
        const double closed = closed_coupling_det_n2(params, x, y, rv({1, 0}), rv({0, 1}));
        CHECK(closed == 0.0);
        const double lu = lu_det(closed_coupling_block_n2(params, x, y, rv({1, 0}), rv({0, 1})));
        CHECK(std::abs(lu) < 1e-12);
        // the metric-coupling block is regular at the same point
        const double met = lu_det(qpk_block(params, x, y, rv({1, 0}), rv({0, 1}),
                                            Coupling::metric));
        CHECK(met == doctest::Approx(1.0).epsilon(1e-12));
    }
    SUBCASE("oracle agreement at random points") {
        CHECK(checks::det_n2_closed_vs_lu(389, 200, 1e-9).passed);
    }
}

TEST_CASE("closed n = 2 inverse at the decoupled point") {
    const MetricParams params{1.0, 1.7, 0.4};
    const Mat x = Mat::Zero(2, 2), y = Mat::Identity(2, 2);
    const Mat inv = closed_coupling_inverse_n2(params, x, y, rv({0, 0}), rv({0, 0}));
    // q and p sectors invert to 1/gamma, the kappa entry to 1/delta
    Vec expected(5);
    expected << 1.0 / params.gamma, 1.0 / params.gamma, 1.0 / params.gamma, 1.0 / params.gamma,
        1.0 / params.delta;
    CHECK(max_abs(inv - Mat(expected.asDiagonal())) < 1e-14);
}

TEST_CASE("closed n = 2 inverse refuses near the zero locus") {
    const MetricParams params{1.0, 1.0, 1.0};
    CHECK_THROWS_AS(closed_coupling_inverse_n2(params, Mat::Zero(2, 2), Mat::Identity(2, 2),
                                               rv({1, 0}), rv({0, 1})),
                    NearSingular);
}

TEST_CASE("closed n = 2 inverse times the forward block is the identity") {
    CHECK(checks::closed_inverse_product_n2(397, 300, 1e-8).passed);
}

TEST_CASE("a sign flip in any entry breaks the product identity") {
    const auto clean = checks::closed_inverse_product_n2(401, 20, 1e-8);
    REQUIRE(clean.passed);
    for (int i = 0; i < 5; ++i)
        for (int j = i; j < 5; ++j) {
            const auto flipped = checks::closed_inverse_product_n2(401, 20, 1e-8, SignFlip{i, j});
            CHECK(!flipped.passed);
        }
}

TEST_CASE("closed inverse cross-checks the blockwise route entry (1,3)") {
    CHECK(checks::closed_inverse_cross_block(409, 100, 1e-8).passed);
}

TEST_CASE("forward block transcription at simple points") {
    const MetricParams params{1.0, 1.9, 0.8};
    SUBCASE("decoupled point") {
        const Mat f = closed_coupling_block_n2(params, Mat::Zero(2, 2), Mat::Identity(2, 2),
                                               rv({0, 0}), rv({0, 0}));
        Vec expected(5);
        expected << params.gamma, params.gamma, params.gamma, params.gamma, params.delta;
        CHECK(max_abs(f - Mat(expected.asDiagonal())) < 1e-15);
    }
    SUBCASE("kappa row is point-independent") {
        Rng rng(419);
        const ExtendedJacobiPoint pt = random_point(2, true, rng);
        const Mat f = closed_coupling_block_n2(params, pt.base.x.dense(), pt.base.y.dense(),
                                               pt.p, pt.q);
        CHECK(f(4, 4) == params.delta);
        CHECK(f(0, 4) == -params.delta * pt.p[0]);
        CHECK(f(1, 4) == -params.delta * pt.p[1]);
        CHECK(f(2, 4) == params.delta * pt.q[0]);
        CHECK(f(3, 4) == params.delta * pt.q[1]);
    }
}

TEST_CASE("ladder coefficients reproduce the assembled inverse across delta") {
    // entry (i,j) of the inverse, divided by N, is a fixed linear combination of
    // { D g^3/delta, g^2, g t, t^2, D t^3/g } with t = delta I2; extract the five
    // coefficients from five delta samples and compare with the direct ladder
    Rng rng(421);
    int done = 0;
    while (done < 10) {
        const double g = rng.uniform(0.5, 2.0);
        ExtendedJacobiPoint pt = random_point(2, true, rng);
        const Mat x = pt.base.x.dense(), y = pt.base.y.dense();
        const double I2 = pt.p[1] * pt.q[0] - pt.p[0] * pt.q[1];
        if (std::abs(I2) < 0.2) continue;
        const double D = y(0, 0) * y(1, 1) - y(0, 1) * y(1, 0);
        const std::array<double, 5> deltas{0.4, 0.7, 1.1, 1.7, 2.6};

        Mat vmat(5, 5);
        std::array<Mat, 5> inverses;
        bool skip = false;
        for (int s = 0; s < 5; ++s) {
            const MetricParams params{1.0, g, deltas[s]};
            const double t = deltas[s] * I2;
            vmat(s, 0) = D * g * g * g / deltas[s];
            vmat(s, 1) = g * g;
            vmat(s, 2) = g * t;
            vmat(s, 3) = t * t;
            vmat(s, 4) = D * t * t * t / g;
            try {
                inverses[s] = closed_coupling_inverse_n2(params, x, y, pt.p, pt.q);
            } catch (const NearSingular&) {
                skip = true;
                break;
            }
        }
        if (skip) continue;
        for (int i = 0; i < 5; ++i)
            for (int j = i; j < 5; ++j) {
                Mat rhs(5, 1);
                for (int s = 0; s < 5; ++s) {
                    const MetricParams params{1.0, g, deltas[s]};
                    const double det = closed_coupling_det_n2(params, x, y, pt.p, pt.q);
                    const double N = g * deltas[s] / (det * D);
                    rhs(s, 0) = inverses[s](i, j) / N;
                }
                const Mat fitted = lu_solve(lu_factor(vmat), rhs);
                const auto direct = closed_inverse_ladder_n2(x, y, pt.p, pt.q, i, j);
                double scale = 0.0;
                for (int k = 0; k < 5; ++k) scale = std::max(scale, std::abs(direct[k]));
                for (int k = 0; k < 5; ++k)
                    CHECK(std::abs(fitted(k, 0) - direct[k]) <= 1e-10 * std::max(1.0, scale));
            }
        ++done;
    }
}
