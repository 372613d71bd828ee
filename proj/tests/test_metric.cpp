#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "sjg/metric.hpp"
#include "sjg/verify.hpp"

using namespace sjg;

namespace {

ExtendedJacobiPoint point1(double x, double y, double p, double q,
                           std::optional<double> kappa = std::nullopt) {
    ExtendedJacobiPoint pt;
    pt.base.x = SymMat(1);
    pt.base.x.set(0, 0, x);
    pt.base.y = SymMat(1);
    pt.base.y.set(0, 0, y);
    pt.p = RowVec(1);
    pt.p[0] = p;
    pt.q = RowVec(1);
    pt.q[0] = q;
    pt.kappa = kappa;
    return pt;
}

ChartVector unit_vector(const Chart& chart, int index) { return chart.basis(index); }

}  // namespace

TEST_CASE("line element at simple points") {
    const MetricParams params{1.7, 0.6, 2.2};
    SUBCASE("pure dx at the base point gives alpha") {
        const Chart chart{1, false};
        const double v = ds2(params, point1(0, 1, 0, 0), unit_vector(chart, 0));
        CHECK(v == doctest::Approx(params.alpha).epsilon(1e-15));
    }
    SUBCASE("pure dkappa gives delta") {
        const Chart chart{1, true};
        const double v = ds2(params, point1(0, 1, 0, 0, 0.0), unit_vector(chart, 4));
        CHECK(v == doctest::Approx(params.delta).epsilon(1e-15));
    }
    SUBCASE("pure dp at x = y = 1 gives gamma (x^2 + y^2) / y = 2 gamma") {
        const Chart chart{1, false};
        const double v = ds2(params, point1(1, 1, 0, 0), unit_vector(chart, 3));
        CHECK(v == doctest::Approx(2.0 * params.gamma).epsilon(1e-14));
    }
}

TEST_CASE("line element is positive for nonzero vectors") {
    Rng rng(211);
    const MetricParams params{0.9, 1.4, 0.5};
    for (int n : {1, 2, 3}) {
        const Chart chart{n, true};
        for (int trial = 0; trial < 200; ++trial) {
            const ExtendedJacobiPoint pt = random_point(n, true, rng);
            Vec c(chart.dim());
            for (int i = 0; i < chart.dim(); ++i) c[i] = rng.uniform(-1.0, 1.0);
            if (c.norm() < 1e-6) continue;
            CHECK(ds2(params, pt, chart.vector(c)) > 0.0);
        }
    }
}

TEST_CASE("the 1-form at simple inputs") {
    const Chart chart{2, true};
    ExtendedJacobiPoint pt;
    pt.base.x = SymMat(2);
    pt.base.y = SymMat::from_dense(Mat::Identity(2, 2));
    pt.p = RowVec::Zero(2);
    pt.q = RowVec::Zero(2);
    pt.kappa = 0.0;
    SUBCASE("only dkappa survives at p = q = 0") {
        CHECK(lambda_r(pt, chart.basis(chart.dim() - 1)) == 1.0);
    }
    SUBCASE("direct substitution") {
        pt.p[0] = 1.0;  // p = (1, 0), dq = (2, 0): -p dq^t = -2
        ChartVector v = chart.basis(6);
        v.dq[0] = 2.0;
        CHECK(lambda_r(pt, v) == -2.0);
    }
}

TEST_CASE("chart metric at the n = 1 base point is diagonal in the parameters") {
    const MetricParams params{1.3, 0.8, 2.6};
    const Chart chart{1, true};
    const Mat g = metric_matrix(params, point1(0, 1, 0, 0, 0.0), chart);
    Vec expected(5);
    expected << params.alpha, params.alpha, params.gamma, params.gamma, params.delta;
    CHECK(max_abs(g - Mat(expected.asDiagonal())) < 1e-15);
}

TEST_CASE("chart metric (q, p) block at x = 1, y = 2") {
    // g_qq = gamma/y, g_qp = gamma x/y, g_pp = gamma (x^2 + y^2)/y
    const MetricParams params{1.0, 1.4, 1.0};
    const Chart chart{1, false};
    const Mat g = metric_matrix(params, point1(1, 2, 0, 0), chart);
    Mat expected(2, 2);
    expected << 0.5, 0.5, 0.5, 2.5;
    CHECK(max_abs(g.bottomRightCorner(2, 2) - Mat(params.gamma * expected)) < 1e-14);
}

TEST_CASE("closed block formulas agree with polarization for n = 1, 2, 3") {
    Rng rng(223);
    for (int n : {1, 2, 3}) {
        const Chart chart{n, true};
        for (int trial = 0; trial < 25; ++trial) {
            const MetricParams params{rng.uniform(0.5, 2.0), rng.uniform(0.5, 2.0),
                                      rng.uniform(0.5, 2.0)};
            const ExtendedJacobiPoint pt = random_point(n, true, rng);
            const Mat g = metric_matrix(params, pt, chart);
            const Mat block = qpk_block(params, pt.base.x.dense(), pt.base.y.dense(), pt.p, pt.q,
                                        Coupling::metric);
            CHECK(max_abs(g.bottomRightCorner(2 * n + 1, 2 * n + 1) - block) <= 1e-12);
        }
    }
}

TEST_CASE("quadratic form equals the polarized matrix") {
    Rng rng(227);
    for (int n : {1, 2}) {
        const Chart chart{n, true};
        for (int trial = 0; trial < 50; ++trial) {
            const MetricParams params{rng.uniform(0.5, 2.0), rng.uniform(0.5, 2.0),
                                      rng.uniform(0.5, 2.0)};
            const ExtendedJacobiPoint pt = random_point(n, true, rng);
            const Mat g = metric_matrix(params, pt, chart);
            Vec c(chart.dim());
            for (int i = 0; i < chart.dim(); ++i) c[i] = rng.uniform(-1.0, 1.0);
            const double via_matrix = (c.transpose() * g * c)(0, 0);
            const double direct = ds2(params, pt, chart.vector(c));
            CHECK(std::abs(via_matrix - direct) <= 1e-12 * std::max(1.0, std::abs(direct)));
        }
    }
}

TEST_CASE("chart metric is positive definite at random points") {
    Rng rng(229);
    const MetricParams params{1.1, 0.7, 1.9};
    for (int trial = 0; trial < 1000; ++trial) {
        const int n = 1 + static_cast<int>(rng.raw() % 2);
        const Chart chart{n, true};
        const ExtendedJacobiPoint pt = random_point(n, true, rng);
        const Mat g = metric_matrix(params, pt, chart);
        CHECK(is_positive_definite(g));
        Vec c(chart.dim());
        for (int i = 0; i < chart.dim(); ++i) c[i] = rng.uniform(-1.0, 1.0);
        CHECK((c.transpose() * g * c)(0, 0) > 0.0);
    }
}

TEST_CASE("vec identity for the x-sector block") {
    Rng rng(233);
    const MetricParams params{1.5, 1.0, 1.0};
    SUBCASE("scalar case: both sides alpha dx^2 / y^2") {
        const ExtendedJacobiPoint pt = point1(0.3, 1.7, 0, 0);
        const Mat w = xy_kron_block(params, pt.base.y.dense());
        CHECK(w(0, 0) == doctest::Approx(params.alpha / (1.7 * 1.7)).epsilon(1e-14));
    }
    SUBCASE("random points up to n = 3") {
        for (int n : {1, 2, 3}) {
            const ExtendedJacobiPoint pt = random_point(n, true, rng);
            CHECK(full_vec_block_check(params, pt, 50, rng) <= 1e-12);
        }
    }
}

TEST_CASE("the two coupling conventions differ exactly by the rank-one transpose") {
    Rng rng(239);
    const MetricParams params{1.0, 1.3, 0.8};
    const ExtendedJacobiPoint pt = random_point(2, true, rng);
    const Mat x = pt.base.x.dense(), y = pt.base.y.dense();
    const Mat gm = qpk_block(params, x, y, pt.p, pt.q, Coupling::metric);
    const Mat gc = qpk_block(params, x, y, pt.p, pt.q, Coupling::closed_form);
    Mat diff = gm - gc;
    const Mat expected = params.delta * (Mat(pt.q.transpose() * pt.p) -
                                         Mat(pt.p.transpose() * pt.q));
    CHECK(max_abs(diff.block(0, 2, 2, 2) - expected) < 1e-15);
    // diagonal blocks and the kappa border agree
    CHECK(max_abs(diff.topLeftCorner(2, 2)) == 0.0);
    CHECK(max_abs(diff.block(2, 2, 2, 2)) == 0.0);
    CHECK(max_abs(diff.row(4)) == 0.0);
    // they coincide when p and q are parallel
    ExtendedJacobiPoint par = pt;
    par.q = 2.0 * par.p;
    CHECK(max_abs(qpk_block(params, x, y, par.p, par.q, Coupling::metric) -
                  qpk_block(params, x, y, par.p, par.q, Coupling::closed_form)) < 1e-15);
}

TEST_CASE("metric-coupling block has constant determinant gamma^2n delta") {
    Rng rng(241);
    for (int n : {1, 2, 3}) {
        for (int trial = 0; trial < 20; ++trial) {
            const MetricParams params{1.0, rng.uniform(0.5, 2.0), rng.uniform(0.5, 2.0)};
            const ExtendedJacobiPoint pt = random_point(n, true, rng);
            const double det = lu_det(qpk_block(params, pt.base.x.dense(), pt.base.y.dense(),
                                                pt.p, pt.q, Coupling::metric));
            const double expected = std::pow(params.gamma, 2 * n) * params.delta;
            CHECK(std::abs(det / expected - 1.0) < 1e-10);
        }
    }
}

TEST_CASE("pushforward under the identity returns the vector") {
    Rng rng(251);
    const ExtendedJacobiPoint pt = random_point(2, true, rng);
    const Chart chart{2, true};
    Vec c(chart.dim());
    for (int i = 0; i < chart.dim(); ++i) c[i] = rng.uniform(-1.0, 1.0);
    const ChartVector v = chart.vector(c);
    const ChartVector w = pushforward(JacobiGroupElement::identity(2), pt, v);
    CHECK((chart.coords(w) - c).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("pushforward is linear up to truncation error") {
    Rng rng(257);
    const JacobiGroupElement g = random_symplectic(2, 0.4, rng);
    const ExtendedJacobiPoint pt = random_point(2, true, rng);
    const Chart chart{2, true};
    Vec c(chart.dim());
    for (int i = 0; i < chart.dim(); ++i) c[i] = rng.uniform(-1.0, 1.0);
    const Vec w1 = chart.coords(pushforward(g, pt, chart.vector(c)));
    const Vec w2 = chart.coords(pushforward(g, pt, chart.vector(Vec(2.0 * c))));
    CHECK((w2 - 2.0 * w1).cwiseAbs().maxCoeff() < 1e-6);
}

TEST_CASE("the line element and the 1-form are invariant under the action") {
    CHECK(checks::ds2_invariance(3001, 1, 50, 1e-6).passed);
    CHECK(checks::ds2_invariance(3002, 2, 50, 1e-6).passed);
    CHECK(checks::lambda_r_invariance(3003, 1, 50, 1e-6).passed);
    CHECK(checks::lambda_r_invariance(3004, 2, 50, 1e-6).passed);
}

TEST_CASE("dropping the extension term recovers the plain line element exactly") {
    Rng rng(263);
    for (int trial = 0; trial < 50; ++trial) {
        const int n = 1 + static_cast<int>(rng.raw() % 2);
        const MetricParams params{rng.uniform(0.5, 2.0), rng.uniform(0.5, 2.0),
                                  rng.uniform(0.5, 2.0)};
        ExtendedJacobiPoint ext = random_point(n, true, rng);
        ExtendedJacobiPoint plain = ext;
        plain.kappa.reset();
        const Chart pchart{n, false};
        Vec c(pchart.dim());
        for (int i = 0; i < pchart.dim(); ++i) c[i] = rng.uniform(-1.0, 1.0);
        const ChartVector pv = pchart.vector(c);
        // choose dkappa so the 1-form vanishes: dkappa = p dq^t - q dp^t
        ChartVector ev;
        ev.dx = pv.dx;
        ev.dy = pv.dy;
        ev.dq = pv.dq;
        ev.dp = pv.dp;
        ev.dkappa = (ext.p * pv.dq.transpose())(0, 0) - (ext.q * pv.dp.transpose())(0, 0);
        CHECK(ds2(params, ext, ev) == ds2(params, plain, pv));
    }
}

TEST_CASE("dimension mismatches are rejected") {
    const MetricParams params;
    const Chart chart1{1, true};
    const ExtendedJacobiPoint pt = point1(0, 1, 0, 0, 0.0);
    ChartVector wrong = chart1.basis(0);
    wrong.dq = RowVec::Zero(2);
    CHECK_THROWS_AS(ds2(params, pt, wrong), DimensionMismatch);
    ExtendedJacobiPoint plain = pt;
    plain.kappa.reset();
    CHECK_THROWS_AS(ds2(params, plain, chart1.basis(0)), DimensionMismatch);
    CHECK_THROWS_AS(metric_matrix(params, plain, chart1), DimensionMismatch);
    CHECK_THROWS_AS(lambda_r(plain, chart1.basis(0)), DimensionMismatch);
}
