#include "sjg/metric.hpp"

namespace sjg {

double ds2(const MetricParams& params, const ExtendedJacobiPoint& pt, const ChartVector& v) {
    validate(params);
    const int n = pt.n();
    if (v.n() != n || v.dq.size() != n || v.dp.size() != n)
        throw DimensionMismatch("tangent vector dimension does not match point");
    if (pt.extended() != v.extended())
        throw DimensionMismatch("point and vector disagree on the kappa coordinate");

    const Mat x = pt.base.x.dense();
    const Mat yi = lu_inverse(pt.base.y.dense());
    const Mat dx = v.dx.dense();
    const Mat dy = v.dy.dense();

    const Mat ax = yi * dx;
    const Mat ay = yi * dy;
    double r = params.alpha * ((ax * ax).trace() + (ay * ay).trace());

    const Mat xyi = x * yi;
    r += params.gamma * ((v.dp * (xyi * x + pt.base.y.dense()) * v.dp.transpose())(0, 0) +
                         (v.dq * yi * v.dq.transpose())(0, 0) +
                         2.0 * (v.dp * xyi * v.dq.transpose())(0, 0));
    if (pt.extended()) {
        const double lam = lambda_r(pt, v);
        r += params.delta * lam * lam;
    }
    return r;
}

double lambda_r(const ExtendedJacobiPoint& pt, const ChartVector& v) {
    if (!pt.extended() || !v.extended())
        throw DimensionMismatch("lambda_r needs an extended point and vector");
    if (v.dq.size() != pt.n() || v.dp.size() != pt.n())
        throw DimensionMismatch("tangent vector dimension does not match point");
    return *v.dkappa - (pt.p * v.dq.transpose())(0, 0) + (pt.q * v.dp.transpose())(0, 0);
}

Mat metric_matrix(const MetricParams& params, const ExtendedJacobiPoint& pt, const Chart& chart) {
    chart.check_point(pt);
    const int d = chart.dim();
    std::vector<ChartVector> basis;
    basis.reserve(d);
    for (int a = 0; a < d; ++a) basis.push_back(chart.basis(a));
    std::vector<double> diag(d);
    for (int a = 0; a < d; ++a) diag[a] = ds2(params, pt, basis[a]);

    Mat g(d, d);
    for (int a = 0; a < d; ++a) {
        g(a, a) = diag[a];
        for (int b = a + 1; b < d; ++b) {
            const ChartVector sum = chart.vector(chart.coords(basis[a]) + chart.coords(basis[b]));
            g(a, b) = g(b, a) = 0.5 * (ds2(params, pt, sum) - diag[a] - diag[b]);
        }
    }
    return g;
}

Mat base_qp_block(const MetricParams& params, const Mat& x, const Mat& y) {
    const int n = static_cast<int>(x.rows());
    const Mat yi = lu_inverse(y);
    Mat g(2 * n, 2 * n);
    g.topLeftCorner(n, n) = params.gamma * yi;
    g.topRightCorner(n, n) = params.gamma * yi * x;
    g.bottomLeftCorner(n, n) = params.gamma * x * yi;
    g.bottomRightCorner(n, n) = params.gamma * (y + x * yi * x);
    return g;
}

Mat qpk_block(const MetricParams& params, const Mat& x, const Mat& y, const RowVec& p,
              const RowVec& q, Coupling coupling) {
    const int n = static_cast<int>(x.rows());
    Mat g = Mat::Zero(2 * n + 1, 2 * n + 1);
    g.topLeftCorner(2 * n, 2 * n) = base_qp_block(params, x, y);

    const Mat ptp = p.transpose() * p;  // rank-one outer products, (i,j) -> p_i p_j
    const Mat qtq = q.transpose() * q;
    const Mat cross = (coupling == Coupling::metric) ? Mat(p.transpose() * q)
                                                     : Mat(q.transpose() * p);
    g.topLeftCorner(n, n) += params.delta * ptp;
    g.block(n, n, n, n) += params.delta * qtq;
    g.block(0, n, n, n) -= params.delta * cross;
    g.block(n, 0, n, n) -= params.delta * cross.transpose();

    g.block(0, 2 * n, n, 1) = -params.delta * p.transpose();
    g.block(2 * n, 0, 1, n) = -params.delta * p;
    g.block(n, 2 * n, n, 1) = params.delta * q.transpose();
    g.block(2 * n, n, 1, n) = params.delta * q;
    g(2 * n, 2 * n) = params.delta;
    return g;
}

Mat xy_kron_block(const MetricParams& params, const Mat& y) {
    const Mat yi = lu_inverse(y);
    return params.alpha * kron(yi, yi);
}

double full_vec_block_check(const MetricParams& params, const ExtendedJacobiPoint& pt,
                            int samples, Rng& rng) {
    const int n = pt.n();
    const Mat y = pt.base.y.dense();
    const Mat yi = lu_inverse(y);
    const Mat w = xy_kron_block(params, y);
    double worst = 0.0;
    for (int s = 0; s < samples; ++s) {
        Mat dx(n, n);
        for (int i = 0; i < n; ++i) {
            dx(i, i) = rng.uniform(-1.0, 1.0);
            for (int j = i + 1; j < n; ++j) dx(i, j) = dx(j, i) = rng.uniform(-1.0, 1.0);
        }
        // row-major vec matches the kron indexing convention
        Vec vec(n * n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) vec[i * n + j] = dx(i, j);
        const double quad = vec.transpose() * w * vec;
        const Mat a = yi * dx;
        const double tr = params.alpha * (a * a).trace();
        worst = std::max(worst, std::abs(quad - tr));
    }
    return worst;
}

ChartVector pushforward(const JacobiGroupElement& g, const ExtendedJacobiPoint& pt,
                        const ChartVector& v, double h) {
    if (!(h >= 1e-8 && h <= 1e-4))
        throw ValidationError("pushforward step must lie in [1e-8, 1e-4]");
    const Chart chart{pt.n(), pt.extended()};
    const Vec c0 = chart.coords(pt);
    const Vec dv = chart.coords(v);
    const Vec plus = chart.coords(act_extended(g, chart.point(c0 + h * dv)));
    const Vec minus = chart.coords(act_extended(g, chart.point(c0 - h * dv)));
    return chart.vector((plus - minus) / (2.0 * h));
}

}  // namespace sjg
