#include "sjg/inverse.hpp"

#include <cmath>

namespace sjg {

namespace {

Mat inverse_or_throw(const Mat& m, const char* which) {
    const LuFactors f = lu_factor(m);
    if (f.singular) throw SingularBlock(std::string("singular block: ") + which);
    return lu_solve(f, Mat::Identity(m.rows(), m.cols()));
}

}  // namespace

Mat schur_inverse(const Partition2x2& h) {
    const int m = static_cast<int>(h.h1.rows());
    const int k = static_cast<int>(h.h4.rows());
    if (h.h1.cols() != m || h.h4.cols() != k || h.h2.rows() != m || h.h2.cols() != k ||
        h.h3.rows() != k || h.h3.cols() != m)
        throw DimensionMismatch("schur_inverse: blocks are not conformal");

    const Mat h1i = inverse_or_throw(h.h1, "h1");
    const Mat h4i = inverse_or_throw(h.h4, "h4");
    const Mat top = inverse_or_throw(h.h1 - h.h2 * h4i * h.h3, "h1 - h2 h4^-1 h3");
    const Mat bottom = inverse_or_throw(h.h4 - h.h3 * h1i * h.h2, "h4 - h3 h1^-1 h2");

    Mat out(m + k, m + k);
    out.topLeftCorner(m, m) = top;
    out.bottomRightCorner(k, k) = bottom;
    out.topRightCorner(m, k) = -h1i * h.h2 * bottom;
    out.bottomLeftCorner(k, m) = -bottom * h.h3 * h1i;
    return out;
}

BaseMetricInverse base_metric_inverse(const MetricParams& params, const ExtendedJacobiPoint& pt) {
    validate(params);
    const int n = pt.n();
    const Mat x = pt.base.x.dense();
    const Mat y = pt.base.y.dense();
    const Mat yi = lu_inverse(y);

    BaseMetricInverse out;
    out.xy_kron_inv = (1.0 / params.alpha) * kron(y, y);
    out.qp_inv = Mat(2 * n, 2 * n);
    out.qp_inv.topLeftCorner(n, n) = (y + x * yi * x) / params.gamma;
    out.qp_inv.topRightCorner(n, n) = -(x * yi) / params.gamma;
    out.qp_inv.bottomLeftCorner(n, n) = -(yi * x) / params.gamma;
    out.qp_inv.bottomRightCorner(n, n) = yi / params.gamma;
    return out;
}

Mat qp_inverse_extended_n1(const MetricParams& params, double x, double y, double p, double q) {
    const double g = params.gamma, de = params.delta;
    const double px_q = p * x + q;
    const double denom = g * y + de * (px_q * px_q + y * y * p * p);
    Mat out(2, 2);
    out(0, 0) = g * (x * x + y * y) + de * q * q * y;
    out(0, 1) = out(1, 0) = -g * x + de * p * q * y;
    out(1, 1) = g + de * p * p * y;
    return out / (g * denom);
}

static Mat a22_simplified_route(const MetricParams& params, const Mat& x, const Mat& y,
                                const RowVec& p, const RowVec& q, Coupling coupling) {
    const int n = static_cast<int>(x.rows());
    const double g = params.gamma, de = params.delta;
    const Mat id = Mat::Identity(n, n);
    const Mat yi = lu_inverse(y);
    const Mat ptp = p.transpose() * p;
    const Mat qtq = q.transpose() * q;
    // the two conventions transpose the rank-one cross factor
    const Mat cr = (coupling == Coupling::closed_form) ? Mat(q.transpose() * p)
                                                       : Mat(p.transpose() * q);
    const Mat crt = cr.transpose();

    const Mat t1 = g * y + de * qtq;
    const Mat t2 = de * x * ptp * y * lu_inverse(id + (de / g) * ptp * y) * yi * x;
    const Mat t3 = g * de * x * lu_inverse(g * id + de * ptp * y) * cr;
    const Mat t4 = g * de * crt * lu_inverse(g * id + de * y * ptp) * x;
    const Mat t5 = -de * de * crt * y * lu_inverse(g * id + de * ptp * y) * cr;
    return lu_inverse(t1 + t2 + t3 + t4 + t5);
}

QpkBlockInverse invert_qpk_by_blocks(const MetricParams& params, const Mat& x, const Mat& y,
                                     const RowVec& p, const RowVec& q, Coupling coupling) {
    validate(params);
    const int n = static_cast<int>(x.rows());
    const double de = params.delta;
    const Mat g = qpk_block(params, x, y, p, q, coupling);
    const Mat gqq = g.topLeftCorner(n, n);
    const Mat gqp = g.block(0, n, n, n);
    const Mat gpq = g.block(n, 0, n, n);
    const Mat gpp = g.block(n, n, n, n);

    QpkBlockInverse out;
    {
        const Mat gqq_i = inverse_or_throw(gqq, "g'_qq");
        const Mat gpp_i = inverse_or_throw(gpp, "g'_pp");
        out.a11 = inverse_or_throw(gqq - gqp * gpp_i * gpq, "g'_qq - g'_qp g'_pp^-1 g'_pq");
        out.a22 = inverse_or_throw(gpp - gpq * gqq_i * gqp, "g'_pp - g'_pq g'_qq^-1 g'_qp");
        out.a12 = -gqq_i * gqp * out.a22;
        out.a21 = -out.a22 * gpq * gqq_i;
    }
    out.a22_simplified = a22_simplified_route(params, x, y, p, q, coupling);

    Mat a11_full(2 * n, 2 * n);
    a11_full.topLeftCorner(n, n) = out.a11;
    a11_full.topRightCorner(n, n) = out.a12;
    a11_full.bottomLeftCorner(n, n) = out.a21;
    a11_full.bottomRightCorner(n, n) = out.a22;

    Vec a12col(2 * n);  // the kappa column (-delta p^t; delta q^t)
    a12col.head(n) = -de * p.transpose();
    a12col.tail(n) = de * q.transpose();

    out.b22 = 1.0 / (de - (a12col.transpose() * a11_full * a12col)(0, 0));

    const double pap = (p * out.a11 * p.transpose())(0, 0);
    const double qa21p = (q * out.a21 * p.transpose())(0, 0);
    const double pa12q = (p * out.a12 * q.transpose())(0, 0);
    const double qaq = (q * out.a22 * q.transpose())(0, 0);
    out.b22_display = (1.0 / de) / (1.0 - de * (pap - qa21p - pa12q + qaq));

    const Mat a11_block = g.topLeftCorner(2 * n, 2 * n);
    out.b11 = inverse_or_throw(a11_block - (a12col * a12col.transpose()) / de,
                               "A11 - A12 delta^-1 A21");
    out.b12 = -(a11_full * a12col) * out.b22;
    out.b21 = out.b12.transpose();

    out.assembled = Mat(2 * n + 1, 2 * n + 1);
    out.assembled.topLeftCorner(2 * n, 2 * n) = out.b11;
    out.assembled.block(0, 2 * n, 2 * n, 1) = out.b12;
    out.assembled.block(2 * n, 0, 1, 2 * n) = out.b21;
    out.assembled(2 * n, 2 * n) = out.b22;
    return out;
}

double qpk_det_n1(const MetricParams& params, double x, double y, double p, double q) {
    Mat xm(1, 1), ym(1, 1);
    xm(0, 0) = x;
    ym(0, 0) = y;
    RowVec pv(1), qv(1);
    pv[0] = p;
    qv[0] = q;
    return lu_det(qpk_block(params, xm, ym, pv, qv, Coupling::metric));
}

N2Invariants n2_invariants(const MetricParams& params, const Mat& x, const Mat& y,
                           const RowVec& p, const RowVec& q) {
    N2Invariants s;
    s.I2 = p[1] * q[0] - p[0] * q[1];
    s.A = 2.0 * ((x(0, 0) - x(1, 1)) * y(0, 1) - x(0, 1) * (y(0, 0) - y(1, 1)));
    s.B = 4.0 * x(0, 1) * x(0, 1) + (x(0, 0) - x(1, 1)) * (x(0, 0) - x(1, 1)) +
          y(0, 0) * y(0, 0) + y(1, 1) * y(1, 1) + 2.0 * y(0, 1) * y(0, 1);
    s.D = y(0, 0) * y(1, 1) - y(0, 1) * y(1, 0);
    const double det = closed_coupling_det_n2(params, x, y, p, q);
    s.N = params.gamma * params.delta / (det * s.D);
    return s;
}

double closed_coupling_det_n2(const MetricParams& params, const Mat& x, const Mat& y,
                              const RowVec& p, const RowVec& q) {
    const double g = params.gamma, de = params.delta;
    const double I2 = p[1] * q[0] - p[0] * q[1];
    const double A = 2.0 * ((x(0, 0) - x(1, 1)) * y(0, 1) - x(0, 1) * (y(0, 0) - y(1, 1)));
    const double B = 4.0 * x(0, 1) * x(0, 1) + (x(0, 0) - x(1, 1)) * (x(0, 0) - x(1, 1)) +
                     y(0, 0) * y(0, 0) + y(1, 1) * y(1, 1) + 2.0 * y(0, 1) * y(0, 1);
    const double D = y(0, 0) * y(1, 1) - y(0, 1) * y(1, 0);
    const double t = de * I2;
    return de * (g * g * g * g - g * g * g * t * A / D - g * g * t * t * B / D - g * t * t * t * A / D +
                 t * t * t * t);
}

Mat closed_coupling_block_n2(const MetricParams& params, const Mat& x, const Mat& y,
                             const RowVec& p, const RowVec& q) {
    if (x.rows() != 2) throw DimensionMismatch("closed_coupling_block_n2 requires n = 2");
    return qpk_block(params, x, y, p, q, Coupling::closed_form);
}

std::array<double, 5> closed_inverse_ladder_n2(const Mat& x, const Mat& y, const RowVec& p,
                                               const RowVec& q, int i, int j) {
    if (i > j) std::swap(i, j);
    const double x11 = x(0, 0), x12 = x(0, 1), x22 = x(1, 1);
    const double y11 = y(0, 0), y12 = y(0, 1), y22 = y(1, 1);
    const double p1 = p[0], p2 = p[1], q1 = q[0], q2 = q[1];
    const double I2 = p2 * q1 - p1 * q2;

    // recurring polynomials
    const double s11 = y11 * (x12 * x12 - y12 * y12) + y22 * (x11 * x11 + y11 * y11) -
                       2.0 * x11 * x12 * y12;
    const double s22 = y11 * (x22 * x22 + y22 * y22) + y22 * (x12 * x12 - y12 * y12) -
                       2.0 * x22 * x12 * y12;
    const double mix = x12 * (x22 * y11 + x11 * y22) -
                       y12 * (x12 * x12 + y12 * y12 + x11 * x22 - y11 * y22);
    const double edge = x12 * (x11 + x22) + y12 * (y11 + y22);

    std::array<double, 5> c{0.0, 0.0, 0.0, 0.0, 0.0};
    auto& [c0, c1, c2, c3, c4] = c;

    if (i == 0 && j == 0) {
        c1 = s11;
        c2 = 2.0 * (-x12 * (x12 * x12 + y12 * y12 - x11 * x22 + y11 * y22) +
                    y12 * (x22 * y11 + x11 * y22));
        c3 = -s22;
    } else if (i == 0 && j == 1) {
        c1 = mix;
        c2 = x11 * (x12 * x12 - y12 * y12 + x22 * x22 + y22 * y22) -
             x22 * (x12 * x12 - y12 * y12 + x11 * x11 + y11 * y11) +
             2.0 * x12 * y12 * (y11 - y22);
        c3 = mix;
    } else if (i == 0 && j == 2) {
        c1 = x12 * y12 - x11 * y22;
        c2 = -edge;
        c3 = x22 * y11 - x12 * y12;
    } else if (i == 0 && j == 3) {
        c1 = -x12 * y11 + x11 * y12;
        c2 = x11 * x11 + 2.0 * x12 * x12 - x11 * x22 + y11 * y11 + y12 * y12;
        c3 = 2.0 * x11 * y12 - 2.0 * x12 * y11 - x22 * y12 + x12 * y22;
        c4 = -1.0;
    } else if (i == 0 && j == 4) {
        c1 = q1 * (x11 * y22 - x12 * y12) + q2 * (x12 * y11 - x11 * y12) + p1 * s11 + p2 * mix;
        c2 = q1 * edge -
             q2 * (2.0 * x12 * x12 - x11 * x22 + x11 * x11 + y11 * y11 + y12 * y12) +
             2.0 * p1 * (x12 * (x11 * x22 - y11 * y22 - x12 * x12 - y12 * y12) +
                         y12 * (x22 * y11 + x11 * y22)) +
             p2 * (x11 * (x22 * x22 + y22 * y22 + x12 * x12 - y12 * y12) -
                   x22 * (x11 * x11 + y11 * y11 + x12 * x12 - y12 * y12) +
                   2.0 * x12 * y12 * (y11 - y22));
        c3 = q1 * (x12 * y12 - x22 * y11) +
             q2 * (2.0 * x12 * y11 - 2.0 * x11 * y12 + x22 * y12 - x12 * y22) + p2 * mix -
             p1 * s22;
        c4 = q2;
    } else if (i == 1 && j == 1) {
        c1 = s22;
        c2 = 2.0 * (-y12 * (x11 * y22 + x22 * y11) +
                    x12 * (x12 * x12 + y12 * y12 - x11 * x22 + y11 * y22));
        c3 = -s11;
    } else if (i == 1 && j == 2) {
        c1 = x22 * y12 - x12 * y22;
        c2 = -2.0 * x12 * x12 + x11 * x22 - x22 * x22 - y12 * y12 - y22 * y22;
        c3 = x12 * y11 - x11 * y12 + 2.0 * x22 * y12 - 2.0 * x12 * y22;
        c4 = 1.0;
    } else if (i == 1 && j == 3) {
        c1 = -(x22 * y11 - x12 * y12);
        c2 = edge;
        c3 = -(x12 * y12 - x11 * y22);
    } else if (i == 1 && j == 4) {
        c1 = q1 * (x12 * y22 - x22 * y12) + q2 * (x22 * y11 - x12 * y12) + p1 * mix + p2 * s22;
        c2 = q1 * (2.0 * x12 * x12 - x11 * x22 + x22 * x22 + y12 * y12 + y22 * y22) - q2 * edge -
             2.0 * p2 * (x12 * (x11 * x22 - x12 * x12 - y12 * y12 - y11 * y22) +
                         y12 * (x22 * y11 + x11 * y22)) -
             p1 * (-x11 * (x12 * x12 + x22 * x22 + y22 * y22 - y12 * y12) +
                   x22 * (x11 * x11 + x12 * x12 + y11 * y11 - y12 * y12) -
                   2.0 * x12 * y12 * (y11 - y22));
        c3 = -(q1 * (x12 * y11 - x11 * y12 + 2.0 * x22 * y12 - 2.0 * x12 * y22) +
               q2 * (x11 * y22 - x12 * y12) - p1 * mix + p2 * s11);
        c4 = -q1;
    } else if (i == 2 && j == 2) {
        c1 = y22;
        c2 = 2.0 * x12;
        c3 = -y11;
    } else if (i == 2 && j == 3) {
        c1 = -y12;
        c2 = -(x11 - x22);
        c3 = -y12;
    } else if (i == 2 && j == 4) {
        c1 = -q1 * y22 + q2 * y12 - p1 * (x11 * y22 - x12 * y12) + p2 * (x22 * y12 - x12 * y22);
        c2 = -(2.0 * q1 * x12 - q2 * (x11 - x22) + p1 * edge +
               p2 * (2.0 * x12 * x12 - x11 * x22 + x22 * x22 + y12 * y12 + y22 * y22));
        c3 = q1 * y11 + q2 * y12 + p1 * (x22 * y11 - x12 * y12) +
             p2 * (x12 * y11 - x11 * y12 + 2.0 * x22 * y12 - 2.0 * x12 * y22);
        c4 = p2;
    } else if (i == 3 && j == 3) {
        c1 = y11;
        c2 = -2.0 * x12;
        c3 = -y22;
    } else if (i == 3 && j == 4) {
        c1 = q1 * y12 - q2 * y11 + p1 * (x11 * y12 - x12 * y11) + p2 * (x12 * y12 - x22 * y11);
        c2 = q1 * (x11 - x22) + 2.0 * q2 * x12 +
             p1 * (x11 * x11 + y11 * y11 + y12 * y12 + 2.0 * x12 * x12 - x11 * x22) + p2 * edge;
        c3 = q1 * y12 + q2 * y22 +
             p1 * (x12 * y22 - x22 * y12 + 2.0 * x11 * y12 - 2.0 * x12 * y11) +
             p2 * (x11 * y22 - x12 * y12);
        c4 = -p1;
    } else {  // (4,4)
        c0 = 1.0;
        // every p q cross term carries the factor 2; the product identity
        // against the forward block fails without it on the p1 q2 term
        c1 = q1 * q1 * y22 + q2 * q2 * y11 - 2.0 * q1 * q2 * y12 + p1 * p1 * s11 +
             p2 * p2 * s22 + 2.0 * p1 * p2 * mix + 2.0 * p1 * q1 * (x11 * y22 - x12 * y12) +
             2.0 * p1 * q2 * (x12 * y22 - x22 * y12) + 2.0 * p2 * q1 * (x12 * y11 - x11 * y12) +
             2.0 * p2 * q2 * (x22 * y11 - x12 * y12);
        c2 = 2.0 * ((q1 * q1 - q2 * q2) * x12 - q1 * q2 * (x11 - x22) -
                    (p1 * p1 - p2 * p2) *
                        (x12 * (x12 * x12 + y12 * y12 - x11 * x22 + y11 * y22) -
                         y12 * (x22 * y11 + x11 * y22)) +
                    (p1 * q1 - p2 * q2) * edge -
                    0.5 * (p1 * q2 + p2 * q1) *
                        (x11 * x11 - x22 * x22 + y11 * y11 - y22 * y22) +
                    p1 * p2 * (x11 * (x12 * x12 + x22 * x22 + y22 * y22 - y12 * y12) -
                               x22 * (x12 * x12 + x11 * x11 + y11 * y11 - y12 * y12) +
                               2.0 * x12 * y12 * (y11 - y22)));
        c3 = -(q1 * q1 * y11 + q2 * q2 * y22 + 2.0 * q1 * q2 * y12 + p1 * p1 * s22 +
               p2 * p2 * s11 - 2.0 * p1 * q1 * (x12 * y12 - x22 * y11) -
               2.0 * p1 * q2 * (x12 * y11 - x11 * y12) - 2.0 * p2 * q1 * (x12 * y22 - x22 * y12) -
               2.0 * p2 * q2 * (x12 * y12 - x11 * y22) - 2.0 * p1 * p2 * mix);
        c4 = -I2;
    }
    return c;
}

Mat closed_coupling_inverse_n2(const MetricParams& params, const Mat& x, const Mat& y,
                               const RowVec& p, const RowVec& q, SignFlip flip) {
    validate(params);
    if (x.rows() != 2) throw DimensionMismatch("closed_coupling_inverse_n2 requires n = 2");
    const double g = params.gamma, de = params.delta;
    const double I2 = p[1] * q[0] - p[0] * q[1];
    const double D = y(0, 0) * y(1, 1) - y(0, 1) * y(1, 0);
    const double det = closed_coupling_det_n2(params, x, y, p, q);
    const double scale = g * g * g * g * de + std::pow(de * std::abs(I2), 4) * de;
    if (std::abs(det) <= 1e-12 * scale)
        throw NearSingular("closed determinant below the scale-aware threshold");

    const double N = g * de / (det * D);
    const double t = de * I2;
    const std::array<double, 5> basis{D * g * g * g / de, g * g, g * t, t * t,
                                      D * t * t * t / g};
    Mat out(5, 5);
    for (int i = 0; i < 5; ++i) {
        for (int j = i; j < 5; ++j) {
            const auto c = closed_inverse_ladder_n2(x, y, p, q, i, j);
            double v = 0.0;
            for (int k = 0; k < 5; ++k) v += c[k] * basis[k];
            out(i, j) = out(j, i) = N * v;
        }
    }
    if (flip.active()) {
        out(flip.i, flip.j) = -out(flip.i, flip.j);
        if (flip.i != flip.j) out(flip.j, flip.i) = -out(flip.j, flip.i);
    }
    return out;
}

}  // namespace sjg
