#include "sjg/chart.hpp"

namespace sjg {

Vec Chart::coords(const ExtendedJacobiPoint& pt) const {
    check_point(pt);
    Vec c(dim());
    const int t = tri();
    c.segment(0, t) = pt.base.x.packed();
    c.segment(t, t) = pt.base.y.packed();
    c.segment(2 * t, n) = pt.q.transpose();
    c.segment(2 * t + n, n) = pt.p.transpose();
    if (extended) c[dim() - 1] = *pt.kappa;
    return c;
}

ExtendedJacobiPoint Chart::point(const Vec& c) const {
    if (c.size() != dim()) throw DimensionMismatch("chart coordinates have wrong length");
    const int t = tri();
    ExtendedJacobiPoint pt;
    pt.base.x = SymMat(n);
    pt.base.x.packed() = c.segment(0, t);
    pt.base.y = SymMat(n);
    pt.base.y.packed() = c.segment(t, t);
    pt.q = c.segment(2 * t, n).transpose();
    pt.p = c.segment(2 * t + n, n).transpose();
    if (extended) pt.kappa = c[dim() - 1];
    if (!is_positive_definite(pt.base.y.dense()))
        throw PositivityLoss("decoded y left the positive-definite cone");
    return pt;
}

Vec Chart::coords(const ChartVector& v) const {
    check_vector(v);
    Vec c(dim());
    const int t = tri();
    c.segment(0, t) = v.dx.packed();
    c.segment(t, t) = v.dy.packed();
    c.segment(2 * t, n) = v.dq.transpose();
    c.segment(2 * t + n, n) = v.dp.transpose();
    if (extended) c[dim() - 1] = *v.dkappa;
    return c;
}

ChartVector Chart::vector(const Vec& c) const {
    if (c.size() != dim()) throw DimensionMismatch("chart coordinates have wrong length");
    const int t = tri();
    ChartVector v;
    v.dx = SymMat(n);
    v.dx.packed() = c.segment(0, t);
    v.dy = SymMat(n);
    v.dy.packed() = c.segment(t, t);
    v.dq = c.segment(2 * t, n).transpose();
    v.dp = c.segment(2 * t + n, n).transpose();
    if (extended) v.dkappa = c[dim() - 1];
    return v;
}

ChartVector Chart::basis(int a) const {
    Vec c = Vec::Zero(dim());
    c[a] = 1.0;
    return vector(c);
}

std::string Chart::coordinate_name(int a) const {
    const int t = tri();
    auto pair_name = [&](const char* base, int k) {
        for (int i = 0; i < n; ++i)
            for (int j = i; j < n; ++j)
                if (k-- == 0)
                    return std::string(base) + std::to_string(i + 1) + std::to_string(j + 1);
        return std::string(base) + "?";
    };
    if (a < t) return pair_name("x", a);
    if (a < 2 * t) return pair_name("y", a - t);
    if (a < 2 * t + n) return "q" + std::to_string(a - 2 * t + 1);
    if (a < 2 * t + 2 * n) return "p" + std::to_string(a - 2 * t - n + 1);
    return "kappa";
}

void Chart::check_point(const ExtendedJacobiPoint& pt) const {
    if (pt.n() != n) throw DimensionMismatch("point dimension does not match chart");
    if (pt.extended() != extended)
        throw DimensionMismatch("point and chart disagree on the kappa coordinate");
}

void Chart::check_vector(const ChartVector& v) const {
    if (v.n() != n || v.dq.size() != n || v.dp.size() != n)
        throw DimensionMismatch("vector dimension does not match chart");
    if (v.extended() != extended)
        throw DimensionMismatch("vector and chart disagree on the kappa coordinate");
}

}  // namespace sjg
