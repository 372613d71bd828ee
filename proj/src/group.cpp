#include "sjg/group.hpp"

namespace sjg {

CMat cmat_inverse(const CMat& m) {
    const int n = m.n();
    Mat emb(2 * n, 2 * n);
    emb.topLeftCorner(n, n) = m.re;
    emb.topRightCorner(n, n) = -m.im;
    emb.bottomLeftCorner(n, n) = m.im;
    emb.bottomRightCorner(n, n) = m.re;
    const LuFactors f = lu_factor(emb);
    if (f.singular) throw SingularDenominator("complex matrix is singular at the pivot threshold");
    const Mat inv = lu_solve(f, Mat::Identity(2 * n, 2 * n));
    return {inv.topLeftCorner(n, n), inv.bottomLeftCorner(n, n)};
}

void validate(const SiegelPoint& pt) {
    if (pt.x.n() != pt.y.n()) throw DimensionMismatch("x and y dimensions differ");
    if (!pt.x.packed().allFinite() || !pt.y.packed().allFinite())
        throw ValidationError("point has non-finite entries");
    if (!is_positive_definite(pt.y.dense())) throw ValidationError("y is not positive definite");
}

void validate(const ExtendedJacobiPoint& pt) {
    validate(pt.base);
    if (pt.p.size() != pt.n() || pt.q.size() != pt.n())
        throw DimensionMismatch("p, q must be row vectors of length n");
    if (!pt.p.allFinite() || !pt.q.allFinite() ||
        (pt.kappa && !std::isfinite(*pt.kappa)))
        throw ValidationError("point has non-finite entries");
}

Mat JacobiGroupElement::as_matrix() const {
    const int m = n();
    Mat M(2 * m, 2 * m);
    M.topLeftCorner(m, m) = a;
    M.topRightCorner(m, m) = b;
    M.bottomLeftCorner(m, m) = c;
    M.bottomRightCorner(m, m) = d;
    return M;
}

JacobiGroupElement JacobiGroupElement::identity(int n) {
    JacobiGroupElement g;
    g.a = Mat::Identity(n, n);
    g.b = Mat::Zero(n, n);
    g.c = Mat::Zero(n, n);
    g.d = Mat::Identity(n, n);
    g.lambda = RowVec::Zero(n);
    g.mu = RowVec::Zero(n);
    g.kappa = 0.0;
    return g;
}

Mat symplectic_form(int n) {
    Mat j = Mat::Zero(2 * n, 2 * n);
    j.topRightCorner(n, n) = Mat::Identity(n, n);
    j.bottomLeftCorner(n, n) = -Mat::Identity(n, n);
    return j;
}

double symplectic_residual(const Mat& m) {
    const int n = static_cast<int>(m.rows()) / 2;
    const Mat j = symplectic_form(n);
    return max_abs(m.transpose() * j * m - j);
}

static JacobiGroupElement from_matrix(const Mat& m, const RowVec& lambda, const RowVec& mu,
                                      double kappa) {
    const int n = static_cast<int>(m.rows()) / 2;
    JacobiGroupElement g;
    g.a = m.topLeftCorner(n, n);
    g.b = m.topRightCorner(n, n);
    g.c = m.bottomLeftCorner(n, n);
    g.d = m.bottomRightCorner(n, n);
    g.lambda = lambda;
    g.mu = mu;
    g.kappa = kappa;
    return g;
}

JacobiGroupElement random_symplectic(int n, double scale, Rng& rng) {
    if (!(scale > 0.0) || scale > 2.0)
        throw ValidationError("random_symplectic: scale must lie in (0, 2]");
    Mat s(2 * n, 2 * n);
    for (int i = 0; i < 2 * n; ++i) {
        s(i, i) = rng.uniform(-scale, scale);
        for (int j = i + 1; j < 2 * n; ++j) s(i, j) = s(j, i) = rng.uniform(-scale, scale);
    }
    const Mat m = mat_exp(symplectic_form(n) * s);
    RowVec lambda(n), mu(n);
    for (int i = 0; i < n; ++i) lambda[i] = rng.uniform(-scale, scale);
    for (int i = 0; i < n; ++i) mu[i] = rng.uniform(-scale, scale);
    return from_matrix(m, lambda, mu, rng.uniform(-scale, scale));
}

SiegelPoint random_siegel_point(int n, Rng& rng, double scale) {
    SymMat x(n);
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) x.set(i, j, rng.uniform(-scale, scale));
    Mat a(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) a(i, j) = rng.uniform(-1.0, 1.0);
    const Mat y = a * a.transpose() + 0.1 * Mat::Identity(n, n);
    return {x, SymMat::from_dense(y)};
}

ExtendedJacobiPoint random_point(int n, bool extended, Rng& rng, double scale) {
    ExtendedJacobiPoint pt;
    pt.base = random_siegel_point(n, rng, scale);
    pt.p = RowVec(n);
    pt.q = RowVec(n);
    for (int i = 0; i < n; ++i) pt.p[i] = rng.uniform(-scale, scale);
    for (int i = 0; i < n; ++i) pt.q[i] = rng.uniform(-scale, scale);
    if (extended) pt.kappa = rng.uniform(-scale, scale);
    return pt;
}

void pq_offsets(const JacobiGroupElement& g, RowVec& p_out, RowVec& q_out) {
    p_out = g.lambda * g.d.transpose() - g.mu * g.c.transpose();
    q_out = -g.lambda * g.b.transpose() + g.mu * g.a.transpose();
}

SiegelPoint act_siegel(const JacobiGroupElement& g, const SiegelPoint& pt) {
    if (g.n() != pt.n()) throw DimensionMismatch("group element and point dimensions differ");
    const CMat v{pt.x.dense(), pt.y.dense()};
    const CMat num{g.a * v.re + g.b, g.a * v.im};
    const CMat den{g.c * v.re + g.d, g.c * v.im};
    CMat v1 = num * cmat_inverse(den);
    // re-symmetrize: rounding drift is ~1e-12 per action and would accumulate
    v1.re = 0.5 * (v1.re + Mat(v1.re.transpose()));
    v1.im = 0.5 * (v1.im + Mat(v1.im.transpose()));
    return {SymMat::from_dense(v1.re), SymMat::from_dense(v1.im)};
}

ExtendedJacobiPoint act_extended(const JacobiGroupElement& g, const ExtendedJacobiPoint& pt) {
    ExtendedJacobiPoint out;
    out.base = act_siegel(g, pt.base);
    RowVec pe, qe;
    pq_offsets(g, pe, qe);
    out.p = pe + pt.p * g.d.transpose() - pt.q * g.c.transpose();
    out.q = qe - pt.p * g.b.transpose() + pt.q * g.a.transpose();
    if (pt.kappa) {
        out.kappa = g.kappa + *pt.kappa + (g.lambda * pt.q.transpose())(0, 0) -
                    (g.mu * pt.p.transpose())(0, 0);
    }
    return out;
}

JacobiGroupElement compose(const JacobiGroupElement& g2, const JacobiGroupElement& g1) {
    const int n = g1.n();
    if (g2.n() != n) throw DimensionMismatch("composed elements have different dimensions");
    const Mat m3 = g2.as_matrix() * g1.as_matrix();
    // (lambda, mu)_3 = (lambda, mu)_2 M_1 + (lambda, mu)_1
    RowVec x2(2 * n);
    x2 << g2.lambda, g2.mu;
    const RowVec x2m = x2 * g1.as_matrix();
    const RowVec lambda3 = x2m.head(n) + g1.lambda;
    const RowVec mu3 = x2m.tail(n) + g1.mu;
    RowVec pe1, qe1;
    pq_offsets(g1, pe1, qe1);
    const double kappa3 = g2.kappa + g1.kappa + (g2.lambda * qe1.transpose())(0, 0) -
                          (g2.mu * pe1.transpose())(0, 0);
    return from_matrix(m3, lambda3, mu3, kappa3);
}

void complex_coords(const ExtendedJacobiPoint& pt, CMat& v_out, CRowVec& u_out) {
    v_out = {pt.base.x.dense(), pt.base.y.dense()};
    u_out = {pt.p * v_out.re + pt.q, pt.p * v_out.im};
}

CRowVec transform_u_direct(const JacobiGroupElement& g, const CMat& v, const CRowVec& u) {
    const CMat den{g.c * v.re + g.d, g.c * v.im};
    const CRowVec num{u.re + g.lambda * v.re + g.mu, u.im + g.lambda * v.im};
    return num * cmat_inverse(den);
}

}  // namespace sjg
