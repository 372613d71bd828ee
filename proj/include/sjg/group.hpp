#pragma once

#include "sjg/matlib.hpp"
#include "sjg/types.hpp"

namespace sjg {

// ---- complex n x n arithmetic as pairs of real matrices ----
//
// Inversion goes through the 2n x 2n real embedding [[re,-im],[im,re]] and
// the LU oracle, so a single inversion code path serves everything.
struct CMat {
    Mat re, im;

    int n() const { return static_cast<int>(re.rows()); }
    CMat operator*(const CMat& o) const { return {re * o.re - im * o.im, re * o.im + im * o.re}; }
    CMat transpose() const { return {re.transpose(), im.transpose()}; }
};

struct CRowVec {
    RowVec re, im;

    CRowVec operator*(const CMat& m) const { return {re * m.re - im * m.im, re * m.im + im * m.re}; }
    CRowVec operator+(const CRowVec& o) const { return {re + o.re, im + o.im}; }
};

// Inverse via the real embedding; throws SingularDenominator at the pivot threshold.
CMat cmat_inverse(const CMat& m);

// ---- points ----

struct SiegelPoint {
    SymMat x, y;  // v = x + i y, y positive definite

    int n() const { return x.n(); }
};

struct ExtendedJacobiPoint {
    SiegelPoint base;
    RowVec p, q;
    std::optional<double> kappa;  // absent -> point of the non-extended space

    int n() const { return base.n(); }
    bool extended() const { return kappa.has_value(); }
};

// Throws ValidationError when y is not positive definite or shapes disagree.
void validate(const SiegelPoint& pt);
void validate(const ExtendedJacobiPoint& pt);

// ---- group elements ----
//
// g = (M, (lambda, mu), kappa) with M = [[a,b],[c,d]] symplectic.
struct JacobiGroupElement {
    Mat a, b, c, d;
    RowVec lambda, mu;
    double kappa = 0.0;

    int n() const { return static_cast<int>(a.rows()); }
    Mat as_matrix() const;

    static JacobiGroupElement identity(int n);
};

// J = [[0, I], [-I, 0]]
Mat symplectic_form(int n);

// max entry of M^t J M - J
double symplectic_residual(const Mat& m);

// M = exp(J S) with S random symmetric, entries uniform in [-scale, scale];
// lambda, mu, kappa uniform in the same range.
JacobiGroupElement random_symplectic(int n, double scale, Rng& rng);

// Random test points: y = A A^t + 0.1 I keeps positive definiteness with margin.
SiegelPoint random_siegel_point(int n, Rng& rng, double scale = 1.0);
ExtendedJacobiPoint random_point(int n, bool extended, Rng& rng, double scale = 1.0);

// (p, q) = (lambda, mu) M^-1 using the exact symplectic inverse
// M^-1 = [[d^t, -b^t], [-c^t, a^t]].
void pq_offsets(const JacobiGroupElement& g, RowVec& p_out, RowVec& q_out);

// v1 = (a v' + b)(c v' + d)^-1, re-symmetrized against rounding drift.
// Throws SingularDenominator when c v' + d is singular.
SiegelPoint act_siegel(const JacobiGroupElement& g, const SiegelPoint& pt);

// Full action: (x1, y1) as above, (p1, q1) = (p + p'd^t - q'c^t, q - p'b^t + q'a^t),
// kappa1 = kappa + kappa' + lambda q'^t - mu p'^t.
ExtendedJacobiPoint act_extended(const JacobiGroupElement& g, const ExtendedJacobiPoint& pt);

// Group law: act(compose(g2, g1), pt) == act(g2, act(g1, pt)).
JacobiGroupElement compose(const JacobiGroupElement& g2, const JacobiGroupElement& g1);

// v = x + i y, u = p v + q.
void complex_coords(const ExtendedJacobiPoint& pt, CMat& v_out, CRowVec& u_out);

// u1 = (u' + lambda v' + mu)(c v' + d)^-1, the direct transform of u.
CRowVec transform_u_direct(const JacobiGroupElement& g, const CMat& v, const CRowVec& u);

}  // namespace sjg
