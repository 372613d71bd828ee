#pragma once

#include <array>

#include "sjg/metric.hpp"

namespace sjg {

// ---- generic partitioned inverse ----

struct Partition2x2 {
    Mat h1, h2, h3, h4;  // [[h1, h2], [h3, h4]], h1 m x m, h4 k x k
};

// Assembles the inverse from Schur complements:
//   [[ (h1 - h2 h4^-1 h3)^-1,  -h1^-1 h2 h^4        ],
//    [ -h^4 h3 h1^-1,           (h4 - h3 h1^-1 h2)^-1 ]]
// Throws SingularBlock naming which of the four inversions failed.
Mat schur_inverse(const Partition2x2& h);

// ---- closed inverse of the non-extended metric blocks ----

struct BaseMetricInverse {
    Mat xy_kron_inv;  // alpha^-1 y (x) y, inverse of both x- and y-sector blocks
    Mat qp_inv;       // [[gamma^-1 (y + x y^-1 x), -gamma^-1 x y^-1],
                      //  [-gamma^-1 y^-1 x,          gamma^-1 y^-1  ]]
};

BaseMetricInverse base_metric_inverse(const MetricParams& params, const ExtendedJacobiPoint& pt);

// Closed 2 x 2 inverse of the extended (q, p) corner at n = 1:
//   1/gamma * 1/(gamma y + delta[(p x + q)^2 + y^2 p^2]) *
//   [[gamma(x^2 + y^2) + delta q^2 y,  -gamma x + delta p q y],
//    [-gamma x + delta p q y,           gamma + delta p^2 y  ]]
// Reduces to the non-extended closed inverse as delta -> 0.
Mat qp_inverse_extended_n1(const MetricParams& params, double x, double y, double p, double q);

// ---- blockwise inverse of the (q, p, kappa) block ----

struct QpkBlockInverse {
    // inverse of the (q, p) corner A11, blockwise
    Mat a11, a12, a21, a22;
    Mat a22_simplified;  // independent closed route for a22; must agree with a22
    // blocks of the full (2n+1) inverse
    Mat b11, b12, b21;
    double b22 = 0.0;
    double b22_display = 0.0;  // delta^-1 [1 - delta(p a11 p^t - q a21 p^t - p a12 q^t + q a22 q^t)]^-1
    Mat assembled;             // the full (2n+1) x (2n+1) inverse
};

// Works in either coupling convention; the input block is qpk_block(...) with
// the same convention. In the metric convention b11 equals the closed
// non-extended inverse block of BaseMetricInverse::qp_inv exactly.
QpkBlockInverse invert_qpk_by_blocks(const MetricParams& params, const Mat& x, const Mat& y,
                                     const RowVec& p, const RowVec& q, Coupling coupling);

// ---- n = 1 determinant identity ----

// LU determinant of the assembled 3 x 3 (q, p, kappa) block; equals
// gamma^2 delta identically.
double qpk_det_n1(const MetricParams& params, double x, double y, double p, double q);

// ---- n = 2 closed determinant and closed inverse (closed_form coupling) ----

struct N2Invariants {
    double I2;  // p2 q1 - p1 q2
    double A;   // 2[(x11 - x22) y12 - x12 (y11 - y22)]
    double B;   // 4 x12^2 + (x11 - x22)^2 + y11^2 + y22^2 + 2 y12^2
    double D;   // det y
    double N;   // gamma delta / (det * D) with det the closed determinant
};

N2Invariants n2_invariants(const MetricParams& params, const Mat& x, const Mat& y,
                           const RowVec& p, const RowVec& q);

// Quartic closed form:
//   delta [gamma^4 - gamma^3 (delta I2 / D) A - gamma^2 ((delta I2)^2 / D) B
//          - gamma ((delta I2)^3 / D) A + (delta I2)^4].
// Valid for the closed_form coupling; the metric-coupling block has constant
// determinant gamma^4 delta instead.
double closed_coupling_det_n2(const MetricParams& params, const Mat& x, const Mat& y,
                              const RowVec& p, const RowVec& q);

// The 5 x 5 (q1, q2, p1, p2, kappa) block in the closed_form coupling.
Mat closed_coupling_block_n2(const MetricParams& params, const Mat& x, const Mat& y,
                             const RowVec& p, const RowVec& q);

// Ladder coefficients (c0..c4) of entry (i, j) of the closed inverse, as
// multipliers of the basis
//   { D gamma^3 / delta, gamma^2, gamma (delta I2), (delta I2)^2,
//     D (delta I2)^3 / gamma }.
// c0 is nonzero only for (4,4); c4 only in the kappa row/column.
std::array<double, 5> closed_inverse_ladder_n2(const Mat& x, const Mat& y, const RowVec& p,
                                               const RowVec& q, int i, int j);

// Test hook: negate one entry (and its mirror) of the closed inverse.
struct SignFlip {
    int i = -1, j = -1;
    bool active() const { return i >= 0 && j >= 0; }
};

// Closed inverse of closed_coupling_block_n2, entry by entry from the ladder.
// Throws NearSingular when |det| <= 1e-12 (gamma^4 delta + (delta |I2|)^4 delta).
Mat closed_coupling_inverse_n2(const MetricParams& params, const Mat& x, const Mat& y,
                               const RowVec& p, const RowVec& q, SignFlip flip = {});

}  // namespace sjg
