#pragma once

#include "sjg/chart.hpp"

namespace sjg {

// Orientation of the rank-one delta coupling between dq and dp in the
// (q, p, kappa) block. The two differ by a transpose of that coupling and
// coincide whenever p and q are parallel (always at n = 1).
//
//   metric      : entry (q_i, p_j) carries -delta p_i q_j; the block equals
//                 the polarized chart metric of the invariant line element.
//   closed_form : entry (q_i, p_j) carries -delta q_i p_j; the convention in
//                 which the n = 2 closed determinant and closed inverse hold.
enum class Coupling { metric, closed_form };

// Invariant line element evaluated on a tangent vector:
//   alpha tr[(y^-1 dx)^2 + (y^-1 dy)^2]
//   + gamma [dp (x y^-1 x + y) dp^t + dq y^-1 dq^t + 2 dp x y^-1 dq^t]
//   + delta (dkappa - p dq^t + q dp^t)^2          (extended points only)
// Strictly positive for nonzero v.
double ds2(const MetricParams& params, const ExtendedJacobiPoint& pt, const ChartVector& v);

// The invariant 1-form: dkappa - p dq^t + q dp^t.
double lambda_r(const ExtendedJacobiPoint& pt, const ChartVector& v);

// Chart metric by exact polarization of ds2 over the chart basis:
//   G[a,b] = (ds2(e_a + e_b) - ds2(e_a) - ds2(e_b)) / 2.
// This is the single source of truth for the chart metric; the closed-form
// blocks below are checked against it.
Mat metric_matrix(const MetricParams& params, const ExtendedJacobiPoint& pt, const Chart& chart);

// Closed-form (q, p) block of the non-extended metric:
//   [[gamma y^-1,    gamma y^-1 x        ],
//    [gamma x y^-1,  gamma (y + x y^-1 x)]]
Mat base_qp_block(const MetricParams& params, const Mat& x, const Mat& y);

// Closed-form (q, p, kappa) block of the extended metric, in either coupling
// convention. Row/column order (q_1..q_n, p_1..p_n, kappa).
Mat qpk_block(const MetricParams& params, const Mat& x, const Mat& y, const RowVec& p,
              const RowVec& q, Coupling coupling);

// alpha y^-1 (x) y^-1, the x- and y-sector block on the full (redundant)
// vectorization of dx.
Mat xy_kron_block(const MetricParams& params, const Mat& y);

// Checks alpha vec(dx)^t (y^-1 (x) y^-1) vec(dx) == alpha tr[(y^-1 dx)^2]
// over random symmetric dx; returns the max absolute discrepancy.
double full_vec_block_check(const MetricParams& params, const ExtendedJacobiPoint& pt,
                            int samples, Rng& rng);

// Central-difference pushforward of a tangent vector under the group action:
//   (act(pt + h v) - act(pt - h v)) / (2h) in chart coordinates.
ChartVector pushforward(const JacobiGroupElement& g, const ExtendedJacobiPoint& pt,
                        const ChartVector& v, double h = 1e-6);

}  // namespace sjg
