#pragma once

#include <functional>
#include <vector>

#include "sjg/metric.hpp"

namespace sjg {

// Chart metric as a function of chart coordinates; may throw PositivityLoss.
using MetricFn = std::function<Mat(const Vec&)>;

// Christoffel symbols of both kinds at a point, from central differences of
// the chart metric.
//
//   [ij,k]    = (d g_ki / d c_j + d g_jk / d c_i - d g_ji / d c_k) / 2
//   Gamma^m_ij = [ij,k] g^km
//
// Symmetric in i <-> j by construction. The stored compatibility residual is
// max_k |d_k g_ij - Gamma^l_ki g_lj - Gamma^l_kj g_il|.
class ChristoffelTable {
public:
    ChristoffelTable(int dim) : d_(dim), first_(dim * dim * dim), second_(dim * dim * dim) {}

    int dim() const { return d_; }
    double first(int i, int j, int k) const { return first_[(i * d_ + j) * d_ + k]; }
    double second(int i, int j, int m) const { return second_[(i * d_ + j) * d_ + m]; }
    double& first(int i, int j, int k) { return first_[(i * d_ + j) * d_ + k]; }
    double& second(int i, int j, int m) { return second_[(i * d_ + j) * d_ + m]; }
    double max_compat_residual = 0.0;

private:
    int d_;
    std::vector<double> first_, second_;
};

struct FdOptions {
    double h = 1e-4;           // central-difference step
    bool richardson = false;   // extrapolate with steps h and h/2
};

ChristoffelTable christoffels(const MetricFn& metric, const Vec& at, const FdOptions& opts = {});

// Convenience overload on the canonical chart; h must lie in [1e-6, 1e-3].
ChristoffelTable christoffels(const MetricParams& params, const ExtendedJacobiPoint& pt,
                              const Chart& chart, double h = 1e-4, bool richardson = false);

// MetricFn for the canonical chart metric.
MetricFn chart_metric_fn(const MetricParams& params, const Chart& chart);

// ---- geodesics ----

struct GeodesicState {
    Vec position;  // chart coordinates
    Vec velocity;
    double time = 0.0;
    double speed = 0.0;  // ds2(position, velocity), recorded per step
};

struct GeodesicOptions {
    double christoffel_h = 1e-3;
    bool richardson = true;       // keeps speed drift at the 1e-12 level
    double reject_drift = 1e-3;   // one-step relative speed drift that aborts
};

// Classic fourth-order one-step integration of
//   position' = velocity,  velocity'_m = -Gamma^m_ij v^i v^j,
// with the symbols re-evaluated at every stage point. Returns all states,
// including the start. Throws PositivityLoss when the trajectory leaves the
// chart and StepRejected when the speed drifts more than reject_drift in one
// step.
std::vector<GeodesicState> geodesic_rk4(const MetricParams& params, const GeodesicState& start,
                                        const Chart& chart, double dt, int steps,
                                        const GeodesicOptions& opts = {});

// max |speed(t)/speed(0) - 1| over a trajectory
double max_speed_drift(const std::vector<GeodesicState>& trajectory);

}  // namespace sjg
