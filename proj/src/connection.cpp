#include "sjg/connection.hpp"

namespace sjg {

namespace {

// dg[k] = d g / d c_k by central differences
std::vector<Mat> metric_gradient(const MetricFn& metric, const Vec& at, double h) {
    const int d = static_cast<int>(at.size());
    std::vector<Mat> dg(d);
    for (int k = 0; k < d; ++k) {
        Vec cp = at, cm = at;
        cp[k] += h;
        cm[k] -= h;
        dg[k] = (metric(cp) - metric(cm)) / (2.0 * h);
    }
    return dg;
}

}  // namespace

ChristoffelTable christoffels(const MetricFn& metric, const Vec& at, const FdOptions& opts) {
    const int d = static_cast<int>(at.size());
    std::vector<Mat> dg = metric_gradient(metric, at, opts.h);
    if (opts.richardson) {
        const std::vector<Mat> dg2 = metric_gradient(metric, at, opts.h / 2.0);
        for (int k = 0; k < d; ++k) dg[k] = (4.0 * dg2[k] - dg[k]) / 3.0;
    }
    const Mat g = metric(at);
    const Mat gi = lu_inverse(g);

    ChristoffelTable table(d);
    for (int i = 0; i < d; ++i)
        for (int j = i; j < d; ++j)
            for (int k = 0; k < d; ++k) {
                const double v = 0.5 * (dg[j](k, i) + dg[i](j, k) - dg[k](j, i));
                table.first(i, j, k) = v;
                table.first(j, i, k) = v;
            }
    for (int i = 0; i < d; ++i)
        for (int j = i; j < d; ++j)
            for (int m = 0; m < d; ++m) {
                double v = 0.0;
                for (int k = 0; k < d; ++k) v += table.first(i, j, k) * gi(k, m);
                table.second(i, j, m) = v;
                table.second(j, i, m) = v;
            }

    double worst = 0.0;
    for (int k = 0; k < d; ++k) {
        // residual_k[i][j] = d_k g_ij - Gamma^l_ki g_lj - Gamma^l_kj g_il
        Mat s(d, d);
        for (int i = 0; i < d; ++i)
            for (int l = 0; l < d; ++l) s(i, l) = table.second(k, i, l);
        const Mat sg = s * g;
        const Mat res = dg[k] - sg - Mat(sg.transpose());
        worst = std::max(worst, max_abs(res));
    }
    table.max_compat_residual = worst;
    return table;
}

MetricFn chart_metric_fn(const MetricParams& params, const Chart& chart) {
    return [params, chart](const Vec& c) { return metric_matrix(params, chart.point(c), chart); };
}

ChristoffelTable christoffels(const MetricParams& params, const ExtendedJacobiPoint& pt,
                              const Chart& chart, double h, bool richardson) {
    if (!(h >= 1e-6 && h <= 1e-3))
        throw ValidationError("christoffel step must lie in [1e-6, 1e-3]");
    chart.check_point(pt);
    return christoffels(chart_metric_fn(params, chart), chart.coords(pt), {h, richardson});
}

std::vector<GeodesicState> geodesic_rk4(const MetricParams& params, const GeodesicState& start,
                                        const Chart& chart, double dt, int steps,
                                        const GeodesicOptions& opts) {
    const int d = chart.dim();
    if (start.position.size() != d || start.velocity.size() != d)
        throw DimensionMismatch("geodesic state does not match chart dimension");
    const MetricFn metric = chart_metric_fn(params, chart);
    const FdOptions fd{opts.christoffel_h, opts.richardson};

    auto accel = [&](const Vec& pos, const Vec& vel) {
        const ChristoffelTable gamma = christoffels(metric, pos, fd);
        Vec a = Vec::Zero(d);
        for (int m = 0; m < d; ++m) {
            double s = 0.0;
            for (int i = 0; i < d; ++i)
                for (int j = 0; j < d; ++j) s += gamma.second(i, j, m) * vel[i] * vel[j];
            a[m] = -s;
        }
        return a;
    };
    auto speed_at = [&](const Vec& pos, const Vec& vel) -> double {
        return (vel.transpose() * metric(pos) * vel)(0, 0);
    };

    std::vector<GeodesicState> traj;
    traj.reserve(steps + 1);
    Vec pos = start.position, vel = start.velocity;
    double t = start.time;
    double speed = speed_at(pos, vel);
    traj.push_back({pos, vel, t, speed});

    for (int s = 0; s < steps; ++s) {
        const Vec k1p = vel, k1v = accel(pos, vel);
        const Vec k2p = vel + 0.5 * dt * k1v, k2v = accel(pos + 0.5 * dt * k1p, vel + 0.5 * dt * k1v);
        const Vec k3p = vel + 0.5 * dt * k2v, k3v = accel(pos + 0.5 * dt * k2p, vel + 0.5 * dt * k2v);
        const Vec k4p = vel + dt * k3v, k4v = accel(pos + dt * k3p, vel + dt * k3v);
        pos += dt / 6.0 * (k1p + 2.0 * k2p + 2.0 * k3p + k4p);
        vel += dt / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
        t += dt;
        const double next = speed_at(pos, vel);
        if (std::abs(next - speed) > opts.reject_drift * std::max(1.0, std::abs(speed)))
            throw StepRejected("speed drift exceeded the one-step limit");
        speed = next;
        traj.push_back({pos, vel, t, speed});
    }
    return traj;
}

double max_speed_drift(const std::vector<GeodesicState>& trajectory) {
    if (trajectory.empty()) return 0.0;
    const double s0 = trajectory.front().speed;
    double worst = 0.0;
    for (const auto& st : trajectory)
        worst = std::max(worst, std::abs(st.speed / s0 - 1.0));
    return worst;
}

}  // namespace sjg
