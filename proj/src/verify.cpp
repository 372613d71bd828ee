#include "sjg/verify.hpp"

#include <chrono>
#include <cmath>

namespace sjg {

bool VerifyReport::all_passed() const {
    for (const auto& c : checks)
        if (!c.passed) return false;
    return !checks.empty();
}

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

CheckResult finish(const std::string& name, int samples, double residual, double tol,
                   Clock::time_point t0) {
    return {name, samples, residual, tol, residual <= tol, elapsed_ms(t0)};
}

MetricParams random_params(Rng& rng, double lo = 0.1, double hi = 10.0) {
    return {rng.uniform(lo, hi), rng.uniform(lo, hi), rng.uniform(lo, hi)};
}

}  // namespace

namespace checks {

CheckResult det_n1_identity(std::uint64_t seed, int param_draws, int points_per_draw, double tol) {
    const auto t0 = Clock::now();
    Rng rng(seed);
    double worst = 0.0;
    for (int d = 0; d < param_draws; ++d) {
        const MetricParams params{1.0, rng.uniform(0.1, 10.0), rng.uniform(0.1, 10.0)};
        for (int s = 0; s < points_per_draw; ++s) {
            const ExtendedJacobiPoint pt = random_point(1, true, rng);
            const double det = qpk_det_n1(params, pt.base.x(0, 0), pt.base.y(0, 0), pt.p[0],
                                          pt.q[0]);
            worst = std::max(worst,
                             std::abs(det / (params.gamma * params.gamma * params.delta) - 1.0));
        }
    }
    return finish("det3_n1_identity", param_draws * points_per_draw, worst, tol, t0);
}

CheckResult det_n2_closed_vs_lu(std::uint64_t seed, int points, double tol) {
    const auto t0 = Clock::now();
    Rng rng(seed);
    double worst = 0.0;
    int used = 0;
    while (used < points) {
        const MetricParams params = random_params(rng, 0.3, 3.0);
        const ExtendedJacobiPoint pt = random_point(2, true, rng);
        const Mat x = pt.base.x.dense(), y = pt.base.y.dense();
        const double closed = closed_coupling_det_n2(params, x, y, pt.p, pt.q);
        const double I2 = pt.p[1] * pt.q[0] - pt.p[0] * pt.q[1];
        const double scale = std::pow(params.gamma, 4) * params.delta +
                             std::pow(params.delta * std::abs(I2), 4) * params.delta;
        if (std::abs(closed) <= 1e-6 * scale) continue;  // stay away from the zero locus
        const double lu = lu_det(closed_coupling_block_n2(params, x, y, pt.p, pt.q));
        worst = std::max(worst, std::abs(closed / lu - 1.0));
        ++used;
    }
    return finish("det5_n2_closed_vs_lu", points, worst, tol, t0);
}

CheckResult closed_inverse_product_n2(std::uint64_t seed, int points, double tol, SignFlip flip) {
    const auto t0 = Clock::now();
    Rng rng(seed);
    double worst = 0.0;
    int used = 0;
    while (used < points) {
        const MetricParams params = random_params(rng, 0.3, 3.0);
        const ExtendedJacobiPoint pt = random_point(2, true, rng);
        const Mat x = pt.base.x.dense(), y = pt.base.y.dense();
        Mat inv;
        try {
            inv = closed_coupling_inverse_n2(params, x, y, pt.p, pt.q, flip);
        } catch (const NearSingular&) {
            continue;
        }
        const Mat fwd = closed_coupling_block_n2(params, x, y, pt.p, pt.q);
        worst = std::max(worst, identity_residual(inv * fwd));
        ++used;
    }
    return finish("closed_inverse_product_n2", points, worst, tol, t0);
}

CheckResult closed_inverse_cross_block(std::uint64_t seed, int points, double tol) {
    const auto t0 = Clock::now();
    Rng rng(seed);
    double worst = 0.0;
    int used = 0;
    while (used < points) {
        const MetricParams params = random_params(rng, 0.3, 3.0);
        const ExtendedJacobiPoint pt = random_point(2, true, rng);
        const Mat x = pt.base.x.dense(), y = pt.base.y.dense();
        Mat inv;
        try {
            inv = closed_coupling_inverse_n2(params, x, y, pt.p, pt.q);
        } catch (const NearSingular&) {
            continue;
        }
        const QpkBlockInverse blocks =
            invert_qpk_by_blocks(params, x, y, pt.p, pt.q, Coupling::closed_form);
        // (q1, p1) entry: row 1, column 3 of the inverse in 1-based indexing
        worst = std::max(worst, std::abs(inv(0, 2) - blocks.b11(0, 2)));
        ++used;
    }
    return finish("closed_inverse_cross_block_13", points, worst, tol, t0);
}

CheckResult base_inverse_blocks(std::uint64_t seed, int n, int points, double tol) {
    const auto t0 = Clock::now();
    Rng rng(seed);
    double worst = 0.0;
    for (int s = 0; s < points; ++s) {
        const MetricParams params = random_params(rng, 0.3, 3.0);
        const ExtendedJacobiPoint pt = random_point(n, false, rng);
        const BaseMetricInverse inv = base_metric_inverse(params, pt);
        const Mat x = pt.base.x.dense(), y = pt.base.y.dense();
        worst = std::max(worst, identity_residual(inv.xy_kron_inv * xy_kron_block(params, y)));
        worst = std::max(worst, identity_residual(inv.qp_inv * base_qp_block(params, x, y)));
    }
    return finish("base_inverse_blocks_n" + std::to_string(n), points, worst, tol, t0);
}

CheckResult qpk_blockwise_vs_lu(std::uint64_t seed, int n, int points, double tol,
                                Coupling coupling) {
    const auto t0 = Clock::now();
    Rng rng(seed);
    double worst = 0.0;
    for (int s = 0; s < points; ++s) {
        const MetricParams params = random_params(rng, 0.3, 3.0);
        const ExtendedJacobiPoint pt = random_point(n, true, rng);
        const Mat x = pt.base.x.dense(), y = pt.base.y.dense();
        const QpkBlockInverse blocks = invert_qpk_by_blocks(params, x, y, pt.p, pt.q, coupling);
        const Mat oracle = lu_inverse(qpk_block(params, x, y, pt.p, pt.q, coupling));
        worst = std::max(worst, max_abs(blocks.assembled - oracle));
    }
    const char* tag = coupling == Coupling::metric ? "metric" : "closed";
    return finish("qpk_blockwise_vs_lu_n" + std::to_string(n) + "_" + tag, points, worst, tol, t0);
}

CheckResult a22_two_routes(std::uint64_t seed, int n, int points, double tol, Coupling coupling) {
    const auto t0 = Clock::now();
    Rng rng(seed);
    double worst = 0.0;
    for (int s = 0; s < points; ++s) {
        const MetricParams params = random_params(rng, 0.3, 3.0);
        const ExtendedJacobiPoint pt = random_point(n, true, rng);
        const QpkBlockInverse blocks = invert_qpk_by_blocks(params, pt.base.x.dense(),
                                                            pt.base.y.dense(), pt.p, pt.q,
                                                            coupling);
        worst = std::max(worst, max_abs(blocks.a22 - blocks.a22_simplified));
    }
    const char* tag = coupling == Coupling::metric ? "metric" : "closed";
    return finish("a22_two_routes_n" + std::to_string(n) + "_" + tag, points, worst, tol, t0);
}

CheckResult extended_corner_n1(std::uint64_t seed, int points, double tol) {
    const auto t0 = Clock::now();
    Rng rng(seed);
    double worst = 0.0;
    for (int s = 0; s < points; ++s) {
        const MetricParams params = random_params(rng, 0.3, 3.0);
        const ExtendedJacobiPoint pt = random_point(1, true, rng);
        const double x = pt.base.x(0, 0), y = pt.base.y(0, 0), p = pt.p[0], q = pt.q[0];
        const Mat corner = qp_inverse_extended_n1(params, x, y, p, q);
        const Mat fwd = qpk_block(params, pt.base.x.dense(), pt.base.y.dense(), pt.p, pt.q,
                                  Coupling::metric)
                            .topLeftCorner(2, 2);
        worst = std::max(worst, identity_residual(corner * fwd));
    }
    return finish("extended_corner_n1_vs_lu", points, worst, tol, t0);
}

namespace {

double invariance_residual(std::uint64_t seed, int n, int triples, bool for_lambda_r,
                           double& worst_out) {
    Rng rng(seed);
    double worst = 0.0;
    for (int s = 0; s < triples; ++s) {
        const MetricParams params = random_params(rng, 0.5, 2.0);
        const JacobiGroupElement g = random_symplectic(n, 0.4, rng);
        const ExtendedJacobiPoint pt = random_point(n, true, rng, 0.8);
        const Chart chart{n, true};
        Vec vc(chart.dim());
        for (int i = 0; i < chart.dim(); ++i) vc[i] = rng.uniform(-1.0, 1.0);
        const ChartVector v = chart.vector(vc);
        const ExtendedJacobiPoint image = act_extended(g, pt);
        const ChartVector w = pushforward(g, pt, v);
        if (for_lambda_r) {
            const double before = lambda_r(pt, v);
            const double after = lambda_r(image, w);
            worst = std::max(worst, std::abs(after - before) / std::max(1.0, std::abs(before)));
        } else {
            const double before = ds2(params, pt, v);
            const double after = ds2(params, image, w);
            worst = std::max(worst, std::abs(after - before) / std::max(1.0, std::abs(before)));
        }
    }
    worst_out = worst;
    return worst;
}

}  // namespace

CheckResult ds2_invariance(std::uint64_t seed, int n, int triples, double tol) {
    const auto t0 = Clock::now();
    double worst = 0.0;
    invariance_residual(seed, n, triples, false, worst);
    return finish("ds2_invariance_n" + std::to_string(n), triples, worst, tol, t0);
}

CheckResult lambda_r_invariance(std::uint64_t seed, int n, int triples, double tol) {
    const auto t0 = Clock::now();
    double worst = 0.0;
    invariance_residual(seed, n, triples, true, worst);
    return finish("lambda_r_invariance_n" + std::to_string(n), triples, worst, tol, t0);
}

CheckResult christoffel_goldens(std::uint64_t seed, int points, double tol) {
    const auto t0 = Clock::now();
    Rng rng(seed);
    double worst = 0.0;
    for (int s = 0; s < points; ++s) {
        const MetricParams params = random_params(rng, 0.5, 2.0);
        // Gamma^x_xy = -1/y on the plain chart
        {
            ExtendedJacobiPoint pt = random_point(1, false, rng);
            pt.base.y.set(0, 0, rng.uniform(0.5, 2.0));
            const Chart chart{1, false};
            const ChristoffelTable tab = christoffels(params, pt, chart, 1e-4);
            worst = std::max(worst, std::abs(tab.second(0, 1, 0) - (-1.0 / pt.base.y(0, 0))));
        }
        // Gamma^p_pp = 2 (delta/gamma) x y^-1 q on the extended chart
        {
            ExtendedJacobiPoint pt = random_point(1, true, rng);
            pt.base.y.set(0, 0, rng.uniform(0.5, 2.0));
            const Chart chart{1, true};
            const ChristoffelTable tab = christoffels(params, pt, chart, 1e-4);
            const double expected = 2.0 * (params.delta / params.gamma) * pt.base.x(0, 0) *
                                    pt.q[0] / pt.base.y(0, 0);
            worst = std::max(worst, std::abs(tab.second(3, 3, 3) - expected));
        }
    }
    return finish("christoffel_goldens_n1", 2 * points, worst, tol, t0);
}

CheckResult geodesic_drift(double tol) {
    const auto t0 = Clock::now();
    const MetricParams params{1.0, 1.0, 1.0};
    const Chart chart{1, true};
    GeodesicState start;
    start.position = (Vec(5) << 0.2, 1.0, 0.1, -0.3, 0.05).finished();
    start.velocity = (Vec(5) << 0.3, 0.5, -0.2, 0.4, 0.1).finished();
    const auto traj = geodesic_rk4(params, start, chart, 1e-3, 1000);
    return finish("geodesic_speed_drift", 1000, max_speed_drift(traj), tol, t0);
}

CheckResult geodesic_vertical_fixture(double tol) {
    const auto t0 = Clock::now();
    const MetricParams params{1.0, 1.0, 1.0};
    const Chart chart{1, false};
    GeodesicState start;
    start.position = (Vec(4) << 0.0, 1.0, 0.0, 0.0).finished();
    start.velocity = (Vec(4) << 0.0, 1.0, 0.0, 0.0).finished();
    const auto traj = geodesic_rk4(params, start, chart, 1e-3, 1000);
    // exponential vertical flow: y(t) = e^t, x fixed
    const double err = std::abs(traj.back().position[1] - std::exp(1.0)) +
                       std::abs(traj.back().position[0]);
    return finish("geodesic_vertical_fixture", 1000, err, tol, t0);
}

CheckResult schur_vs_lu(std::uint64_t seed, int points, double tol) {
    const auto t0 = Clock::now();
    Rng rng(seed);
    double worst = 0.0;
    int used = 0;
    while (used < points) {
        const int m = 1 + static_cast<int>(rng.raw() % 4);
        const int k = 1 + static_cast<int>(rng.raw() % 4);
        Mat h(m + k, m + k);
        for (int i = 0; i < m + k; ++i)
            for (int j = 0; j < m + k; ++j) h(i, j) = rng.uniform(-1.0, 1.0);
        h += 2.0 * Mat::Identity(m + k, m + k);  // keep the partitions invertible
        const LuFactors f = lu_factor(h);
        if (f.singular || f.pivot_ratio() > 1e4) continue;
        Partition2x2 part{h.topLeftCorner(m, m), h.topRightCorner(m, k), h.bottomLeftCorner(k, m),
                          h.bottomRightCorner(k, k)};
        Mat via_schur;
        try {
            via_schur = schur_inverse(part);
        } catch (const SingularBlock&) {
            continue;  // a sub-block may be ill-posed even when h is fine
        }
        worst = std::max(worst, max_abs(via_schur - lu_inverse(h)));
        ++used;
    }
    return finish("schur_vs_lu", points, worst, tol, t0);
}

CheckResult kron_inverse_identity(std::uint64_t seed, int points, double tol) {
    const auto t0 = Clock::now();
    Rng rng(seed);
    double worst = 0.0;
    int used = 0;
    while (used < points) {
        Mat a(2, 2), b(2, 2);
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) {
                a(i, j) = rng.uniform(-1.0, 1.0);
                b(i, j) = rng.uniform(-1.0, 1.0);
            }
        if (std::abs(lu_det(a)) < 0.1 || std::abs(lu_det(b)) < 0.1) continue;
        worst = std::max(worst, max_abs(lu_inverse(kron(a, b)) - kron(lu_inverse(a), lu_inverse(b))));
        ++used;
    }
    return finish("kron_inverse_identity", points, worst, tol, t0);
}

CheckResult metric_block_agreement(std::uint64_t seed, int n, int points, double tol) {
    const auto t0 = Clock::now();
    Rng rng(seed);
    double worst = 0.0;
    const Chart chart{n, true};
    for (int s = 0; s < points; ++s) {
        const MetricParams params = random_params(rng, 0.5, 2.0);
        const ExtendedJacobiPoint pt = random_point(n, true, rng);
        const Mat g = metric_matrix(params, pt, chart);
        const Mat block = qpk_block(params, pt.base.x.dense(), pt.base.y.dense(), pt.p, pt.q,
                                    Coupling::metric);
        const int t = chart.tri();
        worst = std::max(worst,
                         max_abs(g.bottomRightCorner(2 * n + 1, 2 * n + 1) - block));
        // quadratic-form consistency at a random vector
        Vec vc(chart.dim());
        for (int i = 0; i < chart.dim(); ++i) vc[i] = rng.uniform(-1.0, 1.0);
        const double via_matrix = (vc.transpose() * g * vc)(0, 0);
        const double direct = ds2(params, pt, chart.vector(vc));
        worst = std::max(worst, std::abs(via_matrix - direct) / std::max(1.0, std::abs(direct)));
        (void)t;
    }
    return finish("metric_block_agreement_n" + std::to_string(n), points, worst, tol, t0);
}

}  // namespace checks

VerifyReport run_verify(const VerifyOptions& opts) {
    VerifyReport report;
    report.seed = opts.seed;
    report.samples = opts.samples;
    const std::uint64_t seed = opts.seed;
    const int s = opts.samples;

    report.checks.push_back(checks::det_n1_identity(seed + 1, 10, std::max(1, s / 10), 1e-10));
    for (int n : opts.ns) {
        report.checks.push_back(checks::base_inverse_blocks(seed + 2 + n, n, s, 1e-10));
        report.checks.push_back(
            checks::qpk_blockwise_vs_lu(seed + 6 + n, n, s, 1e-9, Coupling::metric));
        report.checks.push_back(
            checks::qpk_blockwise_vs_lu(seed + 10 + n, n, s, 1e-9, Coupling::closed_form));
        report.checks.push_back(
            checks::a22_two_routes(seed + 14 + n, n, s, 1e-9, Coupling::metric));
        report.checks.push_back(
            checks::a22_two_routes(seed + 18 + n, n, s, 1e-9, Coupling::closed_form));
        report.checks.push_back(checks::metric_block_agreement(seed + 22 + n, n, s, 1e-12));
        report.checks.push_back(checks::ds2_invariance(seed + 26 + n, n, s, 1e-6));
        report.checks.push_back(checks::lambda_r_invariance(seed + 30 + n, n, s, 1e-6));
    }
    report.checks.push_back(checks::extended_corner_n1(seed + 40, s, 1e-10));
    report.checks.push_back(checks::det_n2_closed_vs_lu(seed + 41, s, 1e-9));
    report.checks.push_back(
        checks::closed_inverse_product_n2(seed + 42, s, 1e-8, opts.prop_flip));
    report.checks.push_back(checks::closed_inverse_cross_block(seed + 43, s, 1e-8));
    report.checks.push_back(checks::christoffel_goldens(seed + 44, std::min(s, 20), 1e-5));
    report.checks.push_back(checks::geodesic_drift(1e-8));
    report.checks.push_back(checks::geodesic_vertical_fixture(1e-6));
    report.checks.push_back(checks::schur_vs_lu(seed + 45, s, 1e-10));
    report.checks.push_back(checks::kron_inverse_identity(seed + 46, s, 1e-10));
    return report;
}

Json report_to_json(const VerifyReport& report) {
    Json doc;
    doc["command"] = "verify";
    doc["seed"] = report.seed;
    doc["samples"] = report.samples;
    doc["all_passed"] = report.all_passed();
    Json arr = Json::array();
    for (const auto& c : report.checks) {
        Json e;
        e["name"] = c.name;
        e["samples"] = c.samples;
        e["max_residual"] = c.max_residual;
        e["tolerance"] = c.tolerance;
        e["passed"] = c.passed;
        arr.push_back(std::move(e));
    }
    doc["checks"] = std::move(arr);
    return doc;
}

}  // namespace sjg
