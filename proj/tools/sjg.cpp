// Command-line front end: evaluate metric quantities at a supplied point,
// invert or differentiate them, integrate geodesics, and run the full
// verification suite.
//
// Exit codes: 0 ok, 1 verify failure, 2 validation, 3 near-singular,
// 4 method unavailable, 5 positivity loss, 6 step rejected.

#include <CLI11.hpp>
#include <fstream>
#include <iostream>

#include "sjg/verify.hpp"

namespace {

using namespace sjg;

constexpr int kExitOk = 0;
constexpr int kExitVerifyFailed = 1;
constexpr int kExitValidation = 2;
constexpr int kExitNearSingular = 3;
constexpr int kExitMethodUnavailable = 4;
constexpr int kExitPositivityLoss = 5;
constexpr int kExitStepRejected = 6;

PointDocument read_input(const std::string& path) {
    if (path.empty() || path == "-") return load_point_document(std::cin);
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open input file: " + path);
    return load_point_document(in);
}

void emit(const std::string& path, const Json& doc) {
    if (path.empty() || path == "-") {
        write_document(std::cout, doc);
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ValidationError("cannot open output file: " + path);
    write_document(out, doc);
}

Json document_header(const char* command, const PointDocument& doc) {
    Json j;
    j["command"] = command;
    j["n"] = doc.n();
    j["extended"] = doc.extended();
    return j;
}

// The (q, p, kappa) sector object served by `inverse` and `det`: the coupling
// block in the convention under which the closed determinant and closed
// inverse formulas hold. The full chart metric's corresponding sub-block
// differs from it by a transpose of the rank-one dq-dp coupling whenever p
// and q are not parallel (see README).
Mat sector_block(const PointDocument& doc) {
    const Mat x = doc.point.base.x.dense();
    const Mat y = doc.point.base.y.dense();
    if (!doc.extended()) return base_qp_block(doc.params, x, y);
    return qpk_block(doc.params, x, y, doc.point.p, doc.point.q, Coupling::closed_form);
}

int cmd_metric(const PointDocument& doc, const std::string& block, const std::string& out_path) {
    Json out = document_header("metric", doc);
    if (block == "qpk") {
        if (!doc.extended()) throw ValidationError("--block qpk requires an extended point");
        out["block"] = "qpk";
        out["matrix"] = to_json(sector_block(doc));
    } else {
        const Chart chart{doc.n(), doc.extended()};
        out["block"] = "full";
        out["matrix"] = to_json(metric_matrix(doc.params, doc.point, chart));
    }
    emit(out_path, out);
    return kExitOk;
}

int cmd_inverse(const PointDocument& doc, const std::string& method, const std::string& out_path) {
    const Mat fwd = sector_block(doc);
    const int n = doc.n();
    Mat inv;
    if (method == "lu") {
        inv = lu_inverse(fwd);
    } else if (method == "schur") {
        const int m = static_cast<int>(fwd.rows()) / 2;
        const int k = static_cast<int>(fwd.rows()) - m;
        inv = schur_inverse({fwd.topLeftCorner(m, m), fwd.topRightCorner(m, k),
                             fwd.bottomLeftCorner(k, m), fwd.bottomRightCorner(k, k)});
    } else if (method == "closed") {
        const Mat x = doc.point.base.x.dense();
        const Mat y = doc.point.base.y.dense();
        if (!doc.extended()) {
            inv = base_metric_inverse(doc.params, doc.point).qp_inv;
        } else if (n == 1) {
            inv = invert_qpk_by_blocks(doc.params, x, y, doc.point.p, doc.point.q,
                                       Coupling::closed_form)
                      .assembled;
        } else if (n == 2) {
            inv = closed_coupling_inverse_n2(doc.params, x, y, doc.point.p, doc.point.q);
        } else {
            throw MethodUnavailable("closed inverse is available for n = 1, n = 2, or any "
                                    "non-extended point");
        }
    } else {
        throw ValidationError("unknown method: " + method);
    }
    Json out = document_header("inverse", doc);
    out["method"] = method;
    out["matrix"] = to_json(inv);
    out["residual"] = identity_residual(inv * fwd);
    emit(out_path, out);
    return kExitOk;
}

int cmd_det(const PointDocument& doc, const std::string& out_path) {
    const Mat fwd = sector_block(doc);
    const double lu = lu_det(fwd);
    Json out = document_header("det", doc);
    out["lu"] = lu;
    if (doc.extended() && doc.n() == 1) {
        const double closed = doc.params.gamma * doc.params.gamma * doc.params.delta;
        out["closed"] = closed;
        out["rel_diff"] = std::abs(lu / closed - 1.0);
    } else if (doc.extended() && doc.n() == 2) {
        const double closed = closed_coupling_det_n2(doc.params, doc.point.base.x.dense(),
                                                     doc.point.base.y.dense(), doc.point.p,
                                                     doc.point.q);
        out["closed"] = closed;
        if (closed != 0.0) out["rel_diff"] = std::abs(lu / closed - 1.0);
    }
    emit(out_path, out);
    return kExitOk;
}

int cmd_christoffel(const PointDocument& doc, double h, const std::string& out_path) {
    const Chart chart{doc.n(), doc.extended()};
    const ChristoffelTable tab = christoffels(doc.params, doc.point, chart, h);
    Json out = document_header("christoffel", doc);
    out["h"] = h;
    out["max_compat_residual"] = tab.max_compat_residual;
    Json entries = Json::array();
    for (int m = 0; m < tab.dim(); ++m)
        for (int i = 0; i < tab.dim(); ++i)
            for (int j = i; j < tab.dim(); ++j) {
                const double v = tab.second(i, j, m);
                if (std::abs(v) <= 1e-9) continue;
                Json e;
                e["m"] = chart.coordinate_name(m);
                e["i"] = chart.coordinate_name(i);
                e["j"] = chart.coordinate_name(j);
                e["value"] = v;
                entries.push_back(std::move(e));
            }
    out["entries"] = std::move(entries);
    emit(out_path, out);
    return kExitOk;
}

int cmd_geodesic(const PointDocument& doc, double dt, int steps, const std::string& out_path) {
    const Chart chart{doc.n(), doc.extended()};
    if (!doc.velocity)
        throw ValidationError("geodesic input needs a 'velocity' array of chart dimension");
    if (doc.velocity->size() != chart.dim())
        throw ValidationError("'velocity' must have the chart dimension " +
                              std::to_string(chart.dim()));
    GeodesicState start;
    start.position = chart.coords(doc.point);
    start.velocity = *doc.velocity;
    const auto traj = geodesic_rk4(doc.params, start, chart, dt, steps);

    Json out = document_header("geodesic", doc);
    out["dt"] = dt;
    out["steps"] = steps;
    out["max_rel_speed_drift"] = max_speed_drift(traj);
    Json samples = Json::array();
    const int stride = std::max(1, steps / 100);  // keep documents reasonable
    for (std::size_t i = 0; i < traj.size(); i += (i + stride < traj.size() ? stride : 1)) {
        const auto& st = traj[i];
        Json e;
        e["t"] = st.time;
        e["position"] = to_json(st.position);
        e["velocity"] = to_json(st.velocity);
        e["speed"] = st.speed;
        samples.push_back(std::move(e));
        if (i + 1 == traj.size()) break;
    }
    out["samples"] = std::move(samples);
    emit(out_path, out);
    return kExitOk;
}

int cmd_verify(const VerifyOptions& opts, const std::string& out_path) {
    const VerifyReport report = run_verify(opts);
    for (const auto& c : report.checks) {
        std::cerr << (c.passed ? "[PASS] " : "[FAIL] ") << c.name
                  << "  residual=" << c.max_residual << "  tol=" << c.tolerance << "  ("
                  << c.samples << " samples, " << static_cast<int>(c.millis) << " ms)\n";
    }
    emit(out_path, report_to_json(report));
    return report.all_passed() ? kExitOk : kExitVerifyFailed;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"invariant metrics, closed-form inverses, and geodesics on the extended "
                 "Siegel upper half space"};
    app.require_subcommand(1);

    std::string input, output, block = "full", method = "lu";
    double h = 1e-4, dt = 1e-3;
    int steps = 1000;
    VerifyOptions vopts;
    std::vector<int> ns;
    std::vector<int> flip;

    auto add_io = [&](CLI::App* sub) {
        sub->add_option("--input", input, "input document (default: stdin)");
        sub->add_option("--output", output, "output document (default: stdout)");
    };

    CLI::App* metric = app.add_subcommand("metric", "chart metric matrix at a point");
    add_io(metric);
    metric->add_option("--block", block, "'full' or 'qpk'")
        ->check(CLI::IsMember({"full", "qpk"}));

    CLI::App* inverse = app.add_subcommand("inverse", "inverse of the (q,p[,kappa]) block");
    add_io(inverse);
    inverse->add_option("--method", method, "lu, schur, or closed")
        ->check(CLI::IsMember({"lu", "schur", "closed"}));

    CLI::App* det = app.add_subcommand("det", "determinant of the (q,p[,kappa]) block");
    add_io(det);

    CLI::App* chris = app.add_subcommand("christoffel", "nonzero connection coefficients");
    chris->set_help_flag("--help", "print help");  // frees -h for the step option
    add_io(chris);
    chris->add_option("--h", h, "central-difference step")->check(CLI::Range(1e-6, 1e-3));

    CLI::App* geo = app.add_subcommand("geodesic", "integrate the geodesic flow");
    add_io(geo);
    geo->add_option("--dt", dt, "time step");
    geo->add_option("--steps", steps, "step count")->check(CLI::PositiveNumber);

    CLI::App* verify = app.add_subcommand("verify", "run every identity suite");
    verify->add_option("--output", output, "report document (default: stdout)");
    verify->add_option("--n", ns, "space dimensions to sweep (default: 1 2)");
    verify->add_option("--samples", vopts.samples, "sample count per check");
    verify->add_option("--seed", vopts.seed, "random seed");
    verify
        ->add_option("--inject-flip", flip,
                     "self-test hook: sign-flip entry (i, j) of the closed n=2 inverse")
        ->expected(2);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : kExitValidation;
    }

    try {
        if (metric->parsed()) return cmd_metric(read_input(input), block, output);
        if (inverse->parsed()) return cmd_inverse(read_input(input), method, output);
        if (det->parsed()) return cmd_det(read_input(input), output);
        if (chris->parsed()) return cmd_christoffel(read_input(input), h, output);
        if (geo->parsed()) return cmd_geodesic(read_input(input), dt, steps, output);
        if (verify->parsed()) {
            if (!ns.empty()) vopts.ns = ns;
            if (flip.size() == 2) vopts.prop_flip = {flip[0], flip[1]};
            return cmd_verify(vopts, output);
        }
    } catch (const DimensionMismatch& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const ValidationError& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const NearSingular& e) {
        std::cerr << "near-singular: " << e.what() << "\n";
        return kExitNearSingular;
    } catch (const SingularMatrix& e) {
        std::cerr << "near-singular: " << e.what() << "\n";
        return kExitNearSingular;
    } catch (const SingularDenominator& e) {
        std::cerr << "near-singular: " << e.what() << "\n";
        return kExitNearSingular;
    } catch (const SingularBlock& e) {
        std::cerr << "near-singular: " << e.what() << "\n";
        return kExitNearSingular;
    } catch (const MethodUnavailable& e) {
        std::cerr << "method unavailable: " << e.what() << "\n";
        return kExitMethodUnavailable;
    } catch (const PositivityLoss& e) {
        std::cerr << "positivity loss: " << e.what() << "\n";
        return kExitPositivityLoss;
    } catch (const StepRejected& e) {
        std::cerr << "step rejected: " << e.what() << "\n";
        return kExitStepRejected;
    }
    return kExitOk;
}
