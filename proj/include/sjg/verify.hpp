#pragma once

#include <cstdint>
#include <vector>

#include "sjg/connection.hpp"
#include "sjg/inverse.hpp"
#include "sjg/io.hpp"

namespace sjg {

struct CheckResult {
    std::string name;
    int samples = 0;
    double max_residual = 0.0;
    double tolerance = 0.0;
    bool passed = false;
    double millis = 0.0;  // wall time; excluded from serialized reports
};

struct VerifyReport {
    std::vector<CheckResult> checks;
    std::uint64_t seed = 0;
    int samples = 0;

    bool all_passed() const;
};

struct VerifyOptions {
    std::vector<int> ns{1, 2};
    int samples = 100;
    std::uint64_t seed = 0;
    SignFlip prop_flip{};  // test hook: sign-flip one closed-inverse entry
};

// Every identity suite in one pass; deterministic given the seed.
VerifyReport run_verify(const VerifyOptions& opts);

// Report document without wall times, so identical seeds give identical bytes.
Json report_to_json(const VerifyReport& report);

// The individual checks, reused by the acceptance suite at its own sample
// counts and tolerances.
namespace checks {

// |det3x3 / (gamma^2 delta) - 1| over random points and parameter draws
CheckResult det_n1_identity(std::uint64_t seed, int param_draws, int points_per_draw, double tol);
// closed n = 2 determinant vs LU determinant, relative
CheckResult det_n2_closed_vs_lu(std::uint64_t seed, int points, double tol);
// closed inverse times forward block vs identity, max entry
CheckResult closed_inverse_product_n2(std::uint64_t seed, int points, double tol,
                                      SignFlip flip = {});
// closed-inverse (q1, p1) entry vs the blockwise-inverse b11 entry
CheckResult closed_inverse_cross_block(std::uint64_t seed, int points, double tol);
// closed non-extended inverse blocks times forward blocks vs identity
CheckResult base_inverse_blocks(std::uint64_t seed, int n, int points, double tol);
// blockwise (q,p,kappa) inverse vs the LU oracle
CheckResult qpk_blockwise_vs_lu(std::uint64_t seed, int n, int points, double tol,
                                Coupling coupling);
// the two a22 routes against each other
CheckResult a22_two_routes(std::uint64_t seed, int n, int points, double tol, Coupling coupling);
// closed extended n = 1 corner vs LU, and its delta -> 0 limit
CheckResult extended_corner_n1(std::uint64_t seed, int points, double tol);
// |ds2(g pt, g_* v) - ds2(pt, v)| / max(1, |ds2|)
CheckResult ds2_invariance(std::uint64_t seed, int n, int triples, double tol);
// same for the 1-form
CheckResult lambda_r_invariance(std::uint64_t seed, int n, int triples, double tol);
// finite-difference symbols against the two closed n = 1 values
CheckResult christoffel_goldens(std::uint64_t seed, int points, double tol);
// relative speed drift over unit time on the extended n = 1 chart
CheckResult geodesic_drift(double tol);
// vertical trajectory reaches y(1) = e
CheckResult geodesic_vertical_fixture(double tol);
// partitioned inverse vs LU on random conformal partitions up to 8 x 8
CheckResult schur_vs_lu(std::uint64_t seed, int points, double tol);
// (A (x) B)^-1 vs A^-1 (x) B^-1
CheckResult kron_inverse_identity(std::uint64_t seed, int points, double tol);
// quadratic form vs polarized matrix, and closed block agreement
CheckResult metric_block_agreement(std::uint64_t seed, int n, int points, double tol);

}  // namespace checks

}  // namespace sjg
