#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>

namespace sjg {

// Dense row-major storage throughout; sizes stay tiny (n <= 4 in practice).
using Mat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vec = Eigen::VectorXd;
using RowVec = Eigen::Matrix<double, 1, Eigen::Dynamic>;

// ---- error taxonomy (mapped to CLI exit codes in tools/) ----

struct ValidationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct DimensionMismatch : ValidationError {
    using ValidationError::ValidationError;
};
struct SingularMatrix : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct SingularDenominator : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct SingularBlock : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct NearSingular : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct MethodUnavailable : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct PositivityLoss : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct StepRejected : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// ---- metric parameters ----

struct MetricParams {
    double alpha = 1.0;
    double gamma = 1.0;
    double delta = 1.0;
};

inline void validate(const MetricParams& p) {
    if (!(p.alpha > 0.0) || !(p.gamma > 0.0) || !(p.delta > 0.0))
        throw ValidationError("metric parameters alpha, gamma, delta must be positive");
}

// ---- deterministic RNG ----
//
// Uniform doubles are produced from raw mt19937_64 output so that streams are
// reproducible independent of the standard library's distribution internals.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    double uniform(double lo, double hi) {
        const double u = static_cast<double>(eng_() >> 11) * 0x1.0p-53;
        return lo + (hi - lo) * u;
    }

    std::uint64_t raw() { return eng_(); }

private:
    std::mt19937_64 eng_;
};

}  // namespace sjg
