#pragma once

#include <vector>

#include "sjg/types.hpp"

namespace sjg {

// ---- packed symmetric matrix ----
//
// Upper triangle (i <= j) in row-major order. Expanding to dense and
// re-packing is the identity by construction.
class SymMat {
public:
    SymMat() = default;
    explicit SymMat(int n) : n_(n), data_(Vec::Zero(n * (n + 1) / 2)) {}

    static SymMat from_dense(const Mat& m);        // uses the upper triangle
    static SymMat zero(int n) { return SymMat(n); }

    int n() const { return n_; }
    int packed_size() const { return n_ * (n_ + 1) / 2; }

    double operator()(int i, int j) const { return data_[index(i, j)]; }
    void set(int i, int j, double v) { data_[index(i, j)] = v; }

    const Vec& packed() const { return data_; }
    Vec& packed() { return data_; }

    Mat dense() const;

private:
    int index(int i, int j) const {
        if (i > j) std::swap(i, j);
        // row-major upper triangle offset
        return i * n_ - i * (i - 1) / 2 + (j - i);
    }

    int n_ = 0;
    Vec data_;
};

// ---- pivoted LU, the numerical oracle behind every closed-form check ----

struct LuFactors {
    Mat lu;                      // combined unit-lower / upper factors
    std::vector<int> perm;       // row permutation applied to the input
    int parity = 1;              // sign of the permutation
    bool singular = false;       // a pivot fell below the threshold
    double pivot_threshold = 0;  // 1e-14 * max|a_ij| of the input
    double min_pivot = 0;
    double max_pivot = 0;

    int n() const { return static_cast<int>(lu.rows()); }
    // ratio of largest to smallest pivot magnitude; condition-number proxy
    double pivot_ratio() const { return min_pivot > 0 ? max_pivot / min_pivot : 0.0; }
};

LuFactors lu_factor(const Mat& a);

// Solve a x = rhs from the factorization. Throws SingularMatrix if singular.
Mat lu_solve(const LuFactors& f, const Mat& rhs);

// a^-1 via pivoted LU. Throws SingularMatrix when a pivot magnitude falls
// below 1e-14 * max|a_ij|.
Mat lu_inverse(const Mat& a);

// det(a) via pivoted LU with permutation parity; returns 0 for singular input.
double lu_det(const Mat& a);

// ---- small dense helpers ----

// Kronecker product: (a (x) b)[i*p+k, j*q+l] = a(i,j) b(k,l) for b of shape p x q.
Mat kron(const Mat& a, const Mat& b);

// Matrix exponential by scaling-and-squaring with a fixed-order Taylor series.
Mat mat_exp(const Mat& a);

inline double max_abs(const Mat& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

// max entry error of m against the identity
double identity_residual(const Mat& m);

// Positive definiteness of a symmetric matrix (Cholesky succeeds).
bool is_positive_definite(const Mat& m);

}  // namespace sjg
