#include "sjg/matlib.hpp"

#include <Eigen/Cholesky>
#include <cmath>

namespace sjg {

SymMat SymMat::from_dense(const Mat& m) {
    if (m.rows() != m.cols()) throw DimensionMismatch("SymMat::from_dense: matrix not square");
    SymMat s(static_cast<int>(m.rows()));
    for (int i = 0; i < s.n_; ++i)
        for (int j = i; j < s.n_; ++j) s.set(i, j, m(i, j));
    return s;
}

Mat SymMat::dense() const {
    Mat m(n_, n_);
    for (int i = 0; i < n_; ++i)
        for (int j = 0; j < n_; ++j) m(i, j) = (*this)(i, j);
    return m;
}

LuFactors lu_factor(const Mat& a) {
    if (a.rows() != a.cols()) throw DimensionMismatch("lu_factor: matrix not square");
    const int n = static_cast<int>(a.rows());
    LuFactors f;
    f.lu = a;
    f.perm.resize(n);
    for (int i = 0; i < n; ++i) f.perm[i] = i;
    f.pivot_threshold = 1e-14 * max_abs(a);
    f.min_pivot = std::numeric_limits<double>::infinity();
    f.max_pivot = 0.0;

    for (int k = 0; k < n; ++k) {
        int piv = k;
        double best = std::abs(f.lu(k, k));
        for (int i = k + 1; i < n; ++i) {
            const double v = std::abs(f.lu(i, k));
            if (v > best) { best = v; piv = i; }
        }
        if (piv != k) {
            f.lu.row(piv).swap(f.lu.row(k));
            std::swap(f.perm[piv], f.perm[k]);
            f.parity = -f.parity;
        }
        const double pivot = f.lu(k, k);
        if (std::abs(pivot) <= f.pivot_threshold) {
            f.singular = true;
            f.min_pivot = 0.0;
            return f;
        }
        f.min_pivot = std::min(f.min_pivot, std::abs(pivot));
        f.max_pivot = std::max(f.max_pivot, std::abs(pivot));
        for (int i = k + 1; i < n; ++i) {
            f.lu(i, k) /= pivot;
            for (int j = k + 1; j < n; ++j) f.lu(i, j) -= f.lu(i, k) * f.lu(k, j);
        }
    }
    return f;
}

Mat lu_solve(const LuFactors& f, const Mat& rhs) {
    if (f.singular) throw SingularMatrix("lu_solve: matrix is singular at the pivot threshold");
    const int n = f.n();
    if (rhs.rows() != n) throw DimensionMismatch("lu_solve: rhs row count mismatch");
    Mat x(n, rhs.cols());
    for (int i = 0; i < n; ++i) x.row(i) = rhs.row(f.perm[i]);
    // forward substitution (unit lower)
    for (int k = 0; k < n; ++k)
        for (int i = k + 1; i < n; ++i) x.row(i) -= f.lu(i, k) * x.row(k);
    // back substitution (upper)
    for (int k = n - 1; k >= 0; --k) {
        x.row(k) /= f.lu(k, k);
        for (int i = 0; i < k; ++i) x.row(i) -= f.lu(i, k) * x.row(k);
    }
    return x;
}

Mat lu_inverse(const Mat& a) {
    const LuFactors f = lu_factor(a);
    if (f.singular) throw SingularMatrix("lu_inverse: matrix is singular at the pivot threshold");
    return lu_solve(f, Mat::Identity(a.rows(), a.cols()));
}

double lu_det(const Mat& a) {
    const LuFactors f = lu_factor(a);
    if (f.singular) return 0.0;
    double d = static_cast<double>(f.parity);
    for (int k = 0; k < f.n(); ++k) d *= f.lu(k, k);
    return d;
}

Mat kron(const Mat& a, const Mat& b) {
    const int m = static_cast<int>(a.rows()), n = static_cast<int>(a.cols());
    const int p = static_cast<int>(b.rows()), q = static_cast<int>(b.cols());
    Mat out(m * p, n * q);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < p; ++k)
                for (int l = 0; l < q; ++l) out(i * p + k, j * q + l) = a(i, j) * b(k, l);
    return out;
}

Mat mat_exp(const Mat& a) {
    if (a.rows() != a.cols()) throw DimensionMismatch("mat_exp: matrix not square");
    const int n = static_cast<int>(a.rows());
    const double norm = max_abs(a) * n;  // cheap upper bound on the 1-norm
    int s = 0;
    while (norm / std::pow(2.0, s) > 0.5) ++s;
    const Mat as = a / std::pow(2.0, s);

    // fixed-order Taylor series; order 18 leaves truncation far below 1e-16
    Mat result = Mat::Identity(n, n);
    Mat term = Mat::Identity(n, n);
    for (int k = 1; k <= 18; ++k) {
        term = (term * as / static_cast<double>(k)).eval();
        result += term;
    }
    for (int k = 0; k < s; ++k) result = (result * result).eval();
    return result;
}

double identity_residual(const Mat& m) {
    return max_abs(m - Mat::Identity(m.rows(), m.cols()));
}

bool is_positive_definite(const Mat& m) {
    if (m.rows() != m.cols()) return false;
    if (max_abs(m - Mat(m.transpose())) > 1e-9 * std::max(1.0, max_abs(m))) return false;
    Eigen::LLT<Mat> llt(m);
    return llt.info() == Eigen::Success;
}

}  // namespace sjg
