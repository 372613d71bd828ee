#pragma once

#include <string>

#include "sjg/group.hpp"

namespace sjg {

// Tangent vector in the canonical chart.
struct ChartVector {
    SymMat dx, dy;
    RowVec dq, dp;
    std::optional<double> dkappa;

    int n() const { return dx.n(); }
    bool extended() const { return dkappa.has_value(); }
};

// Canonical chart: coordinates ordered as
//   (x_ij, i <= j row-major), (y_ij, i <= j row-major), q_1..q_n, p_1..p_n, kappa.
// Dimension n(n+3) plain, n(n+3)+1 extended.
struct Chart {
    int n = 1;
    bool extended = false;

    int tri() const { return n * (n + 1) / 2; }
    int dim() const { return n * (n + 3) + (extended ? 1 : 0); }

    Vec coords(const ExtendedJacobiPoint& pt) const;
    // Throws PositivityLoss when the decoded y is not positive definite.
    ExtendedJacobiPoint point(const Vec& coords) const;

    Vec coords(const ChartVector& v) const;
    ChartVector vector(const Vec& coords) const;

    // Basis tangent vector; for an off-diagonal x or y coordinate the
    // symmetric perturbation carries 1 at (i,j) and (j,i).
    ChartVector basis(int a) const;

    std::string coordinate_name(int a) const;

    void check_point(const ExtendedJacobiPoint& pt) const;
    void check_vector(const ChartVector& v) const;
};

}  // namespace sjg
