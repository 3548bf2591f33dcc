#pragma once

#include <cmath>
#include <span>
#include <vector>

#include "frontier/errors.hpp"
#include "frontier/grid.hpp"

namespace frontier {

struct RobinData {
  double left;   // u(0) - sqrt(eps) u'(0) = left
  double right;  // u(1) + sqrt(eps) u'(1) = right
};

/**
 * eps*d*u'' on a uniform grid with Robin ends, as a tridiagonal matrix plus an
 * affine vector: (L u)_i = lower_i u_{i-1} + diag_i u_i + upper_i u_{i+1} + affine_i.
 *
 * The end rows come from eliminating ghost values u_{-1}, u_n with the centered
 * difference form of the Robin conditions, so the affine part is non-zero only
 * at i = 0 and i = n-1.
 */
struct RobinOperator {
  std::vector<double> lower, diag, upper, affine;

  std::size_t size() const { return diag.size(); }

  std::vector<double> apply(std::span<const double> u) const {
    const std::size_t n = size();
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) {
      double v = diag[i] * u[i] + affine[i];
      if (i > 0) v += lower[i] * u[i - 1];
      if (i + 1 < n) v += upper[i] * u[i + 1];
      out[i] = v;
    }
    return out;
  }

  /// (L u)_i only; cheaper than apply() when a single row is needed.
  double apply_row(std::span<const double> u, std::size_t i) const {
    double v = diag[i] * u[i] + affine[i];
    if (i > 0) v += lower[i] * u[i - 1];
    if (i + 1 < size()) v += upper[i] * u[i + 1];
    return v;
  }
};

inline RobinOperator assemble_robin_operator(const Grid1D& grid, double eps, double d,
                                             RobinData bc) {
  if (!(eps > 0.0)) throw DomainError("Robin operator needs eps > 0");
  if (!(d > 0.0)) throw DomainError("diffusivity must be positive");
  const std::size_t n = grid.n;
  const double h = grid.h;
  const double k = eps * d / (h * h);
  const double r = 2.0 * h / std::sqrt(eps);

  RobinOperator op{std::vector<double>(n, k), std::vector<double>(n, -2.0 * k),
                   std::vector<double>(n, k), std::vector<double>(n, 0.0)};
  op.lower[0] = 0.0;
  op.upper[0] = 2.0 * k;
  op.diag[0] = -(2.0 + r) * k;
  op.affine[0] = r * k * bc.left;

  op.upper[n - 1] = 0.0;
  op.lower[n - 1] = 2.0 * k;
  op.diag[n - 1] = -(2.0 + r) * k;
  op.affine[n - 1] = r * k * bc.right;
  return op;
}

/// Robin defects at both ends using second-order one-sided derivatives.
inline std::pair<double, double> robin_boundary_residuals(const Grid1D& grid, double eps,
                                                          std::span<const double> u,
                                                          RobinData bc) {
  const std::size_t n = grid.n;
  const double h = grid.h, se = std::sqrt(eps);
  const double du0 = (-3.0 * u[0] + 4.0 * u[1] - u[2]) / (2.0 * h);
  const double du1 = (3.0 * u[n - 1] - 4.0 * u[n - 2] + u[n - 3]) / (2.0 * h);
  return {u[0] - se * du0 - bc.left, u[n - 1] + se * du1 - bc.right};
}

/// Boundary data of the A and B equations: A enters from the left, B from the right.
inline RobinData robin_data_A(const CompetitionModel& m) { return {m.A_max(), 0.0}; }
inline RobinData robin_data_B(const CompetitionModel& m) { return {0.0, m.B_max()}; }

}  // namespace frontier
