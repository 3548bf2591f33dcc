#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "frontier/errors.hpp"
#include "frontier/model.hpp"

namespace frontier {

/// Uniform nodes x_i = i h on [0,1], h = 1/(n-1).
struct Grid1D {
  std::size_t n;
  double h;

  explicit Grid1D(std::size_t n_) : n(n_), h(0.0) {
    if (n < 3) throw DomainError("grid needs at least 3 nodes");
    h = 1.0 / static_cast<double>(n - 1);
  }

  double x(std::size_t i) const { return i + 1 == n ? 1.0 : static_cast<double>(i) * h; }

  std::vector<double> nodes() const {
    std::vector<double> xs(n);
    for (std::size_t i = 0; i < n; ++i) xs[i] = x(i);
    return xs;
  }

  friend bool operator==(const Grid1D&, const Grid1D&) = default;
};

/// Smallest n with h <= sqrt(eps)/10, i.e. at least ten nodes per front width.
inline std::size_t required_nodes(double eps) {
  if (!(eps > 0.0)) throw DomainError("eps must be positive");
  return static_cast<std::size_t>(std::ceil(10.0 / std::sqrt(eps) - 1e-9)) + 1;
}

inline Grid1D auto_grid(double eps) { return Grid1D(std::max<std::size_t>(required_nodes(eps), 3)); }

inline bool grid_resolves(const Grid1D& g, double eps) { return g.h <= std::sqrt(eps) / 10.0 * (1 + 1e-12); }

/// Concentrations (A, B) on a grid at elapsed time t.
struct StateField {
  Grid1D grid;
  std::vector<double> A;
  std::vector<double> B;
  double t = 0.0;

  StateField(Grid1D g, std::vector<double> a, std::vector<double> b, double time = 0.0)
      : grid(g), A(std::move(a)), B(std::move(b)), t(time) {
    if (A.size() != grid.n || B.size() != grid.n)
      throw DomainError("state arrays must match grid size");
  }
};

/// Largest violation of 0 <= A <= F_A(0), 0 <= B <= F_B(1) (0 when inside).
inline double bound_violation(const StateField& s, const CompetitionModel& m) {
  const double amax = m.A_max(), bmax = m.B_max();
  double worst = 0.0;
  for (std::size_t i = 0; i < s.grid.n; ++i) {
    worst = std::max({worst, -s.A[i], s.A[i] - amax, -s.B[i], s.B[i] - bmax});
  }
  return worst;
}

/// Largest violation of A non-increasing and B non-decreasing (0 when monotone).
inline double monotonicity_violation(const StateField& s) {
  double worst = 0.0;
  for (std::size_t i = 0; i + 1 < s.grid.n; ++i) {
    worst = std::max({worst, s.A[i + 1] - s.A[i], s.B[i] - s.B[i + 1]});
  }
  return worst;
}

}  // namespace frontier
