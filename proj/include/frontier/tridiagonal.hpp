#pragma once

#include <cmath>
#include <span>
#include <vector>

#include "frontier/errors.hpp"

namespace frontier {

/// Thomas algorithm for lower[i] u[i-1] + diag[i] u[i] + upper[i] u[i+1] = rhs[i].
/// lower[0] and upper[n-1] are ignored. No pivoting: intended for the
/// diagonally dominant M-matrices produced by implicit diffusion.
inline std::vector<double> solve_tridiagonal(std::span<const double> lower,
                                             std::span<const double> diag,
                                             std::span<const double> upper,
                                             std::span<const double> rhs) {
  const std::size_t n = diag.size();
  std::vector<double> c(n), d(n);
  double beta = diag[0];
  if (beta == 0.0) throw NumericalError("tridiagonal solve: zero pivot");
  c[0] = upper[0] / beta;
  d[0] = rhs[0] / beta;
  for (std::size_t i = 1; i < n; ++i) {
    beta = diag[i] - lower[i] * c[i - 1];
    if (beta == 0.0 || !std::isfinite(beta)) throw NumericalError("tridiagonal solve: zero pivot");
    c[i] = i + 1 < n ? upper[i] / beta : 0.0;
    d[i] = (rhs[i] - lower[i] * d[i - 1]) / beta;
  }
  for (std::size_t i = n - 1; i-- > 0;) d[i] -= c[i] * d[i + 1];
  return d;
}

}  // namespace frontier
