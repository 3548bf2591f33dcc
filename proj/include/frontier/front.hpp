#pragma once

#include <algorithm>
#include <cmath>
#include <string>

#include "frontier/errors.hpp"
#include "frontier/grid.hpp"
#include "frontier/roots.hpp"

namespace frontier {

struct FrontEstimate {
  double x_star_eps;    // A = B crossing, linearly interpolated
  double width;         // extent of |A - B| < 0.1 * reference level
  double x_star_cubic;  // same crossing from the 4-node cubic through the bracket
};

namespace detail {

/// Root of the cubic interpolating A - B on nodes i-1..i+2 inside [x_i, x_{i+1}].
/// Linear interpolation carries an O(h^2) error that oscillates with the
/// crossing's offset from the nodes; this estimate is O(h^4).
inline double cubic_crossing(const StateField& s, std::size_t i, double fallback) {
  if (i == 0 || i + 2 >= s.grid.n) return fallback;
  double xs[4], ds[4];
  for (std::size_t k = 0; k < 4; ++k) {
    xs[k] = s.grid.x(i - 1 + k);
    ds[k] = s.A[i - 1 + k] - s.B[i - 1 + k];
  }
  const auto p = [&](double x) {
    double v = 0.0;
    for (int k = 0; k < 4; ++k) {
      double l = 1.0;
      for (int j = 0; j < 4; ++j)
        if (j != k) l *= (x - xs[j]) / (xs[k] - xs[j]);
      v += l * ds[k];
    }
    return v;
  };
  const auto r = bracketed_root(p, xs[1], xs[2], 1e-15);
  return r ? r->x : fallback;
}

}  // namespace detail

/**
 * Locates the unique A = B crossing of a state with A(0) > B(0) and A(1) < B(1).
 * The width uses `reference_level` (normally F_A(0)); pass <= 0 to use the
 * state's own maximum.
 */
inline FrontEstimate front_position(const StateField& s, double reference_level = 0.0) {
  const std::size_t n = s.grid.n;
  auto diff = [&](std::size_t i) { return s.A[i] - s.B[i]; };
  if (!(diff(0) > 0.0) || !(diff(n - 1) < 0.0))
    throw StructureError("front needs A(0) > B(0) and A(1) < B(1)");

  // Sign changes among non-zero differences.
  std::size_t changes = 0, last_pos = 0, first_neg = 0;
  int prev = 1;
  std::size_t prev_idx = 0;
  for (std::size_t i = 1; i < n; ++i) {
    const double d = diff(i);
    if (d == 0.0) continue;
    const int sg = d > 0.0 ? 1 : -1;
    if (sg != prev) {
      ++changes;
      if (changes == 1) {
        last_pos = prev_idx;
        first_neg = i;
      }
    }
    prev = sg;
    prev_idx = i;
  }
  if (changes != 1)
    throw StructureError("A - B changes sign " + std::to_string(changes) +
                         " times; expected exactly one crossing");

  double x_star, x_cubic;
  if (first_neg == last_pos + 1) {
    const double d0 = diff(last_pos), d1 = diff(first_neg);
    x_star = s.grid.x(last_pos) + s.grid.h * d0 / (d0 - d1);
    x_cubic = detail::cubic_crossing(s, last_pos, x_star);
  } else {
    x_star = 0.5 * (s.grid.x(last_pos + 1) + s.grid.x(first_neg - 1));
    x_cubic = x_star;
  }

  double ref = reference_level;
  if (!(ref > 0.0)) ref = std::max(*std::max_element(s.A.begin(), s.A.end()),
                                   *std::max_element(s.B.begin(), s.B.end()));
  const double level = 0.1 * ref;

  double x_left = 0.0;
  for (std::size_t i = last_pos + 1; i-- > 0;) {
    if (diff(i) >= level) {
      const double d0 = diff(i), d1 = diff(i + 1);
      x_left = s.grid.x(i) + s.grid.h * (d0 - level) / (d0 - d1);
      break;
    }
  }
  double x_right = 1.0;
  for (std::size_t j = first_neg; j < n; ++j) {
    if (diff(j) <= -level) {
      const double d0 = diff(j - 1), d1 = diff(j);
      x_right = s.grid.x(j - 1) + s.grid.h * (d0 + level) / (d0 - d1);
      break;
    }
  }
  return {x_star, x_right - x_left, x_cubic};
}

}  // namespace frontier
