#pragma once

#include <cmath>
#include <optional>

namespace frontier {

struct RootResult {
  double x;
  int iterations;
};

/// Root of a continuous f on [lo, hi] given f(lo) and f(hi) of opposite sign.
/// Bisection down to a 1e-3 bracket, then Illinois-modified secant steps, which
/// never leave the bracket. Returns nullopt when there is no sign change.
template <class F>
std::optional<RootResult> bracketed_root(F&& f, double lo, double hi, double tol = 1e-12) {
  double flo = f(lo);
  double fhi = f(hi);
  if (flo == 0.0) return RootResult{lo, 0};
  if (fhi == 0.0) return RootResult{hi, 0};
  if ((flo > 0.0) == (fhi > 0.0)) return std::nullopt;

  int it = 0;
  while (hi - lo > 1e-3 && it < 60) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    ++it;
    if (fm == 0.0) return RootResult{mid, it};
    if ((fm > 0.0) == (flo > 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
      fhi = fm;
    }
  }

  int side = 0;  // +1 when lo was replaced last, -1 when hi was
  while (hi - lo > tol && it < 200) {
    double x = (lo * fhi - hi * flo) / (fhi - flo);
    if (!(x > lo && x < hi)) x = 0.5 * (lo + hi);
    const double fx = f(x);
    ++it;
    if (fx == 0.0) return RootResult{x, it};
    if ((fx > 0.0) == (flo > 0.0)) {
      lo = x;
      flo = fx;
      if (side == +1) fhi *= 0.5;
      side = +1;
    } else {
      hi = x;
      fhi = fx;
      if (side == -1) flo *= 0.5;
      side = -1;
    }
  }
  return RootResult{0.5 * (lo + hi), it};
}

}  // namespace frontier
