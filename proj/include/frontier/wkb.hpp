#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "frontier/errors.hpp"
#include "frontier/grid.hpp"
#include "frontier/model.hpp"

namespace frontier {

inline constexpr double kWkbFloor = 1e-280;

/// phi = -sqrt(eps) log u and the pointwise eikonal defect
///   d (phi')^2 - d sqrt(eps) phi'' + H.
struct WkbField {
  Grid1D grid;
  std::vector<double> phi_A, phi_B;
  std::vector<double> residual_A, residual_B;
  std::size_t floored = 0;  // nodes whose value was raised to the floor

  bool any_floored() const { return floored > 0; }
};

namespace detail {

inline std::vector<double> first_derivative(const std::vector<double>& f, double h) {
  const std::size_t n = f.size();
  std::vector<double> d(n);
  for (std::size_t i = 1; i + 1 < n; ++i) d[i] = (f[i + 1] - f[i - 1]) / (2.0 * h);
  d[0] = (-3.0 * f[0] + 4.0 * f[1] - f[2]) / (2.0 * h);
  d[n - 1] = (3.0 * f[n - 1] - 4.0 * f[n - 2] + f[n - 3]) / (2.0 * h);
  return d;
}

inline std::vector<double> second_derivative(const std::vector<double>& f, double h) {
  const std::size_t n = f.size();
  std::vector<double> d(n);
  for (std::size_t i = 1; i + 1 < n; ++i) d[i] = (f[i + 1] - 2.0 * f[i] + f[i - 1]) / (h * h);
  if (n >= 4) {
    d[0] = (2.0 * f[0] - 5.0 * f[1] + 4.0 * f[2] - f[3]) / (h * h);
    d[n - 1] = (2.0 * f[n - 1] - 5.0 * f[n - 2] + 4.0 * f[n - 3] - f[n - 4]) / (h * h);
  } else {
    d[0] = d[1];
    d[n - 1] = d[n - 2];
  }
  return d;
}

}  // namespace detail

/// Values below 1e-280 are floored and counted. Non-positive values are
/// a domain error unless allow_floor is set.
inline WkbField wkb_transform(const StateField& s, const CompetitionModel& m, double eps,
                              bool allow_floor = false) {
  if (!(eps > 0.0)) throw DomainError("WKB transform needs eps > 0");
  const std::size_t n = s.grid.n;
  const double se = std::sqrt(eps);
  WkbField w{s.grid, std::vector<double>(n), std::vector<double>(n), {}, {}, 0};

  auto phase = [&](double u) {
    if (!(u > 0.0) && !allow_floor)
      throw DomainError("WKB transform of a non-positive concentration");
    if (!(u >= kWkbFloor)) {
      ++w.floored;
      u = kWkbFloor;
    }
    return -se * std::log(u);
  };
  for (std::size_t i = 0; i < n; ++i) {
    w.phi_A[i] = phase(s.A[i]);
    w.phi_B[i] = phase(s.B[i]);
  }

  const double h = s.grid.h;
  const auto dA = detail::first_derivative(w.phi_A, h), ddA = detail::second_derivative(w.phi_A, h);
  const auto dB = detail::first_derivative(w.phi_B, h), ddB = detail::second_derivative(w.phi_B, h);
  w.residual_A.resize(n);
  w.residual_B.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double x = s.grid.x(i);
    w.residual_A[i] = m.d_A() * (dA[i] * dA[i] - se * ddA[i]) + m.H_A(x, s.A[i], s.B[i]);
    w.residual_B[i] = m.d_B() * (dB[i] * dB[i] - se * ddB[i]) + m.H_B(x, s.A[i], s.B[i]);
  }
  return w;
}

/// Pointwise phase slope phi' (centered, one-sided at the ends).
inline std::vector<double> wkb_slope(const std::vector<double>& phi, const Grid1D& g) {
  return detail::first_derivative(phi, g.h);
}

/**
 * Explicit lower barrier for A_eps: the solution of
 *   -eps d_A phi'' = -d_A mu phi,  phi(0) - sqrt(eps) phi'(0) = F_A(0),  phi(1) + sqrt(eps) phi'(1) = 0,
 * with d_A mu = -min_{0<=s<=F_A(0)} H_A(1, s, F_B(1)), i.e.
 *   phi(x) = alpha e^{kx} + beta_eps e^{-kx},  k = sqrt(mu/eps).
 */
struct SubsolutionProfile {
  bool applicable = false;  // mu > 0
  double mu = 0.0;
  double eps = 0.0;
  double alpha = 0.0;       // alpha_eps
  double beta_eps = 0.0;
  double beta_limit = 0.0;  // F_A(0)/(sqrt(mu)+1), eps -> 0 limit of beta_eps
  double delta_A = 0.0;     // phi(0)
  double eps0 = 0.0;        // below this the profile sits in (0, F_A(0)]
  double min_H = 0.0;       // min_{0<=s<=F_A(0)} H_A(1, s, F_B(1))

  double operator()(double x) const {
    const double k = std::sqrt(mu / eps);
    const double ratio = (std::sqrt(mu) - 1.0) / (std::sqrt(mu) + 1.0);
    // alpha e^{kx} = beta ratio e^{k(x-2)}; written this way to avoid overflow.
    return beta_eps * (ratio * std::exp(k * (x - 2.0)) + std::exp(-k * x));
  }

  /// |alpha| e^{k} + beta_eps, the bound on max phi used to show phi <= F_A(0).
  double upper_bound() const {
    const double k = std::sqrt(mu / eps);
    const double ratio = (std::sqrt(mu) - 1.0) / (std::sqrt(mu) + 1.0);
    return beta_eps * (std::fabs(ratio) * std::exp(-k) + 1.0);
  }
};

namespace detail {

inline void fill_amplitudes(SubsolutionProfile& p, double FA0) {
  const double sm = std::sqrt(p.mu);
  const double k = std::sqrt(p.mu / p.eps);
  const double ratio = (sm - 1.0) / (sm + 1.0);
  const double e2k = std::exp(-2.0 * k);
  p.beta_eps = FA0 / (sm + 1.0) / (1.0 - ratio * ratio * e2k);
  p.alpha = p.beta_eps * ratio * e2k;
  p.delta_A = p.alpha + p.beta_eps;
}

}  // namespace detail

inline SubsolutionProfile subsolution_profile(const CompetitionModel& m, double eps) {
  if (!(eps > 0.0)) throw DomainError("sub-solution needs eps > 0");
  const double FA0 = m.A_max(), FB1 = m.B_max();
  double min_h = m.H_A(1.0, FA0, FB1);
  constexpr std::size_t samples = 1001;
  for (std::size_t i = 0; i < samples; ++i)
    min_h = std::min(min_h, m.H_A(1.0, FA0 * i / (samples - 1.0), FB1));

  SubsolutionProfile p;
  p.min_H = min_h;
  p.mu = -min_h / m.d_A();
  p.eps = eps;
  if (!(p.mu > 0.0)) return p;  // no barrier needed; reported through applicable = false
  p.applicable = true;
  p.beta_limit = FA0 / (std::sqrt(p.mu) + 1.0);
  detail::fill_amplitudes(p, FA0);

  // Largest eps on a 1/20-decade ladder in [1e-12, 1] below which the barrier
  // bound holds all the way down.
  auto holds = [&](double e) {
    SubsolutionProfile q = p;
    q.eps = e;
    detail::fill_amplitudes(q, FA0);
    // Both exponentials carry positive weight once beta_eps > 0, so positivity
    // is checked on the amplitude; evaluating q(1) would underflow for tiny e.
    return q.upper_bound() <= FA0 && q.beta_eps > 0.0;
  };
  p.eps0 = 0.0;
  for (int j = 240; j >= 0; --j) {
    const double e = std::pow(10.0, -j / 20.0);
    if (!holds(e)) break;
    p.eps0 = e;
  }
  return p;
}

}  // namespace frontier
