#pragma once

#include <Eigen/Sparse>
#include <Eigen/SparseLU>
#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "frontier/errors.hpp"
#include "frontier/model.hpp"
#include "frontier/tridiagonal.hpp"

namespace frontier {

/**
 * Frozen-x traveling wave on y in [-L, L]:
 *   -c a' - d_A a'' = a H_A(x, a, b),   -c b' - d_B b'' = b H_B(x, a, b),
 *   a(-L) = F_A(x), a(L) = 0, b(-L) = 0, b(L) = F_B(x).
 * Substituting a(t,y) = U(y - ct) into the parabolic system gives exactly this
 * form, so c > 0 means the A-dominated region (y < 0) expands.
 */
struct WaveProblem {
  CompetitionModel model;
  double x_frozen;
  double L;
  std::size_t m;          // nodes, odd so that y = 0 is a node
  bool auto_extend;       // double L until the far-field test passes

  double dy() const { return 2.0 * L / static_cast<double>(m - 1); }
  double y(std::size_t j) const { return -L + static_cast<double>(j) * dy(); }
  std::size_t center() const { return (m - 1) / 2; }
  double a_left() const { return model.F_A()(x_frozen); }
  double b_right() const { return model.F_B()(x_frozen); }
};

struct WaveOptions {
  double L = 0.0;           // <= 0: 50 max(sqrt(d_A), sqrt(d_B)) with automatic doubling
  double dy = 0.02;         // node spacing in the blow-up variable
  double newton_tol = 1e-10;
  int max_newton = 60;
  int max_halvings = 20;
  double far_field_tol = 1e-6;
  int max_doublings = 3;
};

inline std::size_t odd_node_count(double L, double dy) {
  std::size_t half = static_cast<std::size_t>(std::ceil(L / dy - 1e-9));
  return 2 * std::max<std::size_t>(half, 2) + 1;
}

inline WaveProblem make_wave_problem(const CompetitionModel& model, double x,
                                     const WaveOptions& opts = {}) {
  require_unit_interval(x, "x_frozen");
  const bool auto_L = !(opts.L > 0.0);
  const double L = auto_L ? 50.0 * std::sqrt(std::max(model.d_A(), model.d_B())) : opts.L;
  if (!(opts.dy > 0.0)) throw DomainError("dy must be positive");
  return {model, x, L, odd_node_count(L, opts.dy), auto_L};
}

enum class WaveSolver { bvp_newton, front_tracking };

inline const char* to_string(WaveSolver s) {
  return s == WaveSolver::bvp_newton ? "bvp_newton" : "front_tracking";
}

struct WaveResult {
  double x;
  double c;
  double L;
  std::vector<double> y, a, b;
  double phase_error;        // |a(0) - b(0)|
  WaveSolver solver;
  bool converged;
  double residual;           // Newton residual (bvp) or fit RMS (tracking)
  int iterations;            // Newton iterations (bvp) or time steps (tracking)
  double far_field_mismatch; // tail amplitude estimate at +-L
  std::vector<std::string> warnings;
};

/// Slowest exponential decay rate of the linearization at the two far-field states.
inline double far_field_decay_rate(const CompetitionModel& m, double x, double c) {
  const double fa = m.F_A()(x), fb = m.F_B()(x);
  auto rate = [](double d, double cc, double lam) {
    return (cc + std::sqrt(cc * cc + 4.0 * d * std::fabs(lam))) / (2.0 * d);
  };
  // y -> -inf around (F_A, 0): modes e^{ry}, r > 0, solve d r^2 + c r + lam = 0.
  const double left = std::min(rate(m.d_A(), -c, fa), rate(m.d_B(), -c, fb - m.s_B() * fa));
  // y -> +inf around (0, F_B): modes e^{-ry}, solve d r^2 - c r + lam = 0.
  const double right = std::min(rate(m.d_A(), c, fa - m.s_A() * fb), rate(m.d_B(), c, fb));
  return std::min(left, right);
}

namespace detail {

inline double interpolate_profile(const std::vector<double>& ys, const std::vector<double>& us,
                                  double y, double left, double right) {
  if (y <= ys.front()) return left;
  if (y >= ys.back()) return right;
  const auto it = std::upper_bound(ys.begin(), ys.end(), y);
  const std::size_t j = static_cast<std::size_t>(it - ys.begin());
  const double t = (y - ys[j - 1]) / (ys[j] - ys[j - 1]);
  return (1.0 - t) * us[j - 1] + t * us[j];
}

/// Far-field tail amplitude estimated from the end slopes and the decay rate.
inline double tail_mismatch(const WaveProblem& p, const std::vector<double>& a,
                            const std::vector<double>& b, double c) {
  const double h = p.dy();
  const std::size_t n = p.m;
  const double slope = std::max({std::fabs(a[1] - a[0]), std::fabs(b[1] - b[0]),
                                 std::fabs(a[n - 1] - a[n - 2]), std::fabs(b[n - 1] - b[n - 2])}) /
                       h;
  const double r = far_field_decay_rate(p.model, p.x_frozen, c);
  return slope / std::max(r, 1e-12);
}

struct BvpState {
  std::vector<double> a, b;
  double c;
};

inline BvpState initial_state(const WaveProblem& p, const std::optional<WaveResult>& guess) {
  BvpState s{std::vector<double>(p.m), std::vector<double>(p.m), 0.0};
  const double fa = p.a_left(), fb = p.b_right();
  if (guess && guess->y.size() >= 3) {
    const double ga = guess->a.front() > 0 ? fa / guess->a.front() : 1.0;
    const double gb = guess->b.back() > 0 ? fb / guess->b.back() : 1.0;
    for (std::size_t j = 0; j < p.m; ++j) {
      const double y = p.y(j);
      s.a[j] = ga * interpolate_profile(guess->y, guess->a, y, guess->a.front(), guess->a.back());
      s.b[j] = gb * interpolate_profile(guess->y, guess->b, y, guess->b.front(), guess->b.back());
    }
    s.c = guess->c;
  } else {
    const double w = 2.0 * std::sqrt(std::max(p.model.d_A(), p.model.d_B()));
    for (std::size_t j = 0; j < p.m; ++j) {
      const double t = std::tanh(p.y(j) / w);
      s.a[j] = 0.5 * fa * (1.0 - t);
      s.b[j] = 0.5 * fb * (1.0 + t);
    }
  }
  s.a.front() = fa;
  s.a.back() = 0.0;
  s.b.front() = 0.0;
  s.b.back() = fb;
  return s;
}

/// Residual of the discrete BVP: rows (a_j, b_j) for interior j, then the pinning row.
inline Eigen::VectorXd bvp_residual(const WaveProblem& p, const BvpState& s) {
  const std::size_t n = p.m, inner = n - 2;
  const double h = p.dy(), dA = p.model.d_A(), dB = p.model.d_B();
  const double fa = p.a_left(), fb = p.b_right(), sA = p.model.s_A(), sB = p.model.s_B();
  Eigen::VectorXd r(2 * inner + 1);
  for (std::size_t j = 1; j + 1 < n; ++j) {
    const double a = s.a[j], b = s.b[j];
    const double da = (s.a[j + 1] - s.a[j - 1]) / (2 * h);
    const double db = (s.b[j + 1] - s.b[j - 1]) / (2 * h);
    const double lapa = (s.a[j + 1] - 2 * a + s.a[j - 1]) / (h * h);
    const double lapb = (s.b[j + 1] - 2 * b + s.b[j - 1]) / (h * h);
    r[2 * (j - 1)] = -s.c * da - dA * lapa - a * (fa - a - sA * b);
    r[2 * (j - 1) + 1] = -s.c * db - dB * lapb - b * (fb - b - sB * a);
  }
  const std::size_t k = p.center();
  r[2 * inner] = s.a[k] - s.b[k];
  return r;
}

inline Eigen::SparseMatrix<double> bvp_jacobian(const WaveProblem& p, const BvpState& s) {
  const std::size_t n = p.m, inner = n - 2;
  const int N = static_cast<int>(2 * inner + 1);
  const double h = p.dy(), dA = p.model.d_A(), dB = p.model.d_B();
  const double fa = p.a_left(), fb = p.b_right(), sA = p.model.s_A(), sB = p.model.s_B();
  std::vector<Eigen::Triplet<double>> t;
  t.reserve(12 * inner + 2);
  const int cc = N - 1;
  auto ia = [](std::size_t j) { return static_cast<int>(2 * (j - 1)); };
  auto ib = [](std::size_t j) { return static_cast<int>(2 * (j - 1) + 1); };
  for (std::size_t j = 1; j + 1 < n; ++j) {
    const double a = s.a[j], b = s.b[j];
    const int ra = ia(j), rb = ib(j);
    const double lowA = s.c / (2 * h) - dA / (h * h), upA = -s.c / (2 * h) - dA / (h * h);
    const double lowB = s.c / (2 * h) - dB / (h * h), upB = -s.c / (2 * h) - dB / (h * h);
    if (j > 1) {
      t.emplace_back(ra, ia(j - 1), lowA);
      t.emplace_back(rb, ib(j - 1), lowB);
    }
    if (j + 2 < n) {
      t.emplace_back(ra, ia(j + 1), upA);
      t.emplace_back(rb, ib(j + 1), upB);
    }
    t.emplace_back(ra, ra, 2 * dA / (h * h) - (fa - 2 * a - sA * b));
    t.emplace_back(ra, rb, sA * a);
    t.emplace_back(rb, rb, 2 * dB / (h * h) - (fb - 2 * b - sB * a));
    t.emplace_back(rb, ra, sB * b);
    t.emplace_back(ra, cc, -(s.a[j + 1] - s.a[j - 1]) / (2 * h));
    t.emplace_back(rb, cc, -(s.b[j + 1] - s.b[j - 1]) / (2 * h));
  }
  const std::size_t k = p.center();
  t.emplace_back(N - 1, ia(k), 1.0);
  t.emplace_back(N - 1, ib(k), -1.0);
  Eigen::SparseMatrix<double> J(N, N);
  J.setFromTriplets(t.begin(), t.end());
  J.makeCompressed();
  return J;
}

inline void apply_step(const BvpState& from, const Eigen::VectorXd& dz, double lambda,
                       BvpState& to) {
  to = from;
  const std::size_t n = from.a.size();
  for (std::size_t j = 1; j + 1 < n; ++j) {
    to.a[j] += lambda * dz[static_cast<Eigen::Index>(2 * (j - 1))];
    to.b[j] += lambda * dz[static_cast<Eigen::Index>(2 * (j - 1) + 1)];
  }
  to.c += lambda * dz[dz.size() - 1];
}

inline WaveResult solve_fixed_domain(const WaveProblem& p, const std::optional<WaveResult>& guess,
                                     const WaveOptions& opts) {
  BvpState s = initial_state(p, guess);
  Eigen::VectorXd r = bvp_residual(p, s);
  double norm = r.lpNorm<Eigen::Infinity>();
  Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>> lu;
  bool analyzed = false;
  int it = 0;
  BvpState trial = s;
  while (norm > opts.newton_tol) {
    if (it >= opts.max_newton)
      throw NonConvergence("wave BVP: Newton budget exhausted at x=" + std::to_string(p.x_frozen),
                           norm);
    ++it;
    const auto J = bvp_jacobian(p, s);
    if (!analyzed) {
      lu.analyzePattern(J);
      analyzed = true;
    }
    lu.factorize(J);
    if (lu.info() != Eigen::Success)
      throw NumericalError("wave BVP: singular Jacobian at x=" + std::to_string(p.x_frozen));
    const Eigen::VectorXd dz = lu.solve(-r);

    double lambda = 1.0;
    bool accepted = false;
    for (int k = 0; k <= opts.max_halvings; ++k, lambda *= 0.5) {
      apply_step(s, dz, lambda, trial);
      const Eigen::VectorXd rt = bvp_residual(p, trial);
      const double nt = rt.lpNorm<Eigen::Infinity>();
      if (std::isfinite(nt) && nt < norm) {
        std::swap(s, trial);
        r = rt;
        norm = nt;
        accepted = true;
        break;
      }
    }
    if (!accepted)
      throw NonConvergence("wave BVP: damped Newton stalled at x=" + std::to_string(p.x_frozen),
                           norm);
  }

  WaveResult out;
  out.x = p.x_frozen;
  out.c = s.c;
  out.L = p.L;
  out.y.resize(p.m);
  for (std::size_t j = 0; j < p.m; ++j) out.y[j] = p.y(j);
  out.a = std::move(s.a);
  out.b = std::move(s.b);
  const std::size_t k = p.center();
  out.phase_error = std::fabs(out.a[k] - out.b[k]);
  out.solver = WaveSolver::bvp_newton;
  out.converged = true;
  out.residual = norm;
  out.iterations = it;
  out.far_field_mismatch = tail_mismatch(p, out.a, out.b, out.c);
  return out;
}

}  // namespace detail

/**
 * Newton solve of the discretized wave problem. Unknowns are both profiles
 * on the interior nodes and the speed c; the extra equation pins a(0) = b(0).
 * Steps are damped by halving while the residual does not decrease.
 * With an automatic domain, L doubles (re-using the last profile) until the
 * far-field tail estimate drops below opts.far_field_tol.
 */
inline WaveResult solve_wave_bvp(WaveProblem problem, const std::optional<WaveResult>& guess = {},
                                 const WaveOptions& opts = {}) {
  const auto interval = find_bistable_interval(problem.model);
  if (!interval.contains(problem.x_frozen))
    throw DomainError("x_frozen=" + std::to_string(problem.x_frozen) +
                      " outside the bistable interval (" + std::to_string(interval.x_b) + ", " +
                      std::to_string(interval.x_a) + ")");

  WaveResult res = detail::solve_fixed_domain(problem, guess, opts);
  for (int k = 0; problem.auto_extend && k < opts.max_doublings &&
                  res.far_field_mismatch > opts.far_field_tol;
       ++k) {
    problem.L *= 2.0;
    problem.m = 2 * problem.m - 1;
    res = detail::solve_fixed_domain(problem, res, opts);
  }
  if (res.far_field_mismatch > opts.far_field_tol)
    res.warnings.push_back("far-field tail estimate " + std::to_string(res.far_field_mismatch) +
                           " above tolerance at L=" + std::to_string(res.L));
  const double edge = 0.05 * interval.width();
  if (problem.x_frozen - interval.x_b < edge || interval.x_a - problem.x_frozen < edge)
    res.warnings.push_back("x near the bistable interval end: one far-field state is nearly "
                           "marginal and the BVP is ill-conditioned");
  return res;
}

struct TrackingOptions {
  double dt = 0.01;
  bool recenter = true;   // shift the window by whole cells to follow the front
  double margin = 10.0;   // without recentering: error when the front gets this close to an end
};

namespace detail {

/// Crossing of a - b on a uniform grid by linear interpolation; nullopt when not unique.
inline std::optional<double> wave_crossing(const std::vector<double>& a,
                                           const std::vector<double>& b, double y0, double h) {
  std::optional<double> found;
  for (std::size_t j = 0; j + 1 < a.size(); ++j) {
    const double d0 = a[j] - b[j], d1 = a[j + 1] - b[j + 1];
    if (d0 > 0.0 && d1 <= 0.0) {
      if (found) return std::nullopt;
      found = y0 + (static_cast<double>(j) + d0 / (d0 - d1)) * h;
    }
  }
  return found;
}

}  // namespace detail

/**
 * Independent speed estimate: integrates the homogeneous-in-y parabolic system
 * at frozen x (Strang splitting: RK4 reaction half steps around a
 * Crank-Nicolson diffusion step), follows the a = b crossing p(t), and fits
 * c = dp/dt by least squares over the last third of the horizon.
 */
inline WaveResult front_tracking_speed(const WaveProblem& p, double t_horizon,
                                       const TrackingOptions& opts = {}) {
  const auto interval = find_bistable_interval(p.model);
  if (!interval.contains(p.x_frozen))
    throw DomainError("x_frozen outside the bistable interval");
  if (!(t_horizon > 0.0) || !(opts.dt > 0.0)) throw DomainError("horizon and dt must be positive");

  const std::size_t n = p.m;
  const double h = p.dy();
  const double fa = p.a_left(), fb = p.b_right(), sA = p.model.s_A(), sB = p.model.s_B();
  std::vector<double> a(n), b(n);
  const double w = 2.0 * std::sqrt(std::max(p.model.d_A(), p.model.d_B()));
  for (std::size_t j = 0; j < n; ++j) {
    const double t = std::tanh(p.y(j) / w);
    a[j] = 0.5 * fa * (1.0 - t);
    b[j] = 0.5 * fb * (1.0 + t);
  }
  a.front() = fa;
  a.back() = 0.0;
  b.front() = 0.0;
  b.back() = fb;

  auto react = [&](double tau) {
    auto f = [&](double u, double v) {
      return std::pair<double, double>{u * (fa - u - sA * v), v * (fb - v - sB * u)};
    };
    for (std::size_t j = 1; j + 1 < n; ++j) {
      const double u = a[j], v = b[j];
      const auto [k1u, k1v] = f(u, v);
      const auto [k2u, k2v] = f(u + 0.5 * tau * k1u, v + 0.5 * tau * k1v);
      const auto [k3u, k3v] = f(u + 0.5 * tau * k2u, v + 0.5 * tau * k2v);
      const auto [k4u, k4v] = f(u + tau * k3u, v + tau * k3v);
      a[j] = u + tau / 6.0 * (k1u + 2 * k2u + 2 * k3u + k4u);
      b[j] = v + tau / 6.0 * (k1v + 2 * k2v + 2 * k3v + k4v);
    }
  };

  // Crank-Nicolson with Dirichlet ends; matrices are constant over the run.
  auto make_cn = [&](double d) {
    const double r = 0.5 * opts.dt * d / (h * h);
    std::vector<double> lo(n, -r), di(n, 1.0 + 2.0 * r), up(n, -r);
    lo[0] = up[0] = 0.0;
    di[0] = 1.0;
    lo[n - 1] = up[n - 1] = 0.0;
    di[n - 1] = 1.0;
    return std::tuple{std::move(lo), std::move(di), std::move(up), r};
  };
  const auto [loA, diA, upA, rA] = make_cn(p.model.d_A());
  const auto [loB, diB, upB, rB] = make_cn(p.model.d_B());
  auto diffuse = [&](std::vector<double>& u, const std::vector<double>& lo,
                     const std::vector<double>& di, const std::vector<double>& up, double r) {
    std::vector<double> rhs(n);
    rhs[0] = u[0];
    rhs[n - 1] = u[n - 1];
    for (std::size_t j = 1; j + 1 < n; ++j) rhs[j] = u[j] + r * (u[j + 1] - 2 * u[j] + u[j - 1]);
    u = solve_tridiagonal(lo, di, up, rhs);
  };

  const auto steps = static_cast<std::size_t>(std::llround(t_horizon / opts.dt));
  double offset = 0.0;
  std::vector<double> ts, ps;
  for (std::size_t k = 1; k <= steps; ++k) {
    react(0.5 * opts.dt);
    diffuse(a, loA, diA, upA, rA);
    diffuse(b, loB, diB, upB, rB);
    react(0.5 * opts.dt);

    const auto local = detail::wave_crossing(a, b, -p.L, h);
    if (!local) throw DomainTooSmall("tracked front lost (no unique a=b crossing)");
    const double t = static_cast<double>(k) * opts.dt;
    ts.push_back(t);
    ps.push_back(offset + *local);

    if (opts.recenter) {
      const auto shift = static_cast<long>(std::lround(*local / h));
      if (std::labs(shift) >= static_cast<long>(1.0 / h)) {
        std::vector<double> na(n), nb(n);
        for (std::size_t j = 0; j < n; ++j) {
          const long src = static_cast<long>(j) + shift;
          const bool left = src < 0, right = src >= static_cast<long>(n);
          na[j] = left ? fa : right ? 0.0 : a[static_cast<std::size_t>(src)];
          nb[j] = left ? 0.0 : right ? fb : b[static_cast<std::size_t>(src)];
        }
        a = std::move(na);
        b = std::move(nb);
        offset += static_cast<double>(shift) * h;
      }
    } else if (std::fabs(*local) > p.L - opts.margin) {
      throw DomainTooSmall("front left the window before the horizon (t=" + std::to_string(t) + ")");
    }
  }

  // Least-squares slope over the final third.
  const std::size_t first = ts.size() - ts.size() / 3;
  double mt = 0, mp = 0;
  const double cnt = static_cast<double>(ts.size() - first);
  for (std::size_t i = first; i < ts.size(); ++i) {
    mt += ts[i];
    mp += ps[i];
  }
  mt /= cnt;
  mp /= cnt;
  double stt = 0, stp = 0;
  for (std::size_t i = first; i < ts.size(); ++i) {
    stt += (ts[i] - mt) * (ts[i] - mt);
    stp += (ts[i] - mt) * (ps[i] - mp);
  }
  const double c = stp / stt;
  double ss = 0;
  for (std::size_t i = first; i < ts.size(); ++i) {
    const double e = ps[i] - (mp + c * (ts[i] - mt));
    ss += e * e;
  }

  WaveResult out;
  out.x = p.x_frozen;
  out.c = c;
  out.L = p.L;
  out.y.resize(n);
  for (std::size_t j = 0; j < n; ++j) out.y[j] = p.y(j) + offset;
  out.a = std::move(a);
  out.b = std::move(b);
  const std::size_t k = p.center();
  out.phase_error = std::fabs(out.a[k] - out.b[k]);
  out.solver = WaveSolver::front_tracking;
  out.converged = true;
  out.residual = std::sqrt(ss / cnt);
  out.iterations = static_cast<int>(steps);
  out.far_field_mismatch = detail::tail_mismatch(p, out.a, out.b, c);
  return out;
}

struct SpeedSample {
  double x;
  double c;
  bool converged;
  WaveResult wave;
};

struct SpeedMapOptions {
  WaveOptions wave;
  double continuation_step = 0.0;  // <= 0: 0.02 (x_a - x_b)
  double bracket_margin = 0.05;    // locate_boundary: fraction of the width kept off each end
};

namespace detail {

inline double continuation_step(const BistableInterval& iv, const SpeedMapOptions& o) {
  return o.continuation_step > 0.0 ? o.continuation_step : 0.02 * iv.width();
}

/// Solve at `x` starting from `from`, walking in steps no larger than `step`.
inline WaveResult continue_to(const CompetitionModel& m, double x, std::optional<WaveResult> from,
                              double step, const WaveOptions& wo) {
  if (from) {
    const double span = x - from->x;
    const int k = static_cast<int>(std::ceil(std::fabs(span) / step - 1e-9));
    for (int i = 1; i < k; ++i)
      from = solve_wave_bvp(make_wave_problem(m, from->x + span / k, wo), from, wo);
  }
  return solve_wave_bvp(make_wave_problem(m, x, wo), from, wo);
}

}  // namespace detail

/**
 * c(x) at each requested x, in order. Each solve starts from the previous
 * profile; intermediate solves are inserted so that consecutive frozen
 * positions are at most one continuation step apart. A failure is rethrown
 * as NonConvergence naming the x where it happened.
 */
inline std::vector<SpeedSample> speed_map(const CompetitionModel& m, const std::vector<double>& xs,
                                          const SpeedMapOptions& opts = {}) {
  const auto iv = find_bistable_interval(m);
  const double step = detail::continuation_step(iv, opts);
  for (double x : xs)
    if (!iv.contains(x))
      throw DomainError("x=" + std::to_string(x) + " outside the bistable interval");
  std::vector<SpeedSample> out;
  out.reserve(xs.size());
  std::optional<WaveResult> prev;
  for (double x : xs) {
    try {
      if (!prev) {
        // Start from the middle of the interval, where the tanh guess is reliable.
        const double mid = 0.5 * (iv.x_b + iv.x_a);
        prev = solve_wave_bvp(make_wave_problem(m, mid, opts.wave), std::nullopt, opts.wave);
      }
      prev = detail::continue_to(m, x, prev, step, opts.wave);
    } catch (const NonConvergence& e) {
      throw NonConvergence("speed map failed at x=" + std::to_string(x) + ": " + e.what(),
                           e.last_residual());
    }
    out.push_back({x, prev->c, prev->converged, *prev});
  }
  return out;
}

enum class BoundaryStatus { interior, at_x_b, at_x_a };

inline const char* to_string(BoundaryStatus s) {
  switch (s) {
    case BoundaryStatus::interior: return "interior";
    case BoundaryStatus::at_x_b: return "at_x_b";
    case BoundaryStatus::at_x_a: return "at_x_a";
  }
  return "?";
}

struct BoundaryLocation {
  double x_star;
  double bracket_lo, bracket_hi;
  double c_lo, c_hi;  // speeds at the final bracket ends
  int iterations;     // bisection steps
  BoundaryStatus status;
  BistableInterval interval;
};

/**
 * Zero of c(x) inside the bistable interval by bisection. The initial bracket
 * sits opts.bracket_margin (5%) of the interval width inside each end. When c has the same sign at
 * both bracket ends the result reports the boundary at the corresponding end
 * of the interval (status at_x_b when c < 0 throughout, at_x_a when c > 0).
 */
inline BoundaryLocation locate_boundary(const CompetitionModel& m, double tol_x = 1e-6,
                                        const SpeedMapOptions& opts = {}) {
  if (!(tol_x > 0.0)) throw DomainError("tol_x must be positive");
  const auto iv = find_bistable_interval(m);
  const double step = detail::continuation_step(iv, opts);
  if (!(opts.bracket_margin >= 0.0 && opts.bracket_margin < 0.5))
    throw DomainError("bracket_margin must lie in [0, 0.5)");
  const double lo0 = iv.x_b + opts.bracket_margin * iv.width();
  const double hi0 = iv.x_a - opts.bracket_margin * iv.width();

  std::vector<WaveResult> solved;
  auto nearest = [&](double x) {
    std::optional<WaveResult> best;
    for (const auto& r : solved)
      if (!best || std::fabs(r.x - x) < std::fabs(best->x - x)) best = r;
    return best;
  };
  auto speed = [&](double x) {
    auto r = detail::continue_to(m, x, nearest(x), step, opts.wave);
    solved.push_back(r);
    return r.c;
  };

  speed(0.5 * (iv.x_b + iv.x_a));
  double lo = lo0, hi = hi0;
  double c_lo = speed(lo), c_hi = speed(hi);
  if (c_lo <= 0.0 && c_hi <= 0.0) return {iv.x_b, lo, hi, c_lo, c_hi, 0, BoundaryStatus::at_x_b, iv};
  if (c_lo >= 0.0 && c_hi >= 0.0) return {iv.x_a, lo, hi, c_lo, c_hi, 0, BoundaryStatus::at_x_a, iv};

  int it = 0;
  while (hi - lo > tol_x) {
    const double mid = 0.5 * (lo + hi);
    const double c = speed(mid);
    ++it;
    if (c == 0.0) {
      lo = hi = mid;
      c_lo = c_hi = 0.0;
      break;
    }
    if ((c > 0.0) == (c_lo > 0.0)) {
      lo = mid;
      c_lo = c;
    } else {
      hi = mid;
      c_hi = c;
    }
  }
  return {0.5 * (lo + hi), lo, hi, c_lo, c_hi, it, BoundaryStatus::interior, iv};
}

}  // namespace frontier
