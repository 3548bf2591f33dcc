#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "frontier/errors.hpp"
#include "frontier/front.hpp"
#include "frontier/grid.hpp"
#include "frontier/hypotheses.hpp"
#include "frontier/model.hpp"
#include "frontier/robin.hpp"
#include "frontier/tridiagonal.hpp"

namespace frontier {

/// Explicit reaction update over dt at one node. Falls back to the
/// exponential form u <- u exp(H dt) for a species that would turn negative.
inline std::pair<double, double> reaction_step(double FA, double FB, double sA, double sB,
                                               double A, double B, double dt) {
  const double ha = FA - A - sA * B;
  const double hb = FB - B - sB * A;
  double a = A + dt * A * ha;
  double b = B + dt * B * hb;
  if (a < 0.0) a = A * std::exp(ha * dt);
  if (b < 0.0) b = B * std::exp(hb * dt);
  return {a, b};
}

inline std::pair<double, double> reaction_step(const CompetitionModel& m, double x, double A,
                                               double B, double dt) {
  require_unit_interval(x);
  return reaction_step(m.F_A()(x), m.F_B()(x), m.s_A(), m.s_B(), A, B, dt);
}

/**
 * IMEX integrator for
 *   dA/dt = eps d_A A'' + A H_A,   dB/dt = eps d_B B'' + B H_B
 * with Robin ends. Diffusion is implicit (one tridiagonal solve per species),
 * reaction explicit, both species advanced from the same time level.
 */
class ParabolicStepper {
 public:
  ParabolicStepper(const CompetitionModel& model, double eps, const Grid1D& grid,
                   std::optional<RobinData> bc_A = std::nullopt,
                   std::optional<RobinData> bc_B = std::nullopt)
      : model_(model),
        grid_(grid),
        eps_(eps),
        op_A_(assemble_robin_operator(grid, eps, model.d_A(), bc_A.value_or(robin_data_A(model)))),
        op_B_(assemble_robin_operator(grid, eps, model.d_B(), bc_B.value_or(robin_data_B(model)))),
        FA_(grid.n),
        FB_(grid.n) {
    for (std::size_t i = 0; i < grid.n; ++i) {
      FA_[i] = model.F_A()(grid.x(i));
      FB_[i] = model.F_B()(grid.x(i));
    }
  }

  const RobinOperator& operator_A() const { return op_A_; }
  const RobinOperator& operator_B() const { return op_B_; }
  const Grid1D& grid() const { return grid_; }
  double eps() const { return eps_; }

  void step(StateField& s, double dt) const {
    if (!(dt > 0.0)) throw DomainError("dt must be positive");
    const std::size_t n = grid_.n;
    std::vector<double> ra(n), rb(n);
    for (std::size_t i = 0; i < n; ++i) {
      const auto [a, b] =
          reaction_step(FA_[i], FB_[i], model_.s_A(), model_.s_B(), s.A[i], s.B[i], dt);
      ra[i] = a + dt * op_A_.affine[i];
      rb[i] = b + dt * op_B_.affine[i];
    }
    s.A = implicit_solve(op_A_, ra, dt);
    s.B = implicit_solve(op_B_, rb, dt);
    s.t += dt;
  }

  /// Max-norm of the stationary residual (L u + affine + u H) over both species.
  double residual(const StateField& s) const {
    double worst = 0.0;
    for (std::size_t i = 0; i < grid_.n; ++i) {
      const double ha = FA_[i] - s.A[i] - model_.s_A() * s.B[i];
      const double hb = FB_[i] - s.B[i] - model_.s_B() * s.A[i];
      worst = std::max(worst, std::fabs(op_A_.apply_row(s.A, i) + s.A[i] * ha));
      worst = std::max(worst, std::fabs(op_B_.apply_row(s.B, i) + s.B[i] * hb));
    }
    return worst;
  }

  /// max |H| over the state; the reaction cap on dt is 0.1 / this value.
  double reaction_norm(const StateField& s) const {
    double worst = 0.0;
    for (std::size_t i = 0; i < grid_.n; ++i) {
      worst = std::max(worst, std::fabs(FA_[i] - s.A[i] - model_.s_A() * s.B[i]));
      worst = std::max(worst, std::fabs(FB_[i] - s.B[i] - model_.s_B() * s.A[i]));
    }
    return worst;
  }

 private:
  std::vector<double> implicit_solve(const RobinOperator& op, const std::vector<double>& rhs,
                                     double dt) const {
    const std::size_t n = grid_.n;
    std::vector<double> lo(n), di(n), up(n);
    for (std::size_t i = 0; i < n; ++i) {
      lo[i] = -dt * op.lower[i];
      di[i] = 1.0 - dt * op.diag[i];
      up[i] = -dt * op.upper[i];
    }
    return solve_tridiagonal(lo, di, up, rhs);
  }

  CompetitionModel model_;
  Grid1D grid_;
  double eps_;
  RobinOperator op_A_, op_B_;
  std::vector<double> FA_, FB_;
};

inline StateField step_parabolic(const StateField& state, const CompetitionModel& model, double eps,
                                 double dt) {
  ParabolicStepper stepper(model, eps, state.grid);
  StateField next = state;
  stepper.step(next, dt);
  return next;
}

enum class InitKind { paper_corner, monotone_ramp, custom };

inline const char* to_string(InitKind k) {
  switch (k) {
    case InitKind::paper_corner: return "paper_corner";
    case InitKind::monotone_ramp: return "monotone_ramp";
    default: return "custom";
  }
}

struct InitialCondition {
  InitKind kind = InitKind::paper_corner;
  std::optional<StateField> custom;

  static InitialCondition paper_corner() { return {InitKind::paper_corner, std::nullopt}; }
  static InitialCondition monotone_ramp() { return {InitKind::monotone_ramp, std::nullopt}; }
  static InitialCondition from(StateField s) { return {InitKind::custom, std::move(s)}; }
};

/// paper_corner: (A, B) = (0, F_B(1)).  monotone_ramp: A = F_A(x)(1-x), B = F_B(x) x.
inline StateField make_initial_state(const CompetitionModel& m, const Grid1D& g,
                                     const InitialCondition& init) {
  const std::size_t n = g.n;
  switch (init.kind) {
    case InitKind::paper_corner:
      return {g, std::vector<double>(n, 0.0), std::vector<double>(n, m.B_max())};
    case InitKind::monotone_ramp: {
      std::vector<double> a(n), b(n);
      for (std::size_t i = 0; i < n; ++i) {
        const double x = g.x(i);
        a[i] = m.F_A()(x) * (1.0 - x);
        b[i] = m.F_B()(x) * x;
      }
      return {g, std::move(a), std::move(b)};
    }
    default:
      if (!init.custom) throw DomainError("custom initial condition without a state");
      if (!(init.custom->grid == g)) throw DomainError("custom initial state on a different grid");
      return *init.custom;
  }
}

struct MonitorTolerances {
  double bound = 1e-9;
  double space = 1e-9;  // relative to F_A(0)
  double time = 1e-9;
};

struct MonitorStats {
  bool monotone_mode = false;  // space monitor active
  bool time_mode = false;      // time monitor active (paper_corner init)
  std::size_t accepted = 0;
  std::size_t rejected = 0;
  double worst_bound = 0.0;
  double worst_space = 0.0;
  double worst_time = 0.0;
};

struct SteadyOptions {
  bool strict = true;   // require verify_hypotheses to pass
  bool monitor = true;  // run the bound/monotonicity monitors each step
  MonitorTolerances tolerances{};
  std::size_t max_steps = 4'000'000;
  std::size_t residual_every = 10;
  double dt_initial = 0.0;  // <= 0: start at the reaction cap
  double snapshot_interval = 0.0;  // > 0: call on_snapshot every this much time
  std::function<void(const StateField&)> on_snapshot;
};

struct SteadyState {
  StateField state;
  double eps;
  double residual;
  std::size_t iterations;
  std::optional<FrontEstimate> front;
  MonitorStats monitors;
  std::vector<std::pair<double, double>> trace;  // (t, residual)
};

/// Where the zero-diffusion kinetics settle at one node (RK4, fixed dt).
struct PointwiseLimit {
  double A, B, t, residual;
  bool converged;
};

inline PointwiseLimit integrate_pointwise(double FA, double FB, double sA, double sB, double A,
                                          double B, double tol, double dt = 1e-3,
                                          std::size_t max_steps = 2'000'000) {
  auto f = [&](double a, double b) {
    return std::pair<double, double>{a * (FA - a - sA * b), b * (FB - b - sB * a)};
  };
  double t = 0.0;
  for (std::size_t k = 0; k < max_steps; ++k) {
    const auto [fa, fb] = f(A, B);
    const double res = std::max(std::fabs(fa), std::fabs(fb));
    if (res <= tol) return {A, B, t, res, true};
    const auto [k2a, k2b] = f(A + 0.5 * dt * fa, B + 0.5 * dt * fb);
    const auto [k3a, k3b] = f(A + 0.5 * dt * k2a, B + 0.5 * dt * k2b);
    const auto [k4a, k4b] = f(A + dt * k3a, B + dt * k3b);
    A += dt / 6.0 * (fa + 2 * k2a + 2 * k3a + k4a);
    B += dt / 6.0 * (fb + 2 * k2b + 2 * k3b + k4b);
    A = std::max(A, 0.0);
    B = std::max(B, 0.0);
    t += dt;
  }
  const auto [fa, fb] = f(A, B);
  return {A, B, t, std::max(std::fabs(fa), std::fabs(fb)), false};
}

namespace detail {

inline SteadyState run_pointwise(const CompetitionModel& model, const Grid1D& grid,
                                 StateField state, double tol, const SteadyOptions& opts) {
  double t_max = 0.0, res_max = 0.0;
  std::size_t steps = 0;
  for (std::size_t i = 0; i < grid.n; ++i) {
    const double x = grid.x(i);
    const auto lim = integrate_pointwise(model.F_A()(x), model.F_B()(x), model.s_A(), model.s_B(),
                                         state.A[i], state.B[i], tol, 1e-3, opts.max_steps);
    state.A[i] = lim.A;
    state.B[i] = lim.B;
    t_max = std::max(t_max, lim.t);
    res_max = std::max(res_max, lim.residual);
    steps = std::max(steps, static_cast<std::size_t>(std::llround(lim.t / 1e-3)));
  }
  state.t = t_max;
  if (res_max > tol)
    throw NonConvergence("pointwise integration did not settle", res_max);
  std::optional<FrontEstimate> front;
  try {
    front = front_position(state, model.A_max());
  } catch (const StructureError&) {
  }
  MonitorStats stats;
  stats.accepted = steps;
  return {std::move(state), 0.0, res_max, steps, front, stats, {}};
}

}  // namespace detail

/**
 * Integrates the parabolic system until the stationary residual drops to tol.
 *
 * Step size: doubled after each accepted step, capped at 0.1/max|H|, halved
 * and retried when a monitor trips. Monitors: bounds always; spatial
 * monotonicity when the initial state is monotone; time monotonicity
 * (A non-decreasing, B non-increasing) from the paper_corner start only.
 *
 * eps == 0 switches to independent per-node RK4 integration (dt = 1e-3).
 */
inline SteadyState run_to_steady(const CompetitionModel& model, double eps, const Grid1D& grid,
                                 const InitialCondition& init, double tol,
                                 const SteadyOptions& opts = {}) {
  if (!(eps >= 0.0)) throw DomainError("eps must be non-negative");
  if (!(tol > 0.0)) throw DomainError("tol must be positive");
  if (opts.strict) {
    const auto report = verify_hypotheses(model);
    if (!report.all_passed()) {
      std::string failed;
      for (const auto& c : report.checks)
        if (!c.passed) failed += std::string(failed.empty() ? "" : ", ") + to_string(c.id);
      throw HypothesisViolation("hypotheses failed: " + failed);
    }
  }
  StateField state = make_initial_state(model, grid, init);
  if (eps == 0.0) return detail::run_pointwise(model, grid, std::move(state), tol, opts);

  const ParabolicStepper stepper(model, eps, grid);
  MonitorStats stats;
  stats.monotone_mode = opts.monitor && monotonicity_violation(state) == 0.0;
  stats.time_mode = opts.monitor && init.kind == InitKind::paper_corner;
  const auto& tl = opts.tolerances;
  const double space_tol = tl.space * model.A_max();

  double dt = opts.dt_initial > 0.0 ? opts.dt_initial : 1.0;
  double residual = stepper.residual(state);
  std::vector<std::pair<double, double>> trace{{state.t, residual}};
  double next_snapshot = opts.snapshot_interval;
  if (opts.on_snapshot && opts.snapshot_interval > 0.0) opts.on_snapshot(state);

  StateField candidate = state;
  while (residual > tol) {
    if (stats.accepted >= opts.max_steps)
      throw NonConvergence("steady state not reached within " + std::to_string(opts.max_steps) +
                               " steps (residual " + std::to_string(residual) + ")",
                           residual, std::move(trace));
    const double cap = 0.1 / std::max(stepper.reaction_norm(state), 1e-12);
    dt = std::min(dt, cap);

    candidate = state;
    stepper.step(candidate, dt);

    double vb = 0.0, vs = 0.0, vt = 0.0;
    if (opts.monitor) {
      vb = bound_violation(candidate, model);
      if (stats.monotone_mode) vs = monotonicity_violation(candidate);
      if (stats.time_mode) {
        for (std::size_t i = 0; i < grid.n; ++i)
          vt = std::max({vt, state.A[i] - candidate.A[i], candidate.B[i] - state.B[i]});
      }
    }
    const bool ok = vb <= tl.bound && vs <= space_tol && vt <= tl.time;
    if (!ok && dt > 1e-12) {
      ++stats.rejected;
      dt *= 0.5;
      continue;
    }
    if (!ok && opts.strict)
      throw InvariantError("invariant monitor violated at t=" + std::to_string(state.t) +
                           " (bound " + std::to_string(vb) + ", space " + std::to_string(vs) +
                           ", time " + std::to_string(vt) + ")");

    stats.worst_bound = std::max(stats.worst_bound, vb);
    stats.worst_space = std::max(stats.worst_space, vs);
    stats.worst_time = std::max(stats.worst_time, vt);
    std::swap(state, candidate);
    ++stats.accepted;
    dt *= 2.0;

    if (opts.on_snapshot && opts.snapshot_interval > 0.0 && state.t >= next_snapshot) {
      opts.on_snapshot(state);
      next_snapshot += opts.snapshot_interval;
    }
    if (stats.accepted % opts.residual_every == 0) {
      residual = stepper.residual(state);
      trace.emplace_back(state.t, residual);
      if (!std::isfinite(residual)) throw NumericalError("non-finite residual");
    }
  }

  std::optional<FrontEstimate> front;
  try {
    front = front_position(state, model.A_max());
  } catch (const StructureError&) {
    if (stats.monotone_mode) throw;
  }
  return {std::move(state), eps, residual, stats.accepted, front, stats, std::move(trace)};
}

}  // namespace frontier
