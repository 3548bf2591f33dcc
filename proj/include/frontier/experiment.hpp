#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "frontier/errors.hpp"
#include "frontier/front.hpp"
#include "frontier/grid.hpp"
#include "frontier/io/svg.hpp"
#include "frontier/model.hpp"
#include "frontier/parabolic.hpp"
#include "frontier/parallel.hpp"
#include "frontier/wave.hpp"

namespace frontier {

// ---------------------------------------------------------------- sweep

struct SweepEntry {
  double eps;
  std::size_t n = 0;
  bool ok = false;
  std::string error;          // set when !ok
  double x_star_eps = NAN;    // linear crossing
  double x_star_cubic = NAN;  // cubic crossing
  double width = NAN;
  double max_dA_dx = NAN;
  double residual = NAN;
  std::size_t iterations = 0;
  double wall_time = 0.0;     // seconds; not written to CSV
  double gap = NAN;           // |x_star_cubic - x_star_wave|
};

struct SweepReport {
  std::vector<SweepEntry> entries;  // decreasing eps
  double x_star_wave;
  BoundaryStatus wave_status;
  std::optional<double> width_slope;  // d log(width) / d log(eps) over successful entries

  std::size_t failures() const {
    return static_cast<std::size_t>(
        std::count_if(entries.begin(), entries.end(), [](const auto& e) { return !e.ok; }));
  }
};

struct SweepOptions {
  double tol = 1e-8;
  unsigned threads = 1;
  InitialCondition init = InitialCondition::paper_corner();
  SteadyOptions steady{};
  double tol_x = 1e-7;            // boundary location tolerance
  std::optional<std::size_t> n;   // fixed grid; default refines per eps
};

/// Least-squares slope of log(y) against log(x).
inline std::optional<double> loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() < 2) return std::nullopt;
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += std::log(x[i]);
    my += std::log(y[i]);
  }
  mx /= static_cast<double>(x.size());
  my /= static_cast<double>(x.size());
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (std::log(x[i]) - mx) * (std::log(x[i]) - mx);
    sxy += (std::log(x[i]) - mx) * (std::log(y[i]) - my);
  }
  if (sxx == 0.0) return std::nullopt;
  return sxy / sxx;
}

inline double max_abs_derivative(const std::vector<double>& u, double h) {
  double m = 0.0;
  for (std::size_t i = 0; i + 1 < u.size(); ++i) m = std::max(m, std::fabs(u[i + 1] - u[i]) / h);
  return m;
}

/**
 * Steady states along a decreasing list of diffusion scales, each on a grid
 * with h <= sqrt(eps)/10, compared against the wave-predicted boundary.
 * A failing eps is recorded in its entry and the sweep carries on.
 */
inline SweepReport epsilon_sweep(const CompetitionModel& model, const std::vector<double>& eps_list,
                                 const SweepOptions& opts = {}) {
  if (eps_list.empty()) throw DomainError("eps_list is empty");
  for (std::size_t i = 0; i < eps_list.size(); ++i) {
    if (!(eps_list[i] > 0.0)) throw DomainError("eps values must be positive");
    if (i > 0 && !(eps_list[i] < eps_list[i - 1]))
      throw DomainError("eps_list must be strictly decreasing");
  }
  const auto loc = locate_boundary(model, opts.tol_x);

  SweepReport rep{std::vector<SweepEntry>(eps_list.size()), loc.x_star, loc.status, std::nullopt};
  parallel_for(eps_list.size(), opts.threads, [&](std::size_t i) {
    SweepEntry& e = rep.entries[i];
    e.eps = eps_list[i];
    const auto t0 = std::chrono::steady_clock::now();
    try {
      const Grid1D grid = opts.n ? Grid1D(*opts.n) : auto_grid(e.eps);
      e.n = grid.n;
      if (!grid_resolves(grid, e.eps))
        throw GridResolutionError("grid too coarse for eps", required_nodes(e.eps));
      const auto st = run_to_steady(model, e.eps, grid, opts.init, opts.tol, opts.steady);
      if (!st.front) throw StructureError("steady state has no single A = B crossing");
      e.x_star_eps = st.front->x_star_eps;
      e.x_star_cubic = st.front->x_star_cubic;
      e.width = st.front->width;
      e.max_dA_dx = max_abs_derivative(st.state.A, grid.h);
      e.residual = st.residual;
      e.iterations = st.iterations;
      e.gap = std::fabs(e.x_star_cubic - loc.x_star);
      e.ok = true;
    } catch (const std::exception& ex) {
      e.ok = false;
      e.error = ex.what();
    }
    e.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  });

  std::vector<double> es, ws;
  for (const auto& e : rep.entries)
    if (e.ok && e.width > 0.0) {
      es.push_back(e.eps);
      ws.push_back(e.width);
    }
  rep.width_slope = loglog_slope(es, ws);
  return rep;
}

// ------------------------------------------------------- classification

enum class Scenario { a_sharp_interface, b_dead_zone, c_coexistence_tail, inconclusive };

inline const char* to_string(Scenario s) {
  switch (s) {
    case Scenario::a_sharp_interface: return "a_sharp_interface";
    case Scenario::b_dead_zone: return "b_dead_zone";
    case Scenario::c_coexistence_tail: return "c_coexistence_tail";
    case Scenario::inconclusive: return "inconclusive";
  }
  return "?";
}

struct Span {
  double lo, hi;
  bool empty() const { return hi < lo; }
};

struct ScenarioClassification {
  Scenario verdict = Scenario::inconclusive;
  Span I_b{1, 0};          // where B ~ 0; [0, x*] for a sharp interface
  Span I_a{1, 0};          // where A ~ 0; [x*, 1] for a sharp interface
  Span raw_I_b{1, 0};      // leading run of nodes with B below the cutoff
  Span raw_I_a{1, 0};      // trailing run of nodes with A below the cutoff
  double x_star = NAN;     // midpoint between the two supports
  double overlap = 0.0;    // extent where both species are above the cutoff
  double dead_band = 0.0;  // extent where both are below it
  double tolerance = 0.0;  // how far apart the supports may be and still abut
  double fit_error_A = NAN;  // max |A - F_A|/F_A on [0, x* - 5 sqrt(eps)]
  double fit_error_B = NAN;  // max |B - F_B|/F_B on [x* + 5 sqrt(eps), 1]
  bool inclusions_hold = false;  // [0,x_b) in I_b and (x_a,1] in I_a
  std::vector<std::string> diagnostics;
};

struct ClassifyOptions {
  double threshold = 0.01;   // fraction of F_A(0)
  double fit_tolerance = 0.05;
  double collar = 5.0;       // in units of sqrt(eps)
  double abut = 10.0;        // supports abut when within abut*sqrt(eps) + 2h
};

/**
 * Reads the geometry of a small-eps steady state. A node counts as occupied
 * by a species when its concentration exceeds threshold*F_A(0).
 *   dead zone:    some band of width > 2h where neither species is present
 *   coexistence:  both present over more than the abut tolerance
 *   sharp:        neither, the profiles match F_A / F_B away from the front,
 *                 and the bistable-interval inclusions hold
 * Anything else is inconclusive, with the failing checks listed.
 */
inline ScenarioClassification classify_limit(const SteadyState& steady, const CompetitionModel& model,
                                             const ClassifyOptions& opts = {}) {
  ScenarioClassification out;
  const auto& s = steady.state;
  const std::size_t n = s.grid.n;
  const double h = s.grid.h;
  const double cut = opts.threshold * model.A_max();
  const double se = std::sqrt(std::max(steady.eps, 0.0));
  out.tolerance = opts.abut * se + 2.0 * h;
  if (steady.eps > 1e-3) out.diagnostics.push_back("eps above 1e-3; limit geometry unreliable");

  std::vector<bool> hasA(n), hasB(n);
  for (std::size_t i = 0; i < n; ++i) {
    hasA[i] = s.A[i] > cut;
    hasB[i] = s.B[i] > cut;
  }
  // Longest runs give extents; a run of k nodes spans (k-1)h, isolated nodes count as h.
  auto band = [&](auto pred) {
    double best = 0.0;
    std::size_t run = 0;
    for (std::size_t i = 0; i < n; ++i) {
      run = pred(i) ? run + 1 : 0;
      if (run) best = std::max(best, static_cast<double>(std::max<std::size_t>(run - 1, 1)) * h);
    }
    return best;
  };
  out.overlap = band([&](std::size_t i) { return hasA[i] && hasB[i]; });
  out.dead_band = band([&](std::size_t i) { return !hasA[i] && !hasB[i]; });

  std::size_t ib = 0;
  while (ib < n && !hasB[ib]) ++ib;
  if (ib > 0) out.raw_I_b = {0.0, s.grid.x(ib - 1)};
  std::size_t ia = n;
  while (ia > 0 && !hasA[ia - 1]) --ia;
  if (ia < n) out.raw_I_a = {s.grid.x(ia), 1.0};
  out.I_b = out.raw_I_b;
  out.I_a = out.raw_I_a;

  if (out.dead_band > 2.0 * h) {
    out.verdict = Scenario::b_dead_zone;
    out.diagnostics.push_back("band of width " + std::to_string(out.dead_band) +
                              " with neither species present");
    return out;
  }
  if (out.overlap > out.tolerance) {
    out.verdict = Scenario::c_coexistence_tail;
    out.diagnostics.push_back("both species present over width " + std::to_string(out.overlap));
    return out;
  }
  if (out.I_b.empty() || out.I_a.empty()) {
    out.diagnostics.push_back("one species occupies the whole domain");
    return out;
  }
  // Supports: A lives on [0, x(ia-1)], B on [x(ib), 1].
  const double endA = s.grid.x(ia - 1), startB = s.grid.x(ib);
  out.x_star = 0.5 * (endA + startB);
  if (std::fabs(endA - startB) > out.tolerance) {
    out.diagnostics.push_back("supports do not abut");
    return out;
  }

  const double xl = out.x_star - opts.collar * se, xr = out.x_star + opts.collar * se;
  out.fit_error_A = 0.0;
  out.fit_error_B = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double x = s.grid.x(i);
    if (x <= xl) out.fit_error_A = std::max(out.fit_error_A, std::fabs(s.A[i] / model.F_A()(x) - 1.0));
    if (x >= xr) out.fit_error_B = std::max(out.fit_error_B, std::fabs(s.B[i] / model.F_B()(x) - 1.0));
  }

  out.inclusions_hold = true;
  try {
    const auto iv = find_bistable_interval(model);
    for (std::size_t i = 0; i < n; ++i) {
      const double x = s.grid.x(i);
      if (x < iv.x_b - out.tolerance && hasB[i]) out.inclusions_hold = false;
      if (x > iv.x_a + out.tolerance && hasA[i]) out.inclusions_hold = false;
    }
  } catch (const HypothesisViolation& e) {
    out.inclusions_hold = false;
    out.diagnostics.push_back(e.what());
  }

  bool good = true;
  if (out.fit_error_A > opts.fit_tolerance) {
    good = false;
    out.diagnostics.push_back("A deviates from F_A by " + std::to_string(out.fit_error_A));
  }
  if (out.fit_error_B > opts.fit_tolerance) {
    good = false;
    out.diagnostics.push_back("B deviates from F_B by " + std::to_string(out.fit_error_B));
  }
  if (!out.inclusions_hold) {
    good = false;
    out.diagnostics.push_back("species present outside its bistable-interval side");
  }
  if (good) {
    // The cutoff edges sit a few sqrt(eps) inside the front because of the
    // exponential tails; the limit supports meet at the front itself.
    out.verdict = Scenario::a_sharp_interface;
    out.I_b = {0.0, out.x_star};
    out.I_a = {out.x_star, 1.0};
  }
  return out;
}

// ------------------------------------------------------- zero diffusion

/// Uniform double in [0, 1) from the top 53 bits; identical on every platform.
inline double unit_uniform(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

enum class Outcome { e_A, e_B, origin, saddle, unresolved };

inline const char* to_string(Outcome o) {
  switch (o) {
    case Outcome::e_A: return "e_A";
    case Outcome::e_B: return "e_B";
    case Outcome::origin: return "origin";
    case Outcome::saddle: return "saddle";
    case Outcome::unresolved: return "unresolved";
  }
  return "?";
}

struct ZeroDiffusionCell {
  double x, A0, B0, A, B;
  Outcome outcome;
  bool bistable;  // x in (x_b, x_a)
};

struct ZeroDiffusionReport {
  std::uint64_t seed;
  BistableInterval interval;
  std::vector<ZeroDiffusionCell> cells;

  std::size_t count(Outcome o, bool bistable_only = false) const {
    return static_cast<std::size_t>(std::count_if(cells.begin(), cells.end(), [&](const auto& c) {
      return c.outcome == o && (!bistable_only || c.bistable);
    }));
  }
  /// Both stable states occur inside the bistable interval.
  bool split_in_bistable() const {
    return count(Outcome::e_A, true) > 0 && count(Outcome::e_B, true) > 0;
  }
};

/// Closest equilibrium within `tol` (max norm), or unresolved.
inline Outcome nearest_equilibrium(const CompetitionModel& m, double x, double A, double B,
                                   double tol = 1e-6) {
  const auto set = equilibria(m, x);
  auto dist = [&](const Equilibrium& e) { return std::max(std::fabs(A - e.A), std::fabs(B - e.B)); };
  Outcome best = Outcome::unresolved;
  double bd = tol;
  auto consider = [&](const Equilibrium& e, Outcome o) {
    const double d = dist(e);
    if (d <= bd) {
      bd = d;
      best = o;
    }
  };
  consider(set.e_A, Outcome::e_A);
  consider(set.e_B, Outcome::e_B);
  consider(set.origin, Outcome::origin);
  if (set.saddle_present()) consider(set.saddle->point, Outcome::saddle);
  return best;
}

/// Independent uniform draws in [0,F_A(0)] x [0,F_B(1)] per node, A then B.
inline std::pair<std::vector<double>, std::vector<double>> random_state(const CompetitionModel& m,
                                                                        std::size_t n,
                                                                        std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<double> A(n), B(n);
  for (std::size_t i = 0; i < n; ++i) {
    A[i] = unit_uniform(rng) * m.A_max();
    B[i] = unit_uniform(rng) * m.B_max();
  }
  return {std::move(A), std::move(B)};
}

struct ZeroDiffusionOptions {
  double tol = 1e-10;  // kinetic residual at which a node counts as settled
  unsigned threads = 1;
  std::size_t max_steps = 10'000'000;
};

/// eps = 0: every node evolves on its own from a random start.
inline ZeroDiffusionReport zero_diffusion_demo(const CompetitionModel& model, std::uint64_t seed,
                                               std::size_t n_cells,
                                               const ZeroDiffusionOptions& opts = {}) {
  if (n_cells < 3) throw DomainError("zero-diffusion demo needs at least 3 cells");
  const Grid1D grid(n_cells);
  auto [A0, B0] = random_state(model, n_cells, seed);
  ZeroDiffusionReport rep{seed, find_bistable_interval(model), std::vector<ZeroDiffusionCell>(n_cells)};
  parallel_for(n_cells, opts.threads, [&](std::size_t i) {
    const double x = grid.x(i);
    const auto lim = integrate_pointwise(model.F_A()(x), model.F_B()(x), model.s_A(), model.s_B(),
                                         A0[i], B0[i], opts.tol, 1e-3, opts.max_steps);
    const Outcome o = lim.converged ? nearest_equilibrium(model, x, lim.A, lim.B) : Outcome::unresolved;
    rep.cells[i] = {x, A0[i], B0[i], lim.A, lim.B, o, rep.interval.contains(x)};
  });
  return rep;
}

// ------------------------------------------------------------- figure 2

struct Figure2Options {
  std::uint64_t seed_1 = 1;
  std::uint64_t seed_2 = 2;
  std::optional<std::size_t> n;  // default: auto grid for eps_small
  bool large_grid = false;       // permit eps_small below 1e-5
  double tol = 1e-8;
  double agreement = 1e-3;       // max-norm distance between the two diffused runs
  unsigned threads = 1;
};

struct Figure2Report {
  double eps;
  Grid1D grid;
  ZeroDiffusionReport zero_1, zero_2;
  std::size_t differing_cells;  // bistable cells whose outcome depends on the seed
  SteadyState steady_1, steady_2;
  double max_difference;        // between the two diffused runs
  double x_star_wave;
  double front_tolerance;       // 5 sqrt(eps) + 2h
  double front_error;           // |x*_eps - x_star_wave| of the first run
  std::string svg_zero, svg_steady;

  bool patchworks_differ() const { return differing_cells > 0; }
  bool seeds_agree(double tol) const { return max_difference <= tol; }
  bool front_matches() const { return front_error <= front_tolerance; }
};

/// Sorting the draws (A decreasing, B increasing) gives a monotone start.
inline StateField monotone_random_state(const CompetitionModel& m, const Grid1D& g,
                                        std::uint64_t seed) {
  auto [A, B] = random_state(m, g.n, seed);
  std::sort(A.begin(), A.end(), std::greater<>());
  std::sort(B.begin(), B.end());
  return {g, std::move(A), std::move(B), 0.0};
}

/**
 * Paired demonstration: at eps = 0 two seeds leave different per-node
 * patchworks in the bistable interval; with diffusion eps_small the same
 * seeds (sorted into monotone starts) settle onto one monotone state whose
 * front sits at the wave-predicted boundary.
 */
inline Figure2Report reproduce_figure2(const CompetitionModel& model, double eps_small,
                                       const Figure2Options& opts = {}) {
  if (!(eps_small > 0.0)) throw DomainError("eps_small must be positive");
  const auto report = verify_hypotheses(model);
  if (!report.all_passed()) {
    std::string failed;
    for (const auto& c : report.checks)
      if (!c.passed) failed += std::string(failed.empty() ? "" : ", ") + to_string(c.id);
    throw HypothesisViolation("hypotheses failed: " + failed);
  }
  const std::size_t need = required_nodes(eps_small);
  if (eps_small < 1e-5 * (1 - 1e-12) && !opts.large_grid)
    throw GridResolutionError("eps below 1e-5 needs the large-grid option (n = " +
                                  std::to_string(need) + ")",
                              need);
  const Grid1D grid(opts.n.value_or(need));
  if (!grid_resolves(grid, eps_small))
    throw GridResolutionError("grid too coarse: need n >= " + std::to_string(need), need);

  ZeroDiffusionOptions zopts;
  zopts.threads = opts.threads;
  auto z1 = zero_diffusion_demo(model, opts.seed_1, grid.n, zopts);
  auto z2 = zero_diffusion_demo(model, opts.seed_2, grid.n, zopts);
  std::size_t differ = 0;
  for (std::size_t i = 0; i < grid.n; ++i)
    if (z1.cells[i].bistable && z1.cells[i].outcome != z2.cells[i].outcome) ++differ;

  SteadyOptions sopts;
  std::optional<SteadyState> s1, s2;
  const StateField init1 = monotone_random_state(model, grid, opts.seed_1);
  const StateField init2 = monotone_random_state(model, grid, opts.seed_2);
  parallel_for(2, opts.threads, [&](std::size_t k) {
    auto st = run_to_steady(model, eps_small, grid, InitialCondition::from(k == 0 ? init1 : init2),
                            opts.tol, sopts);
    (k == 0 ? s1 : s2) = std::move(st);
  });
  double diff = 0.0;
  for (std::size_t i = 0; i < grid.n; ++i)
    diff = std::max({diff, std::fabs(s1->state.A[i] - s2->state.A[i]),
                     std::fabs(s1->state.B[i] - s2->state.B[i])});

  const auto loc = locate_boundary(model, 1e-7);
  if (!s1->front) throw StructureError("diffused steady state has no single front");
  const double tol_front = 5.0 * std::sqrt(eps_small) + 2.0 * grid.h;

  std::vector<double> xs = grid.nodes();
  auto column = [&](const ZeroDiffusionReport& z, bool a) {
    std::vector<double> v(z.cells.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = a ? z.cells[i].A : z.cells[i].B;
    return v;
  };
  io::PlotSpec pz{"eps = 0: per-node limits for two seeds", "x", "concentration", 640, 400,
                  {z1.interval.x_b, z1.interval.x_a}};
  const std::string svg_zero = io::line_plot(
      pz, {{"A, seed " + std::to_string(opts.seed_1), xs, column(z1, true), "#1f77b4", true},
           {"B, seed " + std::to_string(opts.seed_1), xs, column(z1, false), "#d62728", true},
           {"A, seed " + std::to_string(opts.seed_2), xs, column(z2, true), "#17becf", true},
           {"B, seed " + std::to_string(opts.seed_2), xs, column(z2, false), "#ff7f0e", true}});
  char title[96];
  std::snprintf(title, sizeof title, "eps = %.3g: steady state from both seeds", eps_small);
  io::PlotSpec ps{title, "x", "concentration", 640, 400, {loc.x_star}};
  const std::string svg_steady = io::line_plot(
      ps, {{"A, seed " + std::to_string(opts.seed_1), xs, s1->state.A, "#1f77b4", false},
           {"B, seed " + std::to_string(opts.seed_1), xs, s1->state.B, "#d62728", false},
           {"A, seed " + std::to_string(opts.seed_2), xs, s2->state.A, "#17becf", false},
           {"B, seed " + std::to_string(opts.seed_2), xs, s2->state.B, "#ff7f0e", false}});

  const double ferr = std::fabs(s1->front->x_star_eps - loc.x_star);
  return {eps_small, grid,        std::move(z1), std::move(z2), differ,    std::move(*s1),
          std::move(*s2), diff,  loc.x_star,    tol_front,     ferr,      svg_zero,
          svg_steady};
}

}  // namespace frontier
