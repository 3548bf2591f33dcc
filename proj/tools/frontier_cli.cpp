// frontier: command-line driver for the boundary-formation solvers.
//
// Exit codes: 0 ok, 1 config/usage error, 2 hypothesis failure or x outside
// the bistable interval, 3 solver did not converge, 4 grid too coarse.

#include <CLI11.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "frontier/frontier.hpp"
#include "frontier/io/config.hpp"
#include "frontier/io/csv.hpp"

namespace fs = std::filesystem;
using namespace frontier;

namespace {

enum Exit { kOk = 0, kUsage = 1, kHypothesis = 2, kNonConvergence = 3, kGrid = 4 };

int log_level() {
  const char* v = std::getenv("FRONTIER_LOG");
  if (!v) return 1;
  const std::string s = v;
  if (s == "quiet" || s == "0" || s == "error") return 0;
  if (s == "debug" || s == "2") return 2;
  return 1;
}

void info(const std::string& msg) {
  if (log_level() >= 1) std::cerr << "[frontier] " << msg << '\n';
}
void debug(const std::string& msg) {
  if (log_level() >= 2) std::cerr << "[frontier:debug] " << msg << '\n';
}

struct Globals {
  std::string config;
  std::optional<std::string> out;
  std::optional<std::uint64_t> seed;
  std::optional<unsigned> threads;
  bool force = false;
  bool large_grid = false;
};

struct Context {
  io::RunConfig cfg;
  CompetitionModel model;
  fs::path out;
  bool want_csv, want_svg;
};

Context load(const Globals& g) {
  auto cfg = io::load_config(g.config);
  if (g.seed) cfg.solver.seed = *g.seed;
  if (g.threads) cfg.solver.threads = *g.threads;
  if (g.large_grid) cfg.solver.large_grid = true;
  if (g.out) cfg.output.dir = *g.out;
  auto has = [&](const char* f) {
    return std::find(cfg.output.formats.begin(), cfg.output.formats.end(), f) !=
           cfg.output.formats.end();
  };
  const bool csv = has("csv"), svg = has("svg");
  CompetitionModel model = cfg.model.build();
  fs::path out(cfg.output.dir);
  return {std::move(cfg), std::move(model), std::move(out), csv, svg};
}

std::string kv(const std::string& k, double v) { return k + " = " + io::format_double(v) + "\n"; }
std::string kv(const std::string& k, const std::string& v) { return k + " = " + v + "\n"; }

void require_hypotheses(const CompetitionModel& m, bool force) {
  const auto rep = verify_hypotheses(m);
  if (rep.all_passed()) return;
  std::string failed;
  for (const auto& c : rep.checks)
    if (!c.passed) failed += std::string(failed.empty() ? "" : ", ") + to_string(c.id);
  if (force) {
    info("hypotheses failed (" + failed + "); continuing because of --force");
    return;
  }
  throw HypothesisViolation("hypotheses failed: " + failed + " (use --force to run anyway)");
}

WaveOptions wave_options(const io::WaveConfig& w) {
  WaveOptions o;
  if (w.L) o.L = *w.L;
  if (w.m) {
    const double L = w.L ? *w.L : 50.0;
    o.dy = 2.0 * L / static_cast<double>(*w.m - 1);
  }
  return o;
}

std::vector<double> map_points(const CompetitionModel& m, const io::WaveConfig& w) {
  if (!w.xs.empty()) return w.xs;
  const auto iv = find_bistable_interval(m);
  std::vector<double> xs;
  for (int k = 1; k <= 9; ++k) xs.push_back(iv.x_b + iv.width() * k / 10.0);
  return xs;
}

// ------------------------------------------------------------ commands

int cmd_check(const Globals& g) {
  const auto ctx = load(g);
  const auto rep = verify_hypotheses(ctx.model);
  for (const auto& c : rep.checks) {
    std::cout << (c.passed ? "PASS " : "FAIL ") << to_string(c.id);
    if (!c.passed) {
      std::cout << ": " << c.detail;
      if (c.first_violation) std::cout << " (first at x=" << *c.first_violation << ")";
    }
    std::cout << '\n';
  }
  if (rep.all_passed()) {
    const auto iv = find_bistable_interval(ctx.model);
    std::cout << "bistable interval: (" << io::format_double(iv.x_b) << ", "
              << io::format_double(iv.x_a) << ")\n";
    return kOk;
  }
  return kHypothesis;
}

Grid1D steady_grid(const io::SolverConfig& s, double eps) {
  if (eps == 0.0) return Grid1D(s.n.value_or(1001));
  const std::size_t need = required_nodes(eps);
  if (s.n) {
    const Grid1D grid(*s.n);
    if (!grid_resolves(grid, eps))
      throw GridResolutionError("n = " + std::to_string(*s.n) + " too small for eps = " +
                                    io::format_double(eps) + "; need n >= " + std::to_string(need),
                                need);
    return grid;
  }
  if (eps < 1e-5 * (1 - 1e-12) && !s.large_grid)
    throw GridResolutionError("eps below 1e-5 needs n = " + std::to_string(need) +
                                  "; pass --large-grid or set n explicitly",
                              need);
  return Grid1D(need);
}

int cmd_steady(const Globals& g) {
  const auto ctx = load(g);
  const auto& s = ctx.cfg.solver;
  if (!s.eps) throw io::ConfigError("[solver] eps is required for steady", 0, 0);
  const double eps = *s.eps;
  require_hypotheses(ctx.model, g.force);
  const Grid1D grid = steady_grid(s, eps);
  info("steady: eps=" + io::format_double(eps) + " n=" + std::to_string(grid.n));

  SteadyOptions opts;
  opts.strict = false;  // checked above, honouring --force
  opts.max_steps = s.max_steps;
  if (s.dt) opts.dt_initial = *s.dt;
  const auto init = s.init == "monotone_ramp" ? InitialCondition::monotone_ramp()
                                              : InitialCondition::paper_corner();
  const auto st = run_to_steady(ctx.model, eps, grid, init, s.tol, opts);
  debug("steady: " + std::to_string(st.iterations) + " steps, residual " +
        io::format_double(st.residual));

  io::CsvWriter csv({"x", "A", "B", "phi_A", "phi_B", "residual_A", "residual_B"});
  std::optional<WkbField> w;
  if (eps > 0.0) w = wkb_transform(st.state, ctx.model, eps, true);
  for (std::size_t i = 0; i < grid.n; ++i) {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    csv.row({grid.x(i), st.state.A[i], st.state.B[i], w ? w->phi_A[i] : nan, w ? w->phi_B[i] : nan,
             w ? w->residual_A[i] : nan, w ? w->residual_B[i] : nan});
  }
  std::string summary = kv("eps", eps) + kv("n", std::to_string(grid.n));
  if (st.front) {
    summary += kv("x_star_eps", st.front->x_star_eps) + kv("x_star_cubic", st.front->x_star_cubic) +
               kv("width", st.front->width);
  } else {
    summary += kv("x_star_eps", "none");
  }
  summary += kv("residual", st.residual) + kv("iterations", std::to_string(st.iterations)) +
             kv("t_final", st.state.t) + kv("A_at_0", st.state.A.front()) +
             kv("B_at_1", st.state.B.back()) +
             kv("rejected_steps", std::to_string(st.monitors.rejected)) +
             kv("worst_bound_violation", st.monitors.worst_bound) +
             kv("worst_space_violation", st.monitors.worst_space) +
             kv("worst_time_violation", st.monitors.worst_time);
  if (w && w->any_floored()) summary += kv("wkb_floored_nodes", std::to_string(w->floored));

  if (ctx.want_csv) csv.save(ctx.out / "steady.csv");
  io::write_file_atomic(ctx.out / "summary.txt", summary);
  std::cout << summary;
  return kOk;
}

int cmd_wavespeed(const Globals& g, std::optional<double> x, bool map, bool oracle) {
  const auto ctx = load(g);
  if (x.has_value() == map) throw io::ConfigError("wavespeed needs exactly one of --x or --map", 0, 0);
  const auto iv = find_bistable_interval(ctx.model);
  const auto wo = wave_options(ctx.cfg.wave);
  std::vector<std::string> header{"x", "c", "converged"};
  if (oracle) header.push_back("c_oracle");
  io::CsvWriter csv(header);

  auto oracle_speed = [&](const WaveResult& r) {
    auto p = make_wave_problem(ctx.model, r.x, wo);
    p.L = r.L;
    p.m = r.y.size();
    return front_tracking_speed(p, ctx.cfg.wave.oracle_horizon).c;
  };
  auto emit = [&](const WaveResult& r) {
    std::vector<double> row{r.x, r.c, r.converged ? 1.0 : 0.0};
    if (oracle) row.push_back(oracle_speed(r));
    csv.row(row);
    for (const auto& wmsg : r.warnings) info("x=" + io::format_double(r.x) + ": " + wmsg);
  };

  if (x) {
    if (!iv.contains(*x))
      throw DomainError("x = " + io::format_double(*x) + " is outside the bistable interval (" +
                        io::format_double(iv.x_b) + ", " + io::format_double(iv.x_a) + ")");
    const auto r = speed_map(ctx.model, {*x}, {wo, 0.0}).front().wave;
    emit(r);
    io::CsvWriter prof({"y", "a", "b"});
    for (std::size_t j = 0; j < r.y.size(); ++j) prof.row({r.y[j], r.a[j], r.b[j]});
    if (ctx.want_csv) {
      csv.save(ctx.out / "wavespeed.csv");
      prof.save(ctx.out / "wave_profile.csv");
    }
  } else {
    for (const auto& s : speed_map(ctx.model, map_points(ctx.model, ctx.cfg.wave), {wo, 0.0}))
      emit(s.wave);
    if (ctx.want_csv) csv.save(ctx.out / "speed_map.csv");
  }
  std::cout << csv.str();
  return kOk;
}

int cmd_locate(const Globals& g) {
  const auto ctx = load(g);
  const auto wo = wave_options(ctx.cfg.wave);
  const auto b = locate_boundary(ctx.model, ctx.cfg.wave.tol_x, {wo, 0.0});
  const std::string summary =
      kv("x_star", b.x_star) + kv("status", to_string(b.status)) + kv("bracket_lo", b.bracket_lo) +
      kv("bracket_hi", b.bracket_hi) + kv("c_lo", b.c_lo) + kv("c_hi", b.c_hi) +
      kv("iterations", std::to_string(b.iterations)) + kv("x_b", b.interval.x_b) +
      kv("x_a", b.interval.x_a);
  io::write_file_atomic(ctx.out / "locate.txt", summary);
  std::cout << summary;
  return kOk;
}

int cmd_sweep(const Globals& g) {
  const auto ctx = load(g);
  const auto& s = ctx.cfg.solver;
  if (s.eps_list.empty()) throw io::ConfigError("[solver] eps_list is required for sweep", 0, 0);
  require_hypotheses(ctx.model, g.force);
  for (double eps : s.eps_list) (void)steady_grid(s, eps);  // refuse before any work

  SweepOptions opts;
  opts.tol = s.tol;
  opts.threads = s.threads;
  opts.init = s.init == "monotone_ramp" ? InitialCondition::monotone_ramp()
                                        : InitialCondition::paper_corner();
  opts.steady.strict = false;
  opts.steady.max_steps = s.max_steps;
  opts.tol_x = ctx.cfg.wave.tol_x;
  opts.n = s.n;
  const auto rep = epsilon_sweep(ctx.model, s.eps_list, opts);

  io::CsvWriter csv({"eps", "n", "x_star_eps", "x_star_cubic", "width", "max_dA_dx", "residual",
                     "iterations", "gap", "ok"});
  std::string summary = kv("x_star_wave", rep.x_star_wave) +
                        kv("wave_status", to_string(rep.wave_status)) +
                        kv("width_slope", rep.width_slope ? io::format_double(*rep.width_slope)
                                                          : std::string("none"));
  for (const auto& e : rep.entries) {
    csv.row({e.eps, static_cast<double>(e.n), e.x_star_eps, e.x_star_cubic, e.width, e.max_dA_dx,
             e.residual, static_cast<double>(e.iterations), e.gap, e.ok ? 1.0 : 0.0});
    summary += "\n" + kv("eps", e.eps) + kv("x_star_eps", e.x_star_eps) + kv("width", e.width) +
               kv("gap", e.gap) + kv("status", e.ok ? "ok" : "failed: " + e.error);
    info("eps=" + io::format_double(e.eps) + (e.ok ? " ok" : " failed: " + e.error) + " (" +
         std::to_string(e.wall_time) + " s)");
  }
  if (ctx.want_csv) csv.save(ctx.out / "sweep.csv");
  io::write_file_atomic(ctx.out / "sweep_summary.txt", summary);
  std::cout << summary;
  return rep.failures() == rep.entries.size() ? kNonConvergence : kOk;
}

int cmd_figure2(const Globals& g) {
  const auto ctx = load(g);
  const auto& s = ctx.cfg.solver;
  const double eps = s.eps.value_or(1e-5);
  Figure2Options fo;
  fo.seed_1 = s.seed;
  fo.seed_2 = s.seed_2.value_or(s.seed + 1);
  fo.n = s.n;
  fo.large_grid = s.large_grid;
  fo.tol = s.tol;
  fo.threads = s.threads;
  const auto rep = reproduce_figure2(ctx.model, eps, fo);

  io::CsvWriter zc({"x", "A_1", "B_1", "outcome_1", "A_2", "B_2", "outcome_2"});
  io::CsvWriter sc({"x", "A_1", "B_1", "A_2", "B_2"});
  for (std::size_t i = 0; i < rep.grid.n; ++i) {
    const auto& a = rep.zero_1.cells[i];
    const auto& b = rep.zero_2.cells[i];
    zc.row_strings({io::format_double(a.x), io::format_double(a.A), io::format_double(a.B),
                    to_string(a.outcome), io::format_double(b.A), io::format_double(b.B),
                    to_string(b.outcome)});
    sc.row({rep.grid.x(i), rep.steady_1.state.A[i], rep.steady_1.state.B[i],
            rep.steady_2.state.A[i], rep.steady_2.state.B[i]});
  }
  const std::string summary =
      kv("eps", eps) + kv("n", std::to_string(rep.grid.n)) +
      kv("seed_1", std::to_string(fo.seed_1)) + kv("seed_2", std::to_string(fo.seed_2)) +
      kv("differing_cells", std::to_string(rep.differing_cells)) +
      kv("max_difference", rep.max_difference) + kv("x_star_wave", rep.x_star_wave) +
      kv("x_star_eps", rep.steady_1.front->x_star_eps) + kv("front_error", rep.front_error) +
      kv("front_tolerance", rep.front_tolerance);
  if (ctx.want_csv) {
    zc.save(ctx.out / "figure2_zero.csv");
    sc.save(ctx.out / "figure2_steady.csv");
  }
  if (ctx.want_svg) {
    io::write_file_atomic(ctx.out / "figure2_zero.svg", rep.svg_zero);
    io::write_file_atomic(ctx.out / "figure2_steady.svg", rep.svg_steady);
  }
  io::write_file_atomic(ctx.out / "figure2_summary.txt", summary);
  std::cout << summary;
  return kOk;
}

int cmd_zero(const Globals& g) {
  const auto ctx = load(g);
  const auto& s = ctx.cfg.solver;
  ZeroDiffusionOptions zo;
  zo.threads = s.threads;
  const auto rep = zero_diffusion_demo(ctx.model, s.seed, s.n.value_or(201), zo);
  io::CsvWriter csv({"x", "A0", "B0", "A", "B", "outcome", "bistable"});
  for (const auto& c : rep.cells)
    csv.row_strings({io::format_double(c.x), io::format_double(c.A0), io::format_double(c.B0),
                     io::format_double(c.A), io::format_double(c.B), to_string(c.outcome),
                     c.bistable ? "1" : "0"});
  std::string summary = kv("seed", std::to_string(rep.seed)) +
                        kv("cells", std::to_string(rep.cells.size())) +
                        kv("x_b", rep.interval.x_b) + kv("x_a", rep.interval.x_a);
  for (Outcome o : {Outcome::e_A, Outcome::e_B, Outcome::origin, Outcome::saddle, Outcome::unresolved})
    summary += kv(std::string("count_") + to_string(o), std::to_string(rep.count(o)));
  summary += kv("bistable_split", rep.split_in_bistable() ? "true" : "false");
  if (ctx.want_csv) csv.save(ctx.out / "zero_diffusion.csv");
  io::write_file_atomic(ctx.out / "zero_diffusion_summary.txt", summary);
  std::cout << summary;
  return kOk;
}

template <class F>
int guarded(F&& f) {
  try {
    return f();
  } catch (const io::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kUsage;
  } catch (const HypothesisViolation& e) {
    std::cerr << "hypothesis violation: " << e.what() << '\n';
    return kHypothesis;
  } catch (const DomainError& e) {
    std::cerr << "domain error: " << e.what() << '\n';
    return kHypothesis;
  } catch (const GridResolutionError& e) {
    std::cerr << "grid too coarse: " << e.what() << "\nrequired n = " << e.required_n() << '\n';
    return kGrid;
  } catch (const NonConvergence& e) {
    std::cerr << "no convergence: " << e.what() << "\nlast residual = "
              << io::format_double(e.last_residual()) << '\n';
    const auto& tr = e.trace();
    const std::size_t from = tr.size() > 20 ? tr.size() - 20 : 0;
    if (!tr.empty()) std::cerr << "residual trace (t, residual):\n";
    for (std::size_t i = from; i < tr.size(); ++i)
      std::cerr << "  " << io::format_double(tr[i].first) << ", "
                << io::format_double(tr[i].second) << '\n';
    return kNonConvergence;
  } catch (const InvariantError& e) {
    std::cerr << "invariant violated: " << e.what() << '\n';
    return kNonConvergence;
  } catch (const StructureError& e) {
    std::cerr << "unexpected solution structure: " << e.what() << '\n';
    return kNonConvergence;
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kNonConvergence;
  } catch (const DomainTooSmall& e) {
    std::cerr << "wave domain too small: " << e.what() << '\n';
    return kNonConvergence;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Boundary formation in two-species competition with morphogen gradients"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--config", g.config, "Run configuration file")->required();
  app.add_option("--out", g.out, "Output directory (overrides [output] dir)");
  app.add_option("--seed", g.seed, "Random seed (overrides [solver] seed)");
  app.add_option("--threads", g.threads, "Worker threads for sweep / zero-diffusion")
      ->check(CLI::PositiveNumber);
  app.add_flag("--force", g.force, "Run even when hypotheses fail");
  app.add_flag("--large-grid", g.large_grid, "Allow eps below 1e-5 with auto grids");

  auto* check = app.add_subcommand("check", "Verify the structural hypotheses");
  auto* steady = app.add_subcommand("steady", "Integrate to the steady state");
  auto* wave = app.add_subcommand("wavespeed", "Traveling-wave speed at one x or over a map");
  std::optional<double> wx;
  bool wmap = false, woracle = false;
  wave->add_option("--x", wx, "Frozen position");
  wave->add_flag("--map", wmap, "Speed over [wave] xs (default 9 interior points)");
  wave->add_flag("--oracle", woracle, "Add the front-tracking speed as a cross-check");
  auto* locate = app.add_subcommand("locate", "Zero of the wave speed");
  auto* sweep = app.add_subcommand("sweep", "Steady states over [solver] eps_list");
  auto* fig = app.add_subcommand("figure2", "Zero vs small diffusion demonstration");
  auto* zero = app.add_subcommand("zero-diffusion", "Per-node limits from random starts");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  return guarded([&] {
    if (*check) return cmd_check(g);
    if (*steady) return cmd_steady(g);
    if (*wave) return cmd_wavespeed(g, wx, wmap, woracle);
    if (*locate) return cmd_locate(g);
    if (*sweep) return cmd_sweep(g);
    if (*fig) return cmd_figure2(g);
    if (*zero) return cmd_zero(g);
    return static_cast<int>(kUsage);
  });
}
