#include <gtest/gtest.h>

#include <atomic>
#include <cmath>
#include <stdexcept>

#include "frontier/experiment.hpp"

using namespace frontier;

TEST(Parallel, ResultsIndexedIndependentlyOfThreads) {
  std::vector<double> one(200), four(200);
  parallel_for(one.size(), 1, [&](std::size_t i) { one[i] = std::sin(i * 0.1); });
  parallel_for(four.size(), 4, [&](std::size_t i) { four[i] = std::sin(i * 0.1); });
  EXPECT_EQ(one, four);
}

TEST(Parallel, RethrowsAfterFinishingOtherWork) {
  std::atomic<int> done{0};
  EXPECT_THROW(parallel_for(50, 3,
                            [&](std::size_t i) {
                              if (i == 7) throw std::runtime_error("boom");
                              ++done;
                            }),
               std::runtime_error);
  EXPECT_EQ(done.load(), 49);
}

TEST(Sweep, LogLogSlopeOfPowerLaw) {
  std::vector<double> x{1e-2, 1e-3, 1e-4}, y;
  for (double v : x) y.push_back(3.0 * std::sqrt(v));
  EXPECT_NEAR(*loglog_slope(x, y), 0.5, 1e-12);
  EXPECT_FALSE(loglog_slope({1e-2}, {0.1}).has_value());
}

TEST(Sweep, SymmetricModelHitsTheMidpoint) {
  const auto m = reference_linear_model();
  const auto rep = epsilon_sweep(m, {1e-2, 1e-3});
  EXPECT_NEAR(rep.x_star_wave, 0.5, 1e-6);
  EXPECT_EQ(rep.wave_status, BoundaryStatus::interior);
  ASSERT_EQ(rep.failures(), 0u);
  for (const auto& e : rep.entries) {
    EXPECT_TRUE(e.ok) << e.error;
    EXPECT_EQ(e.n, required_nodes(e.eps));
    EXPECT_LT(e.gap, 2.0 * Grid1D(e.n).h);
    EXPECT_LE(e.residual, 1e-8);
    EXPECT_GT(e.width, 0.0);
  }
  // Fronts sharpen like sqrt(eps).
  ASSERT_TRUE(rep.width_slope.has_value());
  EXPECT_NEAR(*rep.width_slope, 0.5, 0.15);
  EXPECT_GT(rep.entries[1].max_dA_dx, rep.entries[0].max_dA_dx);
}

TEST(Sweep, CoarseFixedGridIsRecordedNotFatal) {
  const auto m = reference_linear_model();
  SweepOptions o;
  o.n = 101;  // resolves eps = 1e-2, not 1e-4
  const auto rep = epsilon_sweep(m, {1e-2, 1e-4}, o);
  EXPECT_EQ(rep.failures(), 1u);
  EXPECT_TRUE(rep.entries[0].ok);
  EXPECT_FALSE(rep.entries[1].ok);
  EXPECT_NE(rep.entries[1].error.find("coarse"), std::string::npos);
  EXPECT_TRUE(std::isnan(rep.entries[1].x_star_eps));
}

TEST(Sweep, GapShrinksForAsymmetricCompetition) {
  const auto m = reference_linear_model(2.0, 3.0);
  const auto rep = epsilon_sweep(m, {1e-2, 1e-3});
  ASSERT_EQ(rep.failures(), 0u);
  EXPECT_GT(rep.x_star_wave, 0.55);
  EXPECT_LE(rep.entries[1].gap, rep.entries[0].gap);
}

TEST(Sweep, RejectsBadLists) {
  const auto m = reference_linear_model();
  EXPECT_THROW(epsilon_sweep(m, {}), DomainError);
  EXPECT_THROW(epsilon_sweep(m, {1e-3, 1e-2}), DomainError);
  EXPECT_THROW(epsilon_sweep(m, {1e-2, 0.0}), DomainError);
}

namespace {

// A on [0, a_end), B on (b_start, 1], each at its carrying capacity.
SteadyState synthetic(const CompetitionModel& m, double eps, double a_end, double b_start) {
  const Grid1D g(1001);
  std::vector<double> A(g.n, 0.0), B(g.n, 0.0);
  for (std::size_t i = 0; i < g.n; ++i) {
    const double x = g.x(i);
    if (x < a_end) A[i] = m.F_A()(x);
    if (x > b_start) B[i] = m.F_B()(x);
  }
  return {StateField(g, A, B), eps, 0.0, 0, std::nullopt, {}, {}};
}

}  // namespace

TEST(Classify, GapBetweenSupportsIsDeadZone) {
  const auto m = reference_linear_model();
  const auto c = classify_limit(synthetic(m, 1e-4, 0.4, 0.6), m);
  EXPECT_EQ(c.verdict, Scenario::b_dead_zone);
  EXPECT_NEAR(c.dead_band, 0.2, 0.003);
}

TEST(Classify, WideOverlapIsCoexistence) {
  const auto m = reference_linear_model();
  const auto c = classify_limit(synthetic(m, 1e-4, 0.6, 0.4), m);
  EXPECT_EQ(c.verdict, Scenario::c_coexistence_tail);
  EXPECT_NEAR(c.overlap, 0.2, 0.003);
}

TEST(Classify, AbuttingSupportsWithGoodFitAreSharp) {
  const auto m = reference_linear_model();
  const auto c = classify_limit(synthetic(m, 1e-4, 0.5, 0.5), m);
  EXPECT_EQ(c.verdict, Scenario::a_sharp_interface);
  EXPECT_NEAR(c.x_star, 0.5, 0.002);
}

TEST(Classify, ComputedSteadyStateIsSharp) {
  const auto m = reference_linear_model();
  const double eps = 1e-4;
  const auto st = run_to_steady(m, eps, auto_grid(eps), InitialCondition::paper_corner(), 1e-9);
  const auto c = classify_limit(st, m);
  ASSERT_EQ(c.verdict, Scenario::a_sharp_interface);
  EXPECT_NEAR(c.x_star, 0.5, 0.01);
  EXPECT_DOUBLE_EQ(c.I_b.lo, 0.0);
  EXPECT_DOUBLE_EQ(c.I_b.hi, c.x_star);
  EXPECT_DOUBLE_EQ(c.I_a.lo, c.x_star);
  EXPECT_DOUBLE_EQ(c.I_a.hi, 1.0);
  EXPECT_TRUE(c.inclusions_hold);
  EXPECT_LT(c.fit_error_A, 0.05);
  EXPECT_LT(c.fit_error_B, 0.05);
  // The raw cutoff supports overlap only across the front tails.
  EXPECT_LT(c.overlap, c.tolerance);
}

TEST(ZeroDiffusion, OutsideTheIntervalOnlyOneStateSurvives) {
  const auto m = reference_linear_model();
  std::mt19937_64 rng(11);
  for (int k = 0; k < 20; ++k) {
    const double A = 0.01 + unit_uniform(rng) * m.A_max();
    const double B = unit_uniform(rng) * m.B_max();
    const auto lim = integrate_pointwise(m.F_A()(0.1), m.F_B()(0.1), m.s_A(), m.s_B(), A, B,
                                         1e-10, 1e-3, 10'000'000);
    ASSERT_TRUE(lim.converged);
    EXPECT_EQ(nearest_equilibrium(m, 0.1, lim.A, lim.B), Outcome::e_A) << A << ", " << B;
  }
}

TEST(ZeroDiffusion, InsideTheIntervalTheStartDecides) {
  const auto m = reference_linear_model();
  const double FA = m.F_A()(0.5), FB = m.F_B()(0.5);
  const auto a = integrate_pointwise(FA, FB, 2, 2, 1.25, 0.01, 1e-10, 1e-3, 10'000'000);
  const auto b = integrate_pointwise(FA, FB, 2, 2, 0.01, 1.25, 1e-10, 1e-3, 10'000'000);
  EXPECT_EQ(nearest_equilibrium(m, 0.5, a.A, a.B), Outcome::e_A);
  EXPECT_EQ(nearest_equilibrium(m, 0.5, b.A, b.B), Outcome::e_B);
  EXPECT_NEAR(a.A, 1.25, 1e-6);
  EXPECT_NEAR(b.B, 1.25, 1e-6);
}

TEST(ZeroDiffusion, NearestEquilibriumNeedsToBeClose) {
  const auto m = reference_linear_model();
  EXPECT_EQ(nearest_equilibrium(m, 0.5, 5.0 / 12.0, 5.0 / 12.0), Outcome::saddle);
  EXPECT_EQ(nearest_equilibrium(m, 0.5, 0.0, 0.0), Outcome::origin);
  EXPECT_EQ(nearest_equilibrium(m, 0.5, 0.7, 0.7), Outcome::unresolved);
}

TEST(ZeroDiffusion, PatchworkInsideTheIntervalOnly) {
  const auto m = reference_linear_model();
  const auto rep = zero_diffusion_demo(m, 1, 101);
  EXPECT_TRUE(rep.split_in_bistable());
  EXPECT_EQ(rep.count(Outcome::unresolved), 0u);
  for (const auto& c : rep.cells) {
    if (c.x < rep.interval.x_b) EXPECT_EQ(c.outcome, Outcome::e_A) << c.x;
    if (c.x > rep.interval.x_a) EXPECT_EQ(c.outcome, Outcome::e_B) << c.x;
    const auto set = equilibria(m, c.x);
    const auto& e = c.outcome == Outcome::e_A ? set.e_A : set.e_B;
    EXPECT_LE(std::max(std::fabs(c.A - e.A), std::fabs(c.B - e.B)), 1e-6);
  }
}

TEST(ZeroDiffusion, SeedDeterminesEverything) {
  const auto m = reference_linear_model();
  ZeroDiffusionOptions threaded;
  threaded.threads = 3;
  const auto a = zero_diffusion_demo(m, 7, 61);
  const auto b = zero_diffusion_demo(m, 7, 61, threaded);
  const auto c = zero_diffusion_demo(m, 8, 61);
  bool differs = false;
  for (std::size_t i = 0; i < a.cells.size(); ++i) {
    EXPECT_EQ(a.cells[i].A0, b.cells[i].A0);
    EXPECT_EQ(a.cells[i].A, b.cells[i].A);
    EXPECT_EQ(a.cells[i].outcome, b.cells[i].outcome);
    differs = differs || a.cells[i].A0 != c.cells[i].A0;
  }
  EXPECT_TRUE(differs);
}

TEST(ZeroDiffusion, RandomDrawsStayInTheBox) {
  const auto m = reference_linear_model();
  const auto [A, B] = random_state(m, 500, 3);
  for (std::size_t i = 0; i < A.size(); ++i) {
    EXPECT_GE(A[i], 0.0);
    EXPECT_LT(A[i], m.A_max());
    EXPECT_GE(B[i], 0.0);
    EXPECT_LT(B[i], m.B_max());
  }
  const auto s = monotone_random_state(m, Grid1D(500), 3);
  EXPECT_EQ(monotonicity_violation(s), 0.0);
}

TEST(Figure2, SmallEpsNeedsLargeGridFlag) {
  const auto m = exponential_figure_model();
  try {
    reproduce_figure2(m, 1e-6);
    FAIL() << "expected GridResolutionError";
  } catch (const GridResolutionError& e) {
    EXPECT_EQ(e.required_n(), required_nodes(1e-6));
  }
  Figure2Options o;
  o.n = 101;
  EXPECT_THROW(reproduce_figure2(m, 1e-3, o), GridResolutionError);
}

TEST(Figure2, RejectsModelsFailingHypotheses) {
  const CompetitionModel weak(GradientSpec::linear(2.0, -1.5), GradientSpec::linear(0.5, 1.5), 0.5,
                              0.5);
  EXPECT_THROW(reproduce_figure2(weak, 1e-3), HypothesisViolation);
}

TEST(Figure2, DiffusionRemovesTheSeedDependence) {
  const auto m = exponential_figure_model();
  const auto r = reproduce_figure2(m, 1e-3);
  EXPECT_TRUE(r.patchworks_differ());
  EXPECT_TRUE(r.zero_1.split_in_bistable());
  EXPECT_TRUE(r.seeds_agree(1e-3)) << r.max_difference;
  EXPECT_TRUE(r.front_matches()) << r.front_error << " vs " << r.front_tolerance;
  EXPECT_NEAR(r.x_star_wave, 0.5, 1e-6);

  const auto again = reproduce_figure2(m, 1e-3);
  EXPECT_EQ(r.svg_zero, again.svg_zero);
  EXPECT_EQ(r.svg_steady, again.svg_steady);
  EXPECT_NE(r.svg_zero.find("<svg"), std::string::npos);
}
