#include <gtest/gtest.h>

#include <cmath>

#include "frontier/wave.hpp"

using namespace frontier;

namespace {

WaveResult solve_at(const CompetitionModel& m, double x, const WaveOptions& o = {}) {
  return solve_wave_bvp(make_wave_problem(m, x, o), std::nullopt, o);
}

}  // namespace

TEST(Wave, ProblemLayout) {
  const auto p = make_wave_problem(reference_linear_model(), 0.4);
  EXPECT_DOUBLE_EQ(p.L, 50.0);
  EXPECT_EQ(p.m % 2, 1u);
  EXPECT_NEAR(p.dy(), 0.02, 1e-12);
  EXPECT_NEAR(p.y(p.center()), 0.0, 1e-12);
  EXPECT_TRUE(p.auto_extend);
  EXPECT_DOUBLE_EQ(p.a_left(), 2.0 - 1.5 * 0.4);
  EXPECT_THROW(make_wave_problem(reference_linear_model(), 1.2), DomainError);
}

TEST(Wave, ZeroSpeedAtSymmetryPoint) {
  const auto r = solve_at(reference_linear_model(), 0.5);
  EXPECT_TRUE(r.converged);
  EXPECT_NEAR(r.c, 0.0, 1e-6);
  EXPECT_LE(r.phase_error, 1e-10);
  EXPECT_LE(r.residual, 1e-10);
}

TEST(Wave, BoundaryValuesAndProfileShape) {
  const auto m = reference_linear_model();
  const auto r = solve_at(m, 0.35);
  EXPECT_DOUBLE_EQ(r.a.front(), m.F_A()(0.35));
  EXPECT_DOUBLE_EQ(r.a.back(), 0.0);
  EXPECT_DOUBLE_EQ(r.b.front(), 0.0);
  EXPECT_DOUBLE_EQ(r.b.back(), m.F_B()(0.35));
  for (std::size_t j = 1; j < r.y.size(); ++j) {
    ASSERT_LE(r.a[j], r.a[j - 1] + 1e-12);
    ASSERT_GE(r.b[j], r.b[j - 1] - 1e-12);
  }
}

TEST(Wave, MirrorAntisymmetry) {
  const auto m = reference_linear_model();
  for (double x : {0.3, 0.4, 0.45}) EXPECT_NEAR(solve_at(m, x).c, -solve_at(m, 1.0 - x).c, 1e-5);
}

// c > 0 means the A region grows; A is favoured left of the boundary.
TEST(Wave, SpeedSignAndMonotonicity) {
  for (const auto& m : {reference_linear_model(), reference_linear_model(2, 3)}) {
    const auto iv = find_bistable_interval(m);
    std::vector<double> xs;
    for (int k = 1; k <= 9; ++k) xs.push_back(iv.x_b + iv.width() * k / 10.0);
    const auto map = speed_map(m, xs);
    ASSERT_EQ(map.size(), xs.size());
    EXPECT_GT(map.front().c, 0.0);
    EXPECT_LT(map.back().c, 0.0);
    for (std::size_t i = 1; i < map.size(); ++i) EXPECT_LT(map[i].c, map[i - 1].c) << xs[i];
  }
}

// Oracle: long-time front tracking of the time-dependent problem.
TEST(Wave, AgreesWithFrontTracking) {
  const auto m = reference_linear_model(2, 3);
  for (double x : {0.3, 0.55, 0.7}) {
    const auto p = make_wave_problem(m, x);
    const auto bvp = solve_wave_bvp(p);
    const auto tr = front_tracking_speed(p, 60.0);
    EXPECT_NEAR(bvp.c, tr.c, 1e-3 * (std::fabs(bvp.c) + 0.01)) << x;
    EXPECT_LE(tr.residual, 1e-3 * std::max(std::fabs(tr.c), 1e-3) * 60.0) << x;
    EXPECT_EQ(tr.solver, WaveSolver::front_tracking);
  }
}

TEST(Wave, TrackingNearSymmetryPointAndNearIntervalEnd) {
  const auto m = reference_linear_model();
  EXPECT_LE(std::fabs(front_tracking_speed(make_wave_problem(m, 0.5), 40.0).c), 1e-3);
  EXPECT_GT(front_tracking_speed(make_wave_problem(m, 0.25), 40.0).c, 0.0);
}

TEST(Wave, TrackingWithoutRecenteringNeedsRoom) {
  const auto m = reference_linear_model();
  WaveOptions o;
  o.L = 12.0;
  TrackingOptions t;
  t.recenter = false;
  EXPECT_THROW(front_tracking_speed(make_wave_problem(m, 0.25, o), 60.0, t), DomainTooSmall);
}

TEST(Wave, DomainSizeDoesNotMoveSpeed) {
  const auto m = reference_linear_model(2, 3);
  WaveOptions a, b;
  a.L = 50.0;
  b.L = 100.0;
  for (double x : {0.3, 0.6}) EXPECT_NEAR(solve_at(m, x, a).c, solve_at(m, x, b).c, 1e-6);
}

TEST(Wave, GridRefinementConverges) {
  const auto m = reference_linear_model(2, 3);
  WaveOptions c1, c2, c3;
  c1.dy = 0.04;
  c2.dy = 0.02;
  c3.dy = 0.01;
  const double s1 = solve_at(m, 0.35, c1).c, s2 = solve_at(m, 0.35, c2).c, s3 = solve_at(m, 0.35, c3).c;
  EXPECT_NEAR((s1 - s2) / (s2 - s3), 4.0, 0.5);
  EXPECT_LT(std::fabs(s2 - s3), 1e-4);
}

TEST(Wave, ShortDomainIsExtendedAutomatically) {
  const auto m = reference_linear_model();
  auto p = make_wave_problem(m, 0.3);
  p.L = 3.0;
  p.m = odd_node_count(3.0, 0.02);
  const auto r = solve_wave_bvp(p);
  EXPECT_GT(r.L, 3.0);
  EXPECT_LE(r.far_field_mismatch, 1e-6);
  EXPECT_NEAR(r.c, solve_at(m, 0.3).c, 1e-6);
}

TEST(Wave, WarnsNearIntervalEnd) {
  const auto m = reference_linear_model();
  EXPECT_FALSE(solve_at(m, 0.25).warnings.empty());
  EXPECT_TRUE(solve_at(m, 0.4).warnings.empty());
}

TEST(Wave, OutsideIntervalIsRejected) {
  const auto m = reference_linear_model();
  EXPECT_THROW(solve_at(m, 0.1), DomainError);
  EXPECT_THROW(speed_map(m, {0.3, 0.9}), DomainError);
}

TEST(Wave, DecayRateOfSymmetricStandingWave) {
  // At x = 0.5, c = 0: slowest tail is A invading B's state, rate sqrt(|F_A - s_A F_B|).
  const auto m = reference_linear_model();
  EXPECT_NEAR(far_field_decay_rate(m, 0.5, 0.0), std::sqrt(1.25), 1e-12);
}

TEST(Boundary, SymmetricModel) {
  const auto b = locate_boundary(reference_linear_model(), 1e-4);
  EXPECT_EQ(b.status, BoundaryStatus::interior);
  EXPECT_NEAR(b.x_star, 0.5, 1e-4);
  const auto iv = find_bistable_interval(reference_linear_model());
  EXPECT_LE(b.iterations, static_cast<int>(std::ceil(std::log2(iv.width() / 1e-4))));
  EXPECT_LE(b.bracket_hi - b.bracket_lo, 1e-4);
  EXPECT_GE(b.c_lo, 0.0);
  EXPECT_LE(b.c_hi, 0.0);
}

TEST(Boundary, ShiftedGradientFavoursB) {
  const CompetitionModel m(GradientSpec::linear(2.0, -1.5), GradientSpec::linear(0.65, 1.5), 2, 2);
  const auto b = locate_boundary(m, 1e-5);
  EXPECT_EQ(b.status, BoundaryStatus::interior);
  EXPECT_LT(b.x_star, 0.5);
}

TEST(Boundary, StrongerCompetitorShiftsBoundary) {
  const auto b = locate_boundary(reference_linear_model(2, 3), 1e-6);
  EXPECT_GT(b.x_star, 0.55);
  // The boundary is a zero of the speed.
  EXPECT_NEAR(solve_at(reference_linear_model(2, 3), b.x_star).c, 0.0, 1e-5);
}

// Much faster diffusion of A makes A invade everywhere the interval allows.
TEST(Boundary, ReportsEndpointWhenSpeedKeepsItsSign) {
  // Weak A-on-B competition pushes the zero to about 0.725, right of a narrow
  // bracket around the midpoint 0.698, so c stays positive on it.
  const CompetitionModel m(GradientSpec::linear(2.0, -1.5), GradientSpec::linear(0.5, 1.5), 1.05,
                           3.0);
  SpeedMapOptions o;
  o.bracket_margin = 0.47;
  const auto b = locate_boundary(m, 1e-4, o);
  EXPECT_EQ(b.status, BoundaryStatus::at_x_a);
  EXPECT_DOUBLE_EQ(b.x_star, b.interval.x_a);
  EXPECT_GT(b.c_lo, 0.0);
  EXPECT_GT(b.c_hi, 0.0);

  // Swapping the species and reflecting x puts the zero left of the bracket.
  const CompetitionModel mirror(GradientSpec::linear(2.0, -1.5), GradientSpec::linear(0.5, 1.5),
                                3.0, 1.05);
  const auto bm = locate_boundary(mirror, 1e-4, o);
  EXPECT_EQ(bm.status, BoundaryStatus::at_x_b);
  EXPECT_DOUBLE_EQ(bm.x_star, bm.interval.x_b);
  EXPECT_LT(bm.c_hi, 0.0);

  o.bracket_margin = 0.5;
  EXPECT_THROW(locate_boundary(m, 1e-4, o), DomainError);
}
