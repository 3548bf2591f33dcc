#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "frontier/parabolic.hpp"

using namespace frontier;

TEST(Reaction, ForwardEulerByHand) {
  const auto m = reference_linear_model();
  const auto [a, b] = reaction_step(m, 0.0, 1.0, 0.0, 1e-3);
  EXPECT_DOUBLE_EQ(a, 1.0 + 1e-3 * (2.0 - 1.0));
  EXPECT_DOUBLE_EQ(b, 0.0);
}

TEST(Reaction, NegativeEulerValueFallsBackToExponential) {
  // dt * H < -1 would overshoot below zero.
  const auto [a, b] = reaction_step(1.0, 1.0, 2.0, 2.0, 3.0, 0.5, 1.0);
  EXPECT_GT(a, 0.0);
  EXPECT_NEAR(a, 3.0 * std::exp((1.0 - 3.0 - 1.0) * 1.0), 1e-15);
  EXPECT_GE(b, 0.0);
}

TEST(Parabolic, RobinDataInjectsMassAtLeftEnd) {
  const auto m = reference_linear_model();
  const Grid1D g(101);
  StateField s{g, std::vector<double>(g.n, 0.0), std::vector<double>(g.n, m.B_max()), 0.0};
  const auto next = step_parabolic(s, m, 1e-3, 1e-2);
  EXPECT_GT(next.A[0], 0.0);
  EXPECT_GT(next.A[1], 0.0);
  EXPECT_GT(next.A[0], next.A[5]);
  EXPECT_DOUBLE_EQ(next.t, 1e-2);
}

// A = F_A, B = 0 with boundary data that F_A satisfies: one step moves A by
// at most the diffusion of F_A itself, eps d dt |F_A''|.
TEST(Parabolic, EquilibriumStateMovesOnlyByItsCurvature) {
  const auto m = exponential_figure_model();
  const double eps = 1e-4, dt = 1e-2, se = std::sqrt(eps);
  const Grid1D g(1001);
  const RobinData bcA{m.F_A()(0) - se * m.F_A().derivative(0), m.F_A()(1) + se * m.F_A().derivative(1)};
  const ParabolicStepper stepper(m, eps, g, bcA, RobinData{0.0, 0.0});
  StateField s{g, std::vector<double>(g.n), std::vector<double>(g.n, 0.0), 0.0};
  for (std::size_t i = 0; i < g.n; ++i) s.A[i] = m.F_A()(g.x(i));
  const StateField before = s;
  stepper.step(s, dt);
  const double fpp_max = 2.0;  // |(2 e^{-x})''| <= 2 on [0,1]
  for (std::size_t i = 0; i < g.n; ++i) {
    EXPECT_LE(std::fabs(s.A[i] - before.A[i]), 1.01 * eps * dt * fpp_max + 1e-14) << i;
    EXPECT_EQ(s.B[i], 0.0);
  }
}

TEST(Parabolic, StepperRejectsNonPositiveDt) {
  const auto m = reference_linear_model();
  const Grid1D g(11);
  StateField s{g, std::vector<double>(11, 0.0), std::vector<double>(11, 0.0), 0.0};
  EXPECT_THROW(step_parabolic(s, m, 1e-2, 0.0), DomainError);
}

// Oracle: independent forward-Euler integration of each node's kinetics.
TEST(Parabolic, ZeroDiffusionMatchesPerNodeOde) {
  const auto m = reference_linear_model();
  const Grid1D g(41);
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> ua(0.0, m.A_max()), ub(0.0, m.B_max());
  StateField init{g, std::vector<double>(g.n), std::vector<double>(g.n), 0.0};
  for (std::size_t i = 0; i < g.n; ++i) {
    init.A[i] = ua(rng);
    init.B[i] = ub(rng);
  }
  SteadyOptions opts;
  const auto st = run_to_steady(m, 0.0, g, InitialCondition::from(init), 1e-11, opts);
  for (std::size_t i = 0; i < g.n; ++i) {
    const double x = g.x(i);
    double a = init.A[i], b = init.B[i];
    for (int k = 0; k < 400000; ++k) {
      const double fa = a * m.H_A(x, a, b), fb = b * m.H_B(x, a, b);
      a += 1e-4 * fa;
      b += 1e-4 * fb;
    }
    EXPECT_NEAR(st.state.A[i], a, 1e-6) << "x=" << x;
    EXPECT_NEAR(st.state.B[i], b, 1e-6) << "x=" << x;
  }
}

TEST(Parabolic, ZeroDiffusionKeepsPatchwork) {
  const auto m = reference_linear_model();
  const Grid1D g(51);
  StateField init{g, std::vector<double>(g.n, 0.0), std::vector<double>(g.n, 0.0), 0.0};
  for (std::size_t i = 0; i < g.n; ++i) {
    const double x = g.x(i);
    if (x <= 0.4) init.A[i] = m.F_A()(x);
    else init.B[i] = m.F_B()(x);
  }
  const auto st = run_to_steady(m, 0.0, g, InitialCondition::from(init), 1e-12);
  for (std::size_t i = 0; i < g.n; ++i) {
    const double x = g.x(i);
    EXPECT_DOUBLE_EQ(st.state.A[i], x <= 0.4 ? m.F_A()(x) : 0.0);
    EXPECT_DOUBLE_EQ(st.state.B[i], x <= 0.4 ? 0.0 : m.F_B()(x));
  }
  ASSERT_TRUE(st.front.has_value());
  EXPECT_NEAR(st.front->x_star_eps, 0.41, 0.01);
}

class SteadyReference : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    const auto m = reference_linear_model();
    steady_ = new SteadyState(
        run_to_steady(m, 1e-3, auto_grid(1e-3), InitialCondition::paper_corner(), 1e-9));
  }
  static void TearDownTestSuite() { delete steady_; }
  static SteadyState* steady_;
};
SteadyState* SteadyReference::steady_ = nullptr;

TEST_F(SteadyReference, CrossingAtMidpoint) {
  ASSERT_TRUE(steady_->front.has_value());
  const double h = steady_->state.grid.h;
  EXPECT_NEAR(steady_->front->x_star_eps, 0.5, 2 * h);
  EXPECT_LE(steady_->residual, 1e-9);
}

TEST_F(SteadyReference, MirrorSymmetry) {
  const auto& s = steady_->state;
  const std::size_t n = s.grid.n;
  for (std::size_t i = 0; i < n; ++i) EXPECT_NEAR(s.A[i], s.B[n - 1 - i], 1e-7);
}

TEST_F(SteadyReference, BoundsAndMonotonicity) {
  const auto m = reference_linear_model();
  EXPECT_EQ(bound_violation(steady_->state, m), 0.0);
  EXPECT_EQ(monotonicity_violation(steady_->state), 0.0);
  EXPECT_TRUE(steady_->monitors.monotone_mode);
  EXPECT_TRUE(steady_->monitors.time_mode);
  EXPECT_LE(steady_->monitors.worst_time, 1e-9);
  EXPECT_LE(steady_->monitors.worst_space, 1e-9);
}

TEST_F(SteadyReference, StartingPointDoesNotMatter) {
  const auto m = reference_linear_model();
  const auto other = run_to_steady(m, 1e-3, auto_grid(1e-3), InitialCondition::monotone_ramp(), 1e-9);
  EXPECT_FALSE(other.monitors.time_mode);
  for (std::size_t i = 0; i < other.state.grid.n; ++i) {
    EXPECT_NEAR(other.state.A[i], steady_->state.A[i], 1e-6);
    EXPECT_NEAR(other.state.B[i], steady_->state.B[i], 1e-6);
  }
}

// Oracle: the stationary residual computed here independently of the stepper,
// including the Robin conditions via one-sided differences.
TEST_F(SteadyReference, SatisfiesDiscreteStationaryProblem) {
  const auto m = reference_linear_model();
  const auto& s = steady_->state;
  const double eps = 1e-3, h = s.grid.h;
  for (std::size_t i = 1; i + 1 < s.grid.n; ++i) {
    const double x = s.grid.x(i);
    const double ra = eps * (s.A[i + 1] - 2 * s.A[i] + s.A[i - 1]) / (h * h) + s.A[i] * m.H_A(x, s.A[i], s.B[i]);
    const double rb = eps * (s.B[i + 1] - 2 * s.B[i] + s.B[i - 1]) / (h * h) + s.B[i] * m.H_B(x, s.A[i], s.B[i]);
    ASSERT_LE(std::fabs(ra), 1e-8);
    ASSERT_LE(std::fabs(rb), 1e-8);
  }
  const auto [la, ra] = robin_boundary_residuals(s.grid, eps, s.A, robin_data_A(m));
  // One-sided differences see the O(h^2) curvature of the thin end layer.
  EXPECT_LE(std::fabs(la), 1e-3);
  EXPECT_LE(std::fabs(ra), 1e-3);
}

TEST(Parabolic, SecondOrderConvergenceOfFront) {
  const auto m = reference_linear_model(2.0, 3.0);
  std::vector<double> xs;
  for (std::size_t n : {51, 101, 201, 401}) {
    const auto st = run_to_steady(m, 1e-2, Grid1D(n), InitialCondition::paper_corner(), 1e-10);
    xs.push_back(st.front->x_star_cubic);
  }
  const double r1 = (xs[0] - xs[1]) / (xs[1] - xs[2]);
  const double r2 = (xs[1] - xs[2]) / (xs[2] - xs[3]);
  EXPECT_NEAR(r1, 4.0, 0.6);
  EXPECT_NEAR(r2, 4.0, 0.6);
}

TEST(Parabolic, StrictModeRefusesFailingHypotheses) {
  const auto weak = reference_linear_model(0.5, 0.5);
  EXPECT_THROW(run_to_steady(weak, 1e-2, Grid1D(101), InitialCondition::paper_corner(), 1e-8),
               HypothesisViolation);
}

TEST(Parabolic, NonConvergenceCarriesTrace) {
  SteadyOptions opts;
  opts.max_steps = 20;
  try {
    run_to_steady(reference_linear_model(), 1e-3, auto_grid(1e-3), InitialCondition::paper_corner(),
                  1e-8, opts);
    FAIL() << "expected NonConvergence";
  } catch (const NonConvergence& e) {
    EXPECT_GT(e.last_residual(), 1e-8);
    EXPECT_FALSE(e.trace().empty());
  }
}

TEST(Parabolic, RejectsBadInputs) {
  const auto m = reference_linear_model();
  EXPECT_THROW(run_to_steady(m, -1.0, Grid1D(11), InitialCondition::paper_corner(), 1e-8), DomainError);
  EXPECT_THROW(run_to_steady(m, 1e-2, Grid1D(11), InitialCondition::paper_corner(), 0.0), DomainError);
  StateField wrong{Grid1D(7), std::vector<double>(7), std::vector<double>(7), 0.0};
  EXPECT_THROW(run_to_steady(m, 1e-2, Grid1D(11), InitialCondition::from(wrong), 1e-8), DomainError);
}

TEST(Parabolic, SnapshotsAreDelivered) {
  SteadyOptions opts;
  std::size_t calls = 0;
  double last_t = -1.0;
  bool ordered = true;
  opts.snapshot_interval = 1.0;
  opts.on_snapshot = [&](const StateField& s) {
    ordered = ordered && s.t > last_t;
    last_t = s.t;
    ++calls;
  };
  run_to_steady(reference_linear_model(), 1e-2, auto_grid(1e-2), InitialCondition::paper_corner(), 1e-8, opts);
  EXPECT_GT(calls, 3u);
  EXPECT_TRUE(ordered);
}
