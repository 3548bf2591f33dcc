#include <gtest/gtest.h>

#include <cmath>

#include "frontier/parabolic.hpp"
#include "frontier/wkb.hpp"

using namespace frontier;

TEST(Wkb, ExponentialProfileHasLinearPhase) {
  const double eps = 1e-4, se = std::sqrt(eps);
  const Grid1D g(201);
  StateField s{g, std::vector<double>(g.n), std::vector<double>(g.n), 0.0};
  for (std::size_t i = 0; i < g.n; ++i) {
    s.A[i] = std::exp(-g.x(i) / se);
    s.B[i] = 1.0;
  }
  const auto w = wkb_transform(s, reference_linear_model(), eps);
  const auto slope = wkb_slope(w.phi_A, g);
  for (std::size_t i = 0; i < g.n; ++i) {
    EXPECT_NEAR(w.phi_A[i], g.x(i), 1e-12);
    EXPECT_NEAR(slope[i], 1.0, 1e-9);
    EXPECT_NEAR(w.phi_B[i], 0.0, 1e-15);
  }
  EXPECT_FALSE(w.any_floored());
}

TEST(Wkb, NonPositiveValues) {
  const Grid1D g(5);
  StateField s{g, {1, 0.5, 0.0, 0.1, 0.1}, {1, 1, 1, 1, 1}, 0.0};
  const auto m = reference_linear_model();
  EXPECT_THROW(wkb_transform(s, m, 1e-3), DomainError);
  const auto w = wkb_transform(s, m, 1e-3, true);
  EXPECT_EQ(w.floored, 1u);
  EXPECT_NEAR(w.phi_A[2], -std::sqrt(1e-3) * std::log(kWkbFloor), 1e-12);
  EXPECT_THROW(wkb_transform(s, m, 0.0, true), DomainError);
}

class WkbSteady : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    steady_ = new SteadyState(run_to_steady(reference_linear_model(), 1e-4, auto_grid(1e-4),
                                            InitialCondition::paper_corner(), 1e-9));
  }
  static void TearDownTestSuite() { delete steady_; }
  static SteadyState* steady_;
};
SteadyState* WkbSteady::steady_ = nullptr;

// Where A sits on its stable equilibrium both terms of the eikonal defect vanish.
TEST_F(WkbSteady, DefectSmallWhereAIsSaturated) {
  const auto m = reference_linear_model();
  const auto w = wkb_transform(steady_->state, m, 1e-4);
  for (std::size_t i = 0; i < w.grid.n; ++i) {
    const double x = w.grid.x(i);
    if (x > 0.05 && x < 0.4) EXPECT_LE(std::fabs(w.residual_A[i]), 1e-2) << x;
  }
}

// Oracle: in the region where A is exponentially small the defect reduces to
// d phi'^2 - d sqrt(eps) phi'' + H_A(x, 0, F_B); checked against phi from a
// finer steady state, which removes the grid dependence of the derivatives.
TEST_F(WkbSteady, DefectConsistentAtRightOfFront) {
  const auto m = reference_linear_model();
  const double eps = 1e-4;
  const auto fine = run_to_steady(m, eps, Grid1D(2 * steady_->state.grid.n - 1),
                                  InitialCondition::paper_corner(), 1e-9);
  const auto wc = wkb_transform(steady_->state, m, eps);
  const auto wf = wkb_transform(fine.state, m, eps);
  const std::size_t ic = static_cast<std::size_t>(std::lround(0.9 / wc.grid.h));
  const std::size_t jf = static_cast<std::size_t>(std::lround(0.9 / wf.grid.h));
  const double slope_c = wkb_slope(wc.phi_A, wc.grid)[ic];
  const double slope_f = wkb_slope(wf.phi_A, wf.grid)[jf];
  EXPECT_NEAR(slope_c, slope_f, 5e-2);
  const double hA = m.H_A(0.9, 0.0, m.F_B()(0.9));
  EXPECT_NEAR(wc.residual_A[ic], m.d_A() * slope_f * slope_f + hA, 5e-2);
}

TEST(Subsolution, ReferenceConstants) {
  const auto p = subsolution_profile(reference_linear_model(), 1e-4);
  ASSERT_TRUE(p.applicable);
  EXPECT_NEAR(p.min_H, -5.5, 1e-12);
  EXPECT_NEAR(p.mu, 5.5, 1e-12);
  EXPECT_NEAR(p.beta_limit, 2.0 / (std::sqrt(5.5) + 1.0), 1e-14);
  EXPECT_NEAR(p.beta_limit, 0.5979, 1e-4);
}

TEST(Subsolution, LimitAsEpsVanishes) {
  const auto m = reference_linear_model();
  double prev_gap = 1.0;
  for (double eps : {1e-1, 1e-2, 1e-3, 1e-4}) {
    const auto p = subsolution_profile(m, eps);
    const double k = std::sqrt(p.mu / eps);
    // alpha e^{k} is the right-end contribution; it vanishes like e^{-k}.
    EXPECT_LE(std::fabs(p.alpha) * std::exp(k), 2.0 * std::exp(-k) + 1e-300);
    const double gap = std::fabs(p.beta_eps - p.beta_limit);
    EXPECT_LE(gap, prev_gap);
    prev_gap = gap;
  }
  EXPECT_LT(prev_gap, 1e-15);
}

// Oracle: finite-difference check of the ODE and both Robin conditions.
TEST(Subsolution, SolvesItsBoundaryValueProblem) {
  const auto m = reference_linear_model();
  for (double eps : {1e-2, 1e-3}) {
    const auto p = subsolution_profile(m, eps);
    const double se = std::sqrt(eps), h = 1e-5 * se;
    auto d1 = [&](double x) { return (p(x + h) - p(x - h)) / (2 * h); };
    for (double x : {0.1, 0.3, 0.6}) {
      const double d2 = (p(x + h) - 2 * p(x) + p(x - h)) / (h * h);
      EXPECT_NEAR(eps * d2, p.mu * p(x), 1e-4 * p.mu * p(x) + 1e-12) << x;
    }
    EXPECT_NEAR(p(0.0) - se * d1(0.0), m.A_max(), 1e-6);
    EXPECT_NEAR(p(1.0) + se * d1(1.0), 0.0, 1e-6);
    EXPECT_NEAR(p.delta_A, p(0.0), 1e-14);
  }
}

TEST(Subsolution, PositiveAndBelowCeilingForSmallEps) {
  const auto m = reference_linear_model();
  const auto p = subsolution_profile(m, 1e-3);
  EXPECT_GT(p.eps0, 0.0);
  for (double eps : {p.eps0, 1e-3, 1e-5, 1e-8}) {
    if (eps > p.eps0) continue;
    const auto q = subsolution_profile(m, eps);
    for (int i = 0; i <= 1000; ++i) {
      const double v = q(i / 1000.0);
      // e^{-k} underflows near x = 1 once eps is tiny.
      if (eps >= 1e-4) EXPECT_GT(v, 0.0);
      else EXPECT_GE(v, 0.0);
      EXPECT_LE(v, m.A_max());
    }
    EXPECT_LE(q.upper_bound(), m.A_max());
  }
}

TEST(Subsolution, LowerBoundsTheSteadyState) {
  const auto m = reference_linear_model();
  const double eps = 1e-3;
  const auto st = run_to_steady(m, eps, auto_grid(eps), InitialCondition::paper_corner(), 1e-9);
  const auto p = subsolution_profile(m, eps);
  for (std::size_t i = 0; i < st.state.grid.n; ++i)
    EXPECT_GE(st.state.A[i], p(st.state.grid.x(i)) - 1e-9) << i;
}
