#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "frontier/model.hpp"

namespace frontier {

enum class Hypothesis { GH2, GH1a, GH1b, GH1c, H1, H2, H3 };

inline const char* to_string(Hypothesis h) {
  switch (h) {
    case Hypothesis::GH2: return "GH2";
    case Hypothesis::GH1a: return "GH1a";
    case Hypothesis::GH1b: return "GH1b";
    case Hypothesis::GH1c: return "GH1c";
    case Hypothesis::H1: return "H1";
    case Hypothesis::H2: return "H2";
    default: return "H3";
  }
}

struct HypothesisCheck {
  Hypothesis id;
  bool passed = true;
  std::optional<double> first_violation;  // sample point, when the failure is local
  std::string detail;
};

struct HypothesisReport {
  std::vector<HypothesisCheck> checks;

  bool all_passed() const {
    for (const auto& c : checks)
      if (!c.passed) return false;
    return true;
  }
  const HypothesisCheck& operator[](Hypothesis h) const {
    for (const auto& c : checks)
      if (c.id == h) return c;
    throw std::out_of_range("hypothesis missing from report");
  }
};

inline constexpr std::size_t kDefaultHypothesisSamples = 1001;

namespace detail {

inline void fail(HypothesisCheck& c, std::optional<double> x, std::string why) {
  if (!c.passed) return;  // keep the first violation
  c.passed = false;
  c.first_violation = x;
  c.detail = std::move(why);
}

}  // namespace detail

/// Dense-sample certification of the structural hypotheses. Failures are
/// entries in the report, never exceptions. Strict inequalities are checked on
/// the open interval (0,1) where the hypotheses are stated for 0 < x < 1.
inline HypothesisReport verify_hypotheses(const CompetitionModel& m,
                                          std::size_t n_samples = kDefaultHypothesisSamples) {
  if (n_samples < 2) throw DomainError("n_samples must be >= 2");
  HypothesisCheck gh2{Hypothesis::GH2}, gh1a{Hypothesis::GH1a}, gh1b{Hypothesis::GH1b},
      gh1c{Hypothesis::GH1c}, h1{Hypothesis::H1}, h2{Hypothesis::H2}, h3{Hypothesis::H3};

  const double prod = m.s_A() * m.s_B();
  if (!(prod > 1.0))
    detail::fail(h3, std::nullopt, "s_A*s_B = " + std::to_string(prod) + " is not > 1");

  std::optional<BistableInterval> interval;
  try {
    interval = find_bistable_interval(m);
  } catch (const HypothesisViolation& e) {
    detail::fail(h2, std::nullopt, e.what());
  }

  const double delta = std::min(m.F_A().floor(), m.F_B().floor());
  for (std::size_t i = 0; i < n_samples; ++i) {
    const double x = static_cast<double>(i) / (n_samples - 1);
    const double fa = m.F_A()(x), fb = m.F_B()(x);

    if (!(fa > delta) || !(fb > delta)) detail::fail(h1, x, "gradient not above floor");
    if (!(m.F_A().derivative(x) < 0.0)) detail::fail(h1, x, "F_A not decreasing");
    if (!(m.F_B().derivative(x) > 0.0)) detail::fail(h1, x, "F_B not increasing");

    const bool interior = i > 0 && i + 1 < n_samples;
    if (interior) {
      // Every partial is evaluated at a representative positive (A,B); the
      // model is linear, so the sign pattern does not depend on the point.
      const auto r = evaluate_reaction(m, x, 0.5 * fa, 0.5 * fb);
      if (!(m.H_A(x, 0, 0) > 0.0) || !(m.H_B(x, 0, 0) > 0.0))
        detail::fail(gh2, x, "H(x,0,0) not positive");
      if (!(r.dHA_dx < 0.0) || !(r.dHB_dx > 0.0)) detail::fail(gh2, x, "wrong x-monotonicity");
      if (!(r.dHA_dB < 0.0) || !(r.dHB_dA < 0.0)) detail::fail(gh2, x, "not competitive");
    }

    if (!(fa > 0.0) || !(fb > 0.0) || m.H_A(x, fa, 0.0) != 0.0 || m.H_B(x, 0.0, fb) != 0.0)
      detail::fail(gh1a, x, "pure equilibria missing");

    if (!interval) continue;
    const auto eq = equilibria(m, x);
    const bool left_of_a = x < interval->x_a, right_of_b = x > interval->x_b;
    // Exact marginal points are excluded by construction of the labels.
    const bool at_a = eq.e_A.stability == Stability::marginal;
    const bool at_b = eq.e_B.stability == Stability::marginal;
    if (!at_a && (eq.e_A.stability == Stability::stable) != left_of_a)
      detail::fail(gh1b, x, "(F_A,0) stability does not switch at x_a");
    if (!at_b && (eq.e_B.stability == Stability::stable) != right_of_b)
      detail::fail(gh1b, x, "(0,F_B) stability does not switch at x_b");
    if (x > interval->x_a && !(m.H_B(x, fa, 0.0) > 0.0))
      detail::fail(gh1b, x, "H_B(x,F_A,0) not positive beyond x_a");
    if (x < interval->x_b && !(m.H_A(x, 0.0, fb) > 0.0))
      detail::fail(gh1b, x, "H_A(x,0,F_B) not positive before x_b");

    if (interval->contains(x)) {
      if (!eq.saddle || !eq.saddle->admissible || !(eq.saddle->point.A > 0.0) ||
          !(eq.saddle->point.B > 0.0)) {
        detail::fail(gh1c, x, "no positive interior equilibrium");
        continue;
      }
      const auto r = evaluate_reaction(m, x, eq.saddle->point.A, eq.saddle->point.B);
      const double det = r.dHA_dA * r.dHB_dB - r.dHA_dB * r.dHB_dA;
      if (!(det < 0.0) || !(r.dHA_dA < 0.0) || !(r.dHB_dB < 0.0))
        detail::fail(gh1c, x, "interior equilibrium is not a saddle");
      if (eq.saddle->point.stability != Stability::saddle)
        detail::fail(gh1c, x, "interior equilibrium labelled " +
                                  std::string(to_string(eq.saddle->point.stability)));
    }
  }
  if (!interval) {
    detail::fail(gh1b, std::nullopt, "no bistable interval");
    detail::fail(gh1c, std::nullopt, "no bistable interval");
  }
  return {{gh2, gh1a, gh1b, gh1c, h1, h2, h3}};
}

}  // namespace frontier
