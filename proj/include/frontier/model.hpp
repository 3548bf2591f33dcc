#pragma once

#include <array>
#include <cmath>
#include <optional>
#include <string>

#include "frontier/errors.hpp"
#include "frontier/gradient.hpp"
#include "frontier/roots.hpp"

namespace frontier {

/**
 * Two-species competition with morphogen-driven production:
 *
 *   H_A(x,A,B) = F_A(x) - A - s_A B
 *   H_B(x,A,B) = F_B(x) - B - s_B A
 *
 * The full kinetics are (A H_A, B H_B). Only positivity of the diffusivities
 * and non-negativity of the saturations are enforced here; the structural
 * hypotheses (monotone gradients, s_A s_B > 1, bistable overlap) are reported
 * by verify_hypotheses() so that violating models can still be inspected.
 */
class CompetitionModel {
 public:
  CompetitionModel(GradientSpec F_A, GradientSpec F_B, double s_A, double s_B, double d_A = 1.0,
                   double d_B = 1.0)
      : F_A_(std::move(F_A)), F_B_(std::move(F_B)), s_A_(s_A), s_B_(s_B), d_A_(d_A), d_B_(d_B) {
    if (!(d_A_ > 0.0) || !(d_B_ > 0.0)) throw DomainError("diffusivities must be positive");
    if (!(s_A_ >= 0.0) || !(s_B_ >= 0.0)) throw DomainError("saturations must be non-negative");
  }

  const GradientSpec& F_A() const noexcept { return F_A_; }
  const GradientSpec& F_B() const noexcept { return F_B_; }
  double s_A() const noexcept { return s_A_; }
  double s_B() const noexcept { return s_B_; }
  double d_A() const noexcept { return d_A_; }
  double d_B() const noexcept { return d_B_; }

  double H_A(double x, double A, double B) const { return F_A_(x) - A - s_A_ * B; }
  double H_B(double x, double A, double B) const { return F_B_(x) - B - s_B_ * A; }

  /// Upper bounds of the invariant box [0, F_A(0)] x [0, F_B(1)].
  double A_max() const { return F_A_(0.0); }
  double B_max() const { return F_B_(1.0); }

 private:
  GradientSpec F_A_;
  GradientSpec F_B_;
  double s_A_, s_B_, d_A_, d_B_;
};

/// Reference linear model: F_A = 2 - 1.5x, F_B = 0.5 + 1.5x (mirror images), s_A = s_B = 2.
inline CompetitionModel reference_linear_model(double s_A = 2.0, double s_B = 2.0) {
  return {GradientSpec::linear(2.0, -1.5), GradientSpec::linear(0.5, 1.5), s_A, s_B};
}

/// Exponential gradients F_A = 2 e^{-x}, F_B = 2 e^{x-1} with s_A = s_B = 2.
inline CompetitionModel exponential_figure_model() {
  return {GradientSpec::exponential(2.0, -1.0), GradientSpec::exponential(2.0 * std::exp(-1.0), 1.0),
          2.0, 2.0};
}

struct ReactionEval {
  double H_A, H_B;
  double dHA_dA, dHA_dB, dHB_dA, dHB_dB;
  double dHA_dx, dHB_dx;
};

inline void require_unit_interval(double x, const char* what = "x") {
  if (!(x >= 0.0 && x <= 1.0))
    throw DomainError(std::string(what) + " must lie in [0,1], got " + std::to_string(x));
}

inline ReactionEval evaluate_reaction(const CompetitionModel& m, double x, double A, double B) {
  require_unit_interval(x);
  return {m.H_A(x, A, B), m.H_B(x, A, B), -1.0,         -m.s_A(),
          -m.s_B(),       -1.0,           m.F_A().derivative(x), m.F_B().derivative(x)};
}

enum class Stability { stable, unstable, saddle, marginal };

inline const char* to_string(Stability s) {
  switch (s) {
    case Stability::stable: return "stable";
    case Stability::unstable: return "unstable";
    case Stability::saddle: return "saddle";
    default: return "marginal";
  }
}

/// Jacobian of the zero-diffusion field (A H_A, B H_B), row-major.
inline std::array<double, 4> kinetic_jacobian(const CompetitionModel& m, double x, double A,
                                              double B) {
  const auto r = evaluate_reaction(m, x, A, B);
  return {r.H_A + A * r.dHA_dA, A * r.dHA_dB, B * r.dHB_dA, r.H_B + B * r.dHB_dB};
}

struct Eigenvalues {
  double re1, re2;  // real parts, re1 <= re2
  bool complex;
};

inline Eigenvalues eigenvalues_2x2(const std::array<double, 4>& J) {
  const double tr = J[0] + J[3];
  const double det = J[0] * J[3] - J[1] * J[2];
  const double disc = 0.25 * tr * tr - det;
  if (disc < 0.0) return {0.5 * tr, 0.5 * tr, true};
  const double s = std::sqrt(disc);
  return {0.5 * tr - s, 0.5 * tr + s, false};
}

inline constexpr double kStabilityTolerance = 1e-10;

inline Stability classify(const Eigenvalues& ev) {
  const double tol = kStabilityTolerance;
  if (std::fabs(ev.re1) <= tol || std::fabs(ev.re2) <= tol) return Stability::marginal;
  if (ev.re2 < 0.0) return Stability::stable;
  if (ev.re1 > 0.0) return Stability::unstable;
  return Stability::saddle;
}

struct Equilibrium {
  double A, B;
  Stability stability;
  Eigenvalues eigenvalues;
};

struct InteriorEquilibrium {
  Equilibrium point;
  bool admissible;  // A* >= 0 and B* >= 0
  double jacobian_determinant;
};

struct EquilibriumSet {
  double x;
  Equilibrium e_A;     // (F_A(x), 0)
  Equilibrium e_B;     // (0, F_B(x))
  Equilibrium origin;  // (0, 0)
  std::optional<InteriorEquilibrium> saddle;  // nullopt only when s_A s_B == 1

  bool saddle_present() const { return saddle && saddle->admissible; }
};

inline Equilibrium make_equilibrium(const CompetitionModel& m, double x, double A, double B) {
  const auto ev = eigenvalues_2x2(kinetic_jacobian(m, x, A, B));
  return {A, B, classify(ev), ev};
}

/// Closed-form interior equilibrium (A*, B*); nullopt when s_A s_B == 1.
inline std::optional<std::array<double, 2>> interior_equilibrium(const CompetitionModel& m,
                                                                  double x) {
  const double den = m.s_A() * m.s_B() - 1.0;
  if (den == 0.0) return std::nullopt;
  const double fa = m.F_A()(x), fb = m.F_B()(x);
  return std::array<double, 2>{(m.s_A() * fb - fa) / den, (m.s_B() * fa - fb) / den};
}

inline EquilibriumSet equilibria(const CompetitionModel& m, double x) {
  require_unit_interval(x);
  EquilibriumSet set{x, make_equilibrium(m, x, m.F_A()(x), 0.0),
                     make_equilibrium(m, x, 0.0, m.F_B()(x)), make_equilibrium(m, x, 0.0, 0.0),
                     std::nullopt};
  if (auto star = interior_equilibrium(m, x)) {
    const auto [a, b] = *star;
    const auto J = kinetic_jacobian(m, x, a, b);
    set.saddle = InteriorEquilibrium{make_equilibrium(m, x, a, b), a >= 0.0 && b >= 0.0,
                                     J[0] * J[3] - J[1] * J[2]};
  }
  return set;
}

struct BistableInterval {
  double x_b;  // F_A(x_b) = s_A F_B(x_b); e_B stable to the right
  double x_a;  // F_B(x_a) = s_B F_A(x_a); e_A stable to the left

  double width() const { return x_a - x_b; }
  bool contains(double x) const { return x > x_b && x < x_a; }
};

inline constexpr double kRootTolerance = 1e-12;

inline BistableInterval find_bistable_interval(const CompetitionModel& m) {
  const auto g_b = [&](double x) { return m.F_A()(x) - m.s_A() * m.F_B()(x); };
  const auto g_a = [&](double x) { return m.F_B()(x) - m.s_B() * m.F_A()(x); };
  const auto xb = bracketed_root(g_b, 0.0, 1.0, kRootTolerance);
  if (!xb) throw HypothesisViolation("F_A - s_A F_B has no sign change on [0,1] (H2)");
  const auto xa = bracketed_root(g_a, 0.0, 1.0, kRootTolerance);
  if (!xa) throw HypothesisViolation("F_B - s_B F_A has no sign change on [0,1] (H2)");
  if (!(xb->x < xa->x))
    throw HypothesisViolation("no bistable overlap: x_b=" + std::to_string(xb->x) +
                              " >= x_a=" + std::to_string(xa->x));
  return {xb->x, xa->x};
}

struct EquilibriumDerivatives {
  double dFA_dx, dFB_dx, dAstar_dx, dBstar_dx;
};

/// x-derivatives of the equilibrium branches from implicit differentiation of
/// H_A = H_B = 0 (and H_A(x,F_A,0) = 0, H_B(x,0,F_B) = 0).
inline EquilibriumDerivatives equilibrium_derivatives(const CompetitionModel& m, double x) {
  require_unit_interval(x);
  const auto star = interior_equilibrium(m, x);
  if (!star || !((*star)[0] > 0.0 && (*star)[1] > 0.0))
    throw DomainError("interior equilibrium not admissible at x=" + std::to_string(x));

  const auto ea = evaluate_reaction(m, x, m.F_A()(x), 0.0);
  const auto eb = evaluate_reaction(m, x, 0.0, m.F_B()(x));
  const auto s = evaluate_reaction(m, x, (*star)[0], (*star)[1]);
  const double det = s.dHA_dA * s.dHB_dB - s.dHA_dB * s.dHB_dA;
  return {-ea.dHA_dx / ea.dHA_dA, -eb.dHB_dx / eb.dHB_dB,
          (s.dHA_dB * s.dHB_dx - s.dHA_dx * s.dHB_dB) / det,
          (s.dHA_dx * s.dHB_dA - s.dHA_dA * s.dHB_dx) / det};
}

/// Saturation constant from raw production/saturation rates: s = beta / (beta - alpha).
inline double rescale_raw_parameters(double alpha, double beta) {
  if (!(alpha > 0.0 && alpha < beta))
    throw DomainError("need 0 < alpha < beta (saturation must dominate self-activation)");
  return beta / (beta - alpha);
}

}  // namespace frontier
