#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <variant>
#include <vector>

#include "frontier/errors.hpp"

namespace frontier {

enum class Direction { decreasing, increasing };

inline const char* to_string(Direction d) {
  return d == Direction::decreasing ? "decreasing" : "increasing";
}

/// F(x) = intercept + slope * x
struct LinearFamily {
  double intercept;
  double slope;
};

/// F(x) = scale * exp(rate * x)
struct ExponentialFamily {
  double scale;
  double rate;
};

/// Monotone piecewise cubic Hermite interpolant (Fritsch-Carlson slopes).
struct TabulatedFamily {
  std::vector<double> knots;
  std::vector<double> values;
};

using GradientFamily = std::variant<LinearFamily, ExponentialFamily, TabulatedFamily>;

/**
 * A monotone morphogen profile on [0,1].
 *
 * Construction validates that F stays above the floor and that the sign of
 * dF/dx matches the declared direction on a dense sample. Whether the profile
 * plays the role of F_A or F_B is the model's business, not this type's.
 */
class GradientSpec {
 public:
  static constexpr std::size_t kValidationSamples = 1001;

  GradientSpec(GradientFamily family, Direction direction, double floor)
      : family_(std::move(family)), direction_(direction), floor_(floor) {
    if (!(floor_ > 0.0)) throw DomainError("gradient floor must be positive");
    if (auto* tab = std::get_if<TabulatedFamily>(&family_)) prepare_tabulated(*tab);
    validate();
  }

  static GradientSpec linear(double intercept, double slope, double floor = 1e-6) {
    return {LinearFamily{intercept, slope}, slope < 0 ? Direction::decreasing : Direction::increasing,
            floor};
  }
  static GradientSpec exponential(double scale, double rate, double floor = 1e-6) {
    return {ExponentialFamily{scale, rate}, rate < 0 ? Direction::decreasing : Direction::increasing,
            floor};
  }
  static GradientSpec tabulated(std::vector<double> knots, std::vector<double> values,
                                double floor = 1e-6) {
    const Direction dir =
        values.size() >= 2 && values.back() < values.front() ? Direction::decreasing
                                                             : Direction::increasing;
    return {TabulatedFamily{std::move(knots), std::move(values)}, dir, floor};
  }

  double operator()(double x) const { return value(x); }

  double value(double x) const {
    return std::visit(
        [&](const auto& f) -> double {
          using T = std::decay_t<decltype(f)>;
          if constexpr (std::is_same_v<T, LinearFamily>) {
            return f.intercept + f.slope * x;
          } else if constexpr (std::is_same_v<T, ExponentialFamily>) {
            return f.scale * std::exp(f.rate * x);
          } else {
            return hermite(f, x, false);
          }
        },
        family_);
  }

  double derivative(double x) const {
    return std::visit(
        [&](const auto& f) -> double {
          using T = std::decay_t<decltype(f)>;
          if constexpr (std::is_same_v<T, LinearFamily>) {
            return f.slope;
          } else if constexpr (std::is_same_v<T, ExponentialFamily>) {
            return f.scale * f.rate * std::exp(f.rate * x);
          } else {
            return hermite(f, x, true);
          }
        },
        family_);
  }

  const GradientFamily& family() const noexcept { return family_; }
  Direction direction() const noexcept { return direction_; }
  double floor() const noexcept { return floor_; }

  std::string family_name() const {
    switch (family_.index()) {
      case 0: return "linear";
      case 1: return "exponential";
      default: return "tabulated";
    }
  }

 private:
  void prepare_tabulated(const TabulatedFamily& tab) {
    const auto& k = tab.knots;
    const auto& v = tab.values;
    if (k.size() < 2 || k.size() != v.size())
      throw DomainError("tabulated gradient needs >= 2 knots with matching values");
    if (k.front() > 0.0 || k.back() < 1.0)
      throw DomainError("tabulated gradient knots must cover [0,1]");
    for (std::size_t i = 1; i < k.size(); ++i)
      if (!(k[i] > k[i - 1])) throw DomainError("tabulated gradient knots must be increasing");

    const std::size_t n = k.size();
    std::vector<double> delta(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i) delta[i] = (v[i + 1] - v[i]) / (k[i + 1] - k[i]);
    slopes_.assign(n, 0.0);
    slopes_.front() = delta.front();
    slopes_.back() = delta.back();
    for (std::size_t i = 1; i + 1 < n; ++i)
      slopes_[i] = delta[i - 1] * delta[i] <= 0.0 ? 0.0 : 0.5 * (delta[i - 1] + delta[i]);
    // Fritsch-Carlson limiter keeps each cubic piece monotone.
    for (std::size_t i = 0; i + 1 < n; ++i) {
      if (delta[i] == 0.0) {
        slopes_[i] = slopes_[i + 1] = 0.0;
        continue;
      }
      const double a = slopes_[i] / delta[i];
      const double b = slopes_[i + 1] / delta[i];
      const double r = a * a + b * b;
      if (r > 9.0) {
        const double t = 3.0 / std::sqrt(r);
        slopes_[i] = t * a * delta[i];
        slopes_[i + 1] = t * b * delta[i];
      }
    }
  }

  double hermite(const TabulatedFamily& f, double x, bool want_derivative) const {
    const auto& k = f.knots;
    std::size_t i = static_cast<std::size_t>(std::upper_bound(k.begin(), k.end(), x) - k.begin());
    i = std::clamp<std::size_t>(i, 1, k.size() - 1) - 1;
    const double h = k[i + 1] - k[i];
    const double t = (x - k[i]) / h;
    const double y0 = f.values[i], y1 = f.values[i + 1];
    const double m0 = slopes_[i] * h, m1 = slopes_[i + 1] * h;
    if (want_derivative) {
      const double t2 = t * t;
      return ((6 * t2 - 6 * t) * y0 + (3 * t2 - 4 * t + 1) * m0 + (-6 * t2 + 6 * t) * y1 +
              (3 * t2 - 2 * t) * m1) /
             h;
    }
    const double t2 = t * t, t3 = t2 * t;
    return (2 * t3 - 3 * t2 + 1) * y0 + (t3 - 2 * t2 + t) * m0 + (-2 * t3 + 3 * t2) * y1 +
           (t3 - t2) * m1;
  }

  void validate() const {
    for (std::size_t i = 0; i < kValidationSamples; ++i) {
      const double x = static_cast<double>(i) / (kValidationSamples - 1);
      if (!(value(x) >= floor_))
        throw DomainError("gradient drops below its floor at x=" + std::to_string(x));
      const double d = derivative(x);
      const bool ok = direction_ == Direction::decreasing ? d < 0.0 : d > 0.0;
      if (!ok)
        throw DomainError("gradient derivative disagrees with direction '" +
                          std::string(to_string(direction_)) + "' at x=" + std::to_string(x));
    }
  }

  GradientFamily family_;
  Direction direction_;
  double floor_;
  std::vector<double> slopes_;
};

}  // namespace frontier
