#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace frontier {

/// Argument outside the domain of an operation (x outside [0,1], eps <= 0, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A structural hypothesis on the model does not hold (no sign change, no bistable overlap).
class HypothesisViolation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Linear algebra or discretization failure.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Iterative solver ran out of budget. Carries the last residual seen and,
/// when the solver keeps one, the (time or iteration, residual) trace.
class NonConvergence : public std::runtime_error {
 public:
  NonConvergence(const std::string& what, double last_residual,
                 std::vector<std::pair<double, double>> trace = {})
      : std::runtime_error(what), last_residual_(last_residual), trace_(std::move(trace)) {}
  double last_residual() const noexcept { return last_residual_; }
  const std::vector<std::pair<double, double>>& trace() const noexcept { return trace_; }

 private:
  double last_residual_;
  std::vector<std::pair<double, double>> trace_;
};

/// A monitored invariant (bounds, monotonicity) was violated in strict mode.
class InvariantError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input does not have the expected shape, e.g. a profile with no unique crossing.
class StructureError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Grid too coarse for the requested diffusion scale.
class GridResolutionError : public std::runtime_error {
 public:
  GridResolutionError(const std::string& what, std::size_t required_n)
      : std::runtime_error(what), required_n_(required_n) {}
  std::size_t required_n() const noexcept { return required_n_; }

 private:
  std::size_t required_n_;
};

/// Tracked front left the computational window.
class DomainTooSmall : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace frontier
