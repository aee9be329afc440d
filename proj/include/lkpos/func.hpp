#pragma once

#include <functional>
#include <limits>
#include <string>
#include <utility>

namespace lkpos {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Interval of the real line; endpoints may be infinite.
struct Domain {
  double lo = -kInf;
  double hi = kInf;
  bool lo_closed = false;
  bool hi_closed = false;

  static Domain open(double lo, double hi) { return {lo, hi, false, false}; }
  static Domain closed(double lo, double hi) { return {lo, hi, true, true}; }
  static Domain real_line() { return {}; }

  bool contains(double x) const;
  /// Distance from x to the nearest finite endpoint (infinity if none).
  double distance_to_boundary(double x) const;
};

/// A function value together with whether the evaluation that produced it
/// (typically a quadrature) met its error target.
struct Evaluation {
  double value = 0.0;
  bool converged = true;
};

/// Evaluable real function on an interval, optionally carrying closed-form
/// derivatives up to a stated order.
class FuncHandle {
 public:
  using Evaluator = std::function<Evaluation(double)>;
  using Derivative = std::function<double(double, int)>;

  FuncHandle() = default;
  FuncHandle(std::string name, Domain domain, std::function<double(double)> f);
  FuncHandle(std::string name, Domain domain, Evaluator f);

  /// Returns a copy that also knows f^{(k)} for k <= max_order. The callback
  /// must satisfy deriv(t, 0) == f(t).
  FuncHandle with_derivatives(Derivative deriv, int max_order) const;

  /// Throws DomainError outside the domain.
  Evaluation evaluate(double t) const;
  double operator()(double t) const { return evaluate(t).value; }

  bool has_derivatives() const { return static_cast<bool>(deriv_); }
  int max_order() const { return deriv_ ? max_order_ : 0; }
  /// Closed-form derivative; throws OrderTooHigh when k > max_order().
  double analytic_derivative(double t, int k) const;

  const std::string& name() const { return name_; }
  const Domain& domain() const { return domain_; }
  FuncHandle renamed(std::string name) const;

 private:
  std::string name_;
  Domain domain_;
  Evaluator eval_;
  Derivative deriv_;
  int max_order_ = 0;
};

}  // namespace lkpos
