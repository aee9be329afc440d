#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "lkpos/func.hpp"
#include "lkpos/quadrature.hpp"

namespace lkpos {

struct Atom {
  double lambda = 0.0;
  double weight = 0.0;
};

enum class DensityRule { trapezoid, gauss_composite };

/// Density known at grid nodes and interpolated linearly between them.
/// Beyond grid.back() the density is unknown; `tail_envelope`, when given,
/// bounds it there (as coeff * lambda^power * exp(-rate * lambda)).
struct GriddedDensity {
  std::vector<double> grid;
  std::vector<double> values;
  DensityRule rule = DensityRule::trapezoid;
  std::optional<PowerExpBound> tail_envelope;
};

/// Closed-form density coeff * lambda^power * exp(-rate * lambda) on (lo, hi),
/// lo >= 0. Every example measure in the catalog is a finite sum of these.
struct PowerExpDensity {
  double coeff = 0.0;
  double power = 0.0;
  double rate = 0.0;
  double lo = 0.0;
  double hi = kInf;

  double operator()(double lambda) const;
};

/// Positive Borel measure on the real line: atoms plus densities.
struct Measure {
  std::vector<Atom> atoms;
  std::optional<GriddedDensity> density;
  std::vector<PowerExpDensity> terms;
  /// Support hint [lo, hi]. When absent it is derived from the parts.
  std::optional<std::pair<double, double>> support;

  static Measure dirac(double lambda, double weight = 1.0);
  static Measure power_exp(double coeff, double power, double rate, double lo = 0.0,
                           double hi = kInf);

  Measure& add_atom(double lambda, double weight);
  Measure& add_term(const PowerExpDensity& term);

  bool empty() const { return atoms.empty() && !density && terms.empty(); }
  /// Throws InvalidMeasure when an invariant is violated.
  void validate() const;
  std::pair<double, double> support_interval() const;
};

/// Laplace transform value with its certified error budget.
struct LaplaceValue {
  double value = 0.0;
  double truncation_bound = 0.0;
  bool converged = true;
};

/// Integrand of a measure integral together with envelopes of |g| on (0, 1]
/// and [1, infinity), needed to bound the parts of unbounded densities that
/// are never sampled.
struct KernelSpec {
  std::function<double(double)> g;
  PowerExpBound head;
  PowerExpBound tail;
};

/// Integral of g against mu with error at most `tol` when converged.
/// Throws DivergentIntegral when the integral is infinite or cannot be bounded.
LaplaceValue integrate(const Measure& mu, const KernelSpec& kernel, double tol);

/// L(mu)(t) = int e^{-lambda t} dmu(lambda).
LaplaceValue laplace(const Measure& mu, double t, double tol);

/// k-th derivative of L(mu) at t: (-1)^k int lambda^k e^{-lambda t} dmu, k <= 8.
LaplaceValue laplace_deriv(const Measure& mu, double t, int k, double tol);

double total_mass(const Measure& mu);
/// Mass of {|lambda| > T}.
double tail_mass(const Measure& mu, double T);

/// int (1 wedge lambda) dsigma for sigma supported in (0, infinity).
double one_wedge_integral(const Measure& sigma);

/// t -> L(mu)(t) as a function handle with derivatives from laplace_deriv.
FuncHandle laplace_function(const Measure& mu, Domain domain, double tol = 1e-12,
                            std::string name = "laplace");

}  // namespace lkpos
