#pragma once

#include <vector>

#include "lkpos/func.hpp"
#include "lkpos/measure.hpp"

namespace lkpos {

/// (1 - lambda u - e^{-lambda u}) / lambda^2 with u = t - t0; -u^2/2 at lambda = 0.
double e_lambda(double lambda, double t, double t0);
/// d/dt e_lambda(t) = (e^{-lambda u} - 1) / lambda.
double e_lambda_dt(double lambda, double t, double t0);
/// (e^{-lambda} - e^{-lambda t}) / lambda; t - 1 at lambda = 0.
double f_lambda(double lambda, double t);

/// psi(t) = c + d (t - t0) + int e_lambda(t) e^{-lambda t0} dmu(lambda) on (a, b).
struct LKIntervalRep {
  double t0 = 0.0;
  double c = 0.0;
  double d = 0.0;
  Measure mu;
  Domain interval = Domain::real_line();

  /// Checks t0 in the interval and that L(mu) converges on a probe grid.
  void validate(double tol = 1e-8) const;
};

/// psi(t) = c + int_{[0, inf)} f_lambda(t) dmu(lambda) on (0, inf).
struct LKIncreasingRep {
  double c = 0.0;
  Measure mu;

  void validate() const;
};

/// psi(t) = a + b t + int_{(0, inf)} (1 - e^{-lambda t}) dsigma(lambda).
struct BernsteinRep {
  double a = 0.0;
  double b = 0.0;
  Measure sigma;

  /// Throws InvalidRep unless a, b >= 0 and int (1 wedge lambda) dsigma < inf.
  void validate() const;
};

LaplaceValue synth_interval(const LKIntervalRep& rep, double t, double tol);
LaplaceValue synth_increasing(const LKIncreasingRep& rep, double t, double tol);
LaplaceValue synth_bernstein(const BernsteinRep& rep, double t, double tol);
/// Even extension a + b|t| + int (1 - e^{-lambda |t|}) dsigma.
LaplaceValue synth_reflection_negative(const BernsteinRep& rep, double t, double tol);

/// The synthesized functions as handles. All but the reflection negative one
/// carry closed-form derivatives up to order 8.
FuncHandle interval_function(const LKIntervalRep& rep, double tol = 1e-10);
FuncHandle increasing_function(const LKIncreasingRep& rep, double tol = 1e-10);
FuncHandle bernstein_function(const BernsteinRep& rep, double tol = 1e-10);
FuncHandle reflection_negative_function(const BernsteinRep& rep, double tol = 1e-10);

/// The same function in increasing form: mu = b delta_0 + lambda sigma(d lambda), c = psi(1).
LKIncreasingRep to_increasing(const BernsteinRep& rep, double tol = 1e-12);
/// lambda * mu(d lambda), part by part.
Measure lambda_weighted(const Measure& mu);

/// 40 log-spaced points in [1e-3, 1e3] plus 0.
std::vector<double> default_lambda_grid();

struct IntervalAnalysis {
  LKIntervalRep rep;
  /// max over the fit grid of |L(mu_fit)(s) + psi''(s)|.
  double residual = 0.0;
};

struct IncreasingAnalysis {
  LKIncreasingRep rep;
  /// max over the fit grid of |L(mu_fit)(s) - psi'(s)|.
  double residual = 0.0;
};

/// c = psi(t0), d = psi'(t0); mu fitted to -psi'' on the fit grid by
/// nonnegative least squares over atoms at lambda_grid. The fitted mu is not
/// unique; only c and d are determined exactly.
IntervalAnalysis analyze_interval(const FuncHandle& psi, double t0, const std::vector<double>& fit_grid,
                                  const std::vector<double>& lambda_grid = default_lambda_grid(),
                                  double tol = 1e-8);

/// c = psi(1); mu fitted to psi'. Throws NotIncreasing if psi' < -tol and
/// NotNegativeDefinite if psi' is not completely monotone on the fit grid.
IncreasingAnalysis analyze_increasing(const FuncHandle& psi, const std::vector<double>& fit_grid,
                                      const std::vector<double>& lambda_grid = default_lambda_grid(),
                                      double tol = 1e-8);

}  // namespace lkpos
