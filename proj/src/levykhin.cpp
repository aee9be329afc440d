#include "lkpos/levykhin.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "lkpos/diffcalc.hpp"
#include "lkpos/error.hpp"
#include "lkpos/grids.hpp"
#include "lkpos/nnls.hpp"

namespace lkpos {

namespace {

// (1 - e^{-y}) / y, equal to 1 at 0; expm1 keeps it accurate for small y.
double g1(double y) { return y == 0.0 ? 1.0 : -std::expm1(-y) / y; }

// (e^{-x} - 1 + x) / x^2 = sum_m (-x)^m / (m+2)!.
double h2(double x) {
  if (std::abs(x) >= 1.0) return (std::expm1(-x) + x) / (x * x);
  double term = 0.5, sum = 0.5;
  for (int m = 1; m < 30; ++m) {
    term *= -x / (m + 2);
    const double next = sum + term;
    if (next == sum) break;
    sum = next;
  }
  return sum;
}

LaplaceValue shift(LaplaceValue v, double offset) {
  v.value += offset;
  return v;
}

void require_in(const Domain& d, double t, const char* what) {
  if (!d.contains(t)) throw Error(ErrorKind::DomainError, std::string(what) + ": t outside the interval");
}

// e_lambda(t) e^{-lambda t0} and its t-derivative. Below x = lambda u = -1
// the direct form has no cancellation and avoids e^{-x} overflowing while
// e^{-lambda t0} underflows.
double e_weighted(double lambda, double t, double t0) {
  const double x = lambda * (t - t0);
  if (x > -1.0) return e_lambda(lambda, t, t0) * std::exp(-lambda * t0);
  return ((1.0 - x) * std::exp(-lambda * t0) - std::exp(-lambda * t)) / (lambda * lambda);
}

double e_dt_weighted(double lambda, double t, double t0) {
  const double x = lambda * (t - t0);
  if (x > -1.0) return e_lambda_dt(lambda, t, t0) * std::exp(-lambda * t0);
  return (std::exp(-lambda * t) - std::exp(-lambda * t0)) / lambda;
}

KernelSpec interval_kernel(double t, double t0) {
  const double u = t - t0;
  KernelSpec k;
  k.g = [t, t0](double lambda) { return e_weighted(lambda, t, t0); };
  k.head = {0.5 * u * u * std::exp(std::abs(u) + std::abs(t0)), 0.0, 0.0};
  k.tail = {2.0 + std::abs(u), -1.0, std::min(t0, t)};
  return k;
}

KernelSpec interval_kernel_dt(double t, double t0) {
  const double u = t - t0;
  KernelSpec k;
  k.g = [t, t0](double lambda) { return e_dt_weighted(lambda, t, t0); };
  k.head = {std::abs(u) * std::exp(std::abs(u) + std::abs(t0)), 0.0, 0.0};
  k.tail = {2.0, -1.0, std::min(t0, t)};
  return k;
}

KernelSpec increasing_kernel(double t) {
  KernelSpec k;
  k.g = [t](double lambda) { return f_lambda(lambda, t); };
  k.head = {std::abs(t - 1.0), 0.0, 0.0};
  k.tail = {2.0, -1.0, std::min(1.0, t)};
  return k;
}

KernelSpec bernstein_kernel(double t) {
  KernelSpec k;
  k.g = [t](double lambda) { return -std::expm1(-lambda * t); };
  k.head = {t, 1.0, 0.0};
  k.tail = {1.0, 0.0, 0.0};
  return k;
}

Evaluation as_eval(const LaplaceValue& v) { return {v.value, v.converged}; }

void require_positive_t(double t, const char* what) {
  if (!(t > 0.0)) throw Error(ErrorKind::DomainError, std::string(what) + ": t must be > 0");
}

}  // namespace

double e_lambda(double lambda, double t, double t0) {
  const double u = t - t0;
  return -u * u * h2(lambda * u);
}

double e_lambda_dt(double lambda, double t, double t0) {
  const double u = t - t0;
  return -u * g1(lambda * u);
}

double f_lambda(double lambda, double t) {
  const double v = t - 1.0;
  // For lambda v <= -1 the difference has no cancellation; the product form
  // would overflow in e^{-lambda v} while e^{-lambda} underflows.
  if (lambda * v <= -1.0) return (std::exp(-lambda) - std::exp(-lambda * t)) / lambda;
  return std::exp(-lambda) * v * g1(lambda * v);
}

void LKIntervalRep::validate(double tol) const {
  mu.validate();
  if (!interval.contains(t0)) throw Error(ErrorKind::InvalidRep, "t0 must lie in the interval");
  const auto [lo, hi] = probe_window(interval);
  for (double s : chebyshev_points(lo, hi, 5)) {
    if (!laplace(mu, s, tol).converged) {
      throw Error(ErrorKind::DivergentIntegral, "Laplace transform not finite on the interval");
    }
  }
}

void LKIncreasingRep::validate() const {
  mu.validate();
  if (!mu.empty() && mu.support_interval().first < 0.0) {
    throw Error(ErrorKind::InvalidRep, "mu must be supported in [0, inf)");
  }
}

void BernsteinRep::validate() const {
  if (!(a >= 0.0) || !(b >= 0.0)) throw Error(ErrorKind::InvalidRep, "a and b must be >= 0");
  if (sigma.empty()) return;
  try {
    sigma.validate();
    (void)one_wedge_integral(sigma);
  } catch (const Error& e) {
    throw Error(ErrorKind::InvalidRep, std::string("sigma: ") + e.what());
  }
}

LaplaceValue synth_interval(const LKIntervalRep& rep, double t, double tol) {
  require_in(rep.interval, t, "synth_interval");
  const double affine = rep.c + rep.d * (t - rep.t0);
  if (rep.mu.empty()) return {affine, 0.0, true};
  return shift(integrate(rep.mu, interval_kernel(t, rep.t0), tol), affine);
}

LaplaceValue synth_increasing(const LKIncreasingRep& rep, double t, double tol) {
  require_positive_t(t, "synth_increasing");
  if (rep.mu.empty() || t == 1.0) return {rep.c, 0.0, true};
  return shift(integrate(rep.mu, increasing_kernel(t), tol), rep.c);
}

LaplaceValue synth_bernstein(const BernsteinRep& rep, double t, double tol) {
  require_positive_t(t, "synth_bernstein");
  rep.validate();
  const double affine = rep.a + rep.b * t;
  if (rep.sigma.empty()) return {affine, 0.0, true};
  return shift(integrate(rep.sigma, bernstein_kernel(t), tol), affine);
}

LaplaceValue synth_reflection_negative(const BernsteinRep& rep, double t, double tol) {
  if (t == 0.0) {
    rep.validate();
    return {rep.a, 0.0, true};
  }
  return synth_bernstein(rep, std::abs(t), tol);
}

FuncHandle interval_function(const LKIntervalRep& rep, double tol) {
  rep.validate(tol);
  const auto deriv = [rep, tol](double t, int k) -> double {
    switch (k) {
      case 0: return synth_interval(rep, t, tol).value;
      case 1: {
        const double d = rep.d;
        if (rep.mu.empty()) return d;
        return d + integrate(rep.mu, interval_kernel_dt(t, rep.t0), tol).value;
      }
      default: return -laplace_deriv(rep.mu, t, k - 2, tol).value;
    }
  };
  return FuncHandle("lk_interval", rep.interval,
                    FuncHandle::Evaluator([rep, tol](double t) { return as_eval(synth_interval(rep, t, tol)); }))
      .with_derivatives(deriv, 8);
}

FuncHandle increasing_function(const LKIncreasingRep& rep, double tol) {
  rep.validate();
  const auto deriv = [rep, tol](double t, int k) -> double {
    if (k == 0) return synth_increasing(rep, t, tol).value;
    return laplace_deriv(rep.mu, t, k - 1, tol).value;
  };
  return FuncHandle("lk_increasing", Domain::open(0.0, kInf), FuncHandle::Evaluator([rep, tol](double t) {
                      return as_eval(synth_increasing(rep, t, tol));
                    }))
      .with_derivatives(deriv, 8);
}

FuncHandle bernstein_function(const BernsteinRep& rep, double tol) {
  rep.validate();
  // Validated once here; the evaluators skip the repeated wedge integral.
  BernsteinRep plain = rep;
  const auto eval = [plain, tol](double t) -> Evaluation {
    require_positive_t(t, "bernstein");
    if (plain.sigma.empty()) return {plain.a + plain.b * t, true};
    return as_eval(shift(integrate(plain.sigma, bernstein_kernel(t), tol), plain.a + plain.b * t));
  };
  const auto deriv = [plain, tol, eval](double t, int k) -> double {
    if (k == 0) return eval(t).value;
    const double s = plain.sigma.empty() ? 0.0 : -laplace_deriv(plain.sigma, t, k, tol).value;
    return k == 1 ? plain.b + s : s;
  };
  return FuncHandle("bernstein", Domain::open(0.0, kInf), FuncHandle::Evaluator(eval)).with_derivatives(deriv, 8);
}

FuncHandle reflection_negative_function(const BernsteinRep& rep, double tol) {
  const FuncHandle half = bernstein_function(rep, tol);
  const double a = rep.a;
  return FuncHandle("reflection_negative", Domain::real_line(), FuncHandle::Evaluator([half, a](double t) {
                      if (t == 0.0) return Evaluation{a, true};
                      return half.evaluate(std::abs(t));
                    }));
}

Measure lambda_weighted(const Measure& mu) {
  Measure out;
  for (const Atom& at : mu.atoms)
    if (at.lambda != 0.0) out.add_atom(at.lambda, at.weight * at.lambda);
  for (PowerExpDensity term : mu.terms) {
    term.power += 1.0;
    out.add_term(term);
  }
  if (mu.density) {
    GriddedDensity d = *mu.density;
    for (std::size_t i = 0; i < d.grid.size(); ++i) d.values[i] *= d.grid[i];
    if (d.tail_envelope) d.tail_envelope->power += 1.0;
    out.density = d;
  }
  out.support = mu.support;
  return out;
}

LKIncreasingRep to_increasing(const BernsteinRep& rep, double tol) {
  rep.validate();
  LKIncreasingRep out;
  out.mu = lambda_weighted(rep.sigma);
  if (rep.b > 0.0) out.mu.add_atom(0.0, rep.b);
  out.c = synth_bernstein(rep, 1.0, tol).value;
  return out;
}

std::vector<double> default_lambda_grid() {
  std::vector<double> g = log_spaced(1e-3, 1e3, 40);
  g.insert(g.begin(), 0.0);
  return g;
}

namespace {

struct Fit {
  Measure mu;
  double residual = 0.0;
};

// Nonnegative atoms at lambda_grid with sum w_j e^{-lambda_j s_i} ~ target_i.
Fit fit_exponentials(const std::vector<double>& s, const std::vector<double>& target,
                     const std::vector<double>& lambda_grid) {
  std::vector<double> lams;
  for (double l : lambda_grid) {
    bool ok = std::isfinite(l);
    for (double x : s) ok = ok && std::abs(l * x) <= 700.0;
    if (ok) lams.push_back(l);
  }
  if (lams.empty()) throw Error(ErrorKind::InvalidArgument, "no usable lambda in the grid");
  const Eigen::Index m = static_cast<Eigen::Index>(s.size()), n = static_cast<Eigen::Index>(lams.size());
  Eigen::MatrixXd a(m, n);
  Eigen::VectorXd b(m), norms(n);
  for (Eigen::Index i = 0; i < m; ++i) b(i) = target[i];
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i < m; ++i) a(i, j) = std::exp(-lams[j] * s[i]);
    norms(j) = a.col(j).norm();
    a.col(j) /= norms(j);
  }
  const NnlsResult r = nnls(a, b);
  Fit out;
  for (Eigen::Index j = 0; j < n; ++j)
    if (r.x(j) > 0.0) out.mu.add_atom(lams[j], r.x(j) / norms(j));
  out.residual = (a * r.x - b).cwiseAbs().maxCoeff();
  return out;
}

void check_fit_grid(const FuncHandle& psi, const std::vector<double>& fit_grid) {
  if (fit_grid.empty()) throw Error(ErrorKind::InvalidArgument, "fit grid must be nonempty");
  for (double s : fit_grid)
    if (!psi.domain().contains(s)) throw Error(ErrorKind::DomainError, "fit grid point outside the domain");
}

}  // namespace

IntervalAnalysis analyze_interval(const FuncHandle& psi, double t0, const std::vector<double>& fit_grid,
                                  const std::vector<double>& lambda_grid, double tol) {
  check_fit_grid(psi, fit_grid);
  IntervalAnalysis out;
  out.rep.t0 = t0;
  out.rep.c = psi(t0);
  out.rep.d = derivative(psi, t0, 1);
  out.rep.interval = psi.domain();
  std::vector<double> target;
  for (double s : fit_grid) {
    const double v = -derivative(psi, s, 2);
    if (v < -tol) {
      throw Error(ErrorKind::NotNegativeDefinite,
                  "-psi'' = " + std::to_string(v) + " < 0 at t = " + std::to_string(s));
    }
    target.push_back(std::max(v, 0.0));
  }
  Fit fit = fit_exponentials(fit_grid, target, lambda_grid);
  out.rep.mu = std::move(fit.mu);
  out.residual = fit.residual;
  return out;
}

IncreasingAnalysis analyze_increasing(const FuncHandle& psi, const std::vector<double>& fit_grid,
                                      const std::vector<double>& lambda_grid, double tol) {
  check_fit_grid(psi, fit_grid);
  for (double s : fit_grid)
    if (!(s > 0.0)) throw Error(ErrorKind::DomainError, "fit grid must lie in (0, inf)");
  IncreasingAnalysis out;
  out.rep.c = psi(1.0);
  std::vector<double> target;
  for (double s : fit_grid) {
    const double v = derivative(psi, s, 1);
    if (v < -tol) {
      throw Error(ErrorKind::NotIncreasing, "psi' = " + std::to_string(v) + " < 0 at t = " + std::to_string(s));
    }
    target.push_back(std::max(v, 0.0));
  }
  const FuncHandle dpsi("dpsi", psi.domain(), [psi](double t) { return derivative(psi, t, 1); });
  std::vector<double> sorted = fit_grid;
  std::sort(sorted.begin(), sorted.end());
  // Differences must stay inside the domain; the smallest relative step does.
  const PositivityVerdict cm = completely_monotone_check(dpsi, sorted, 3, {1e-2}, std::max(tol, 1e-8));
  if (cm.failed()) {
    throw Error(ErrorKind::NotNegativeDefinite, "psi' is not completely monotone: " + cm.note);
  }
  Fit fit = fit_exponentials(fit_grid, target, lambda_grid);
  out.rep.mu = std::move(fit.mu);
  out.residual = fit.residual;
  return out;
}

}  // namespace lkpos
