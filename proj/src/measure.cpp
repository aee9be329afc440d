#include "lkpos/measure.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "lkpos/error.hpp"

namespace lkpos {

namespace {

constexpr int kMaxDyadic = 1000;

bool finite_nonneg(double x) { return std::isfinite(x) && x >= 0.0; }

double interp(const GriddedDensity& d, std::size_t cell, double lambda) {
  const double x0 = d.grid[cell], x1 = d.grid[cell + 1];
  const double v0 = d.values[cell], v1 = d.values[cell + 1];
  return v0 + (v1 - v0) * (lambda - x0) / (x1 - x0);
}

struct Accumulator {
  double value = 0.0;
  double bound = 0.0;
  bool converged = true;
};

void integrate_gridded(const GriddedDensity& d, std::pair<double, double> support,
                       const KernelSpec& kernel, Accumulator& acc) {
  const std::size_t n = d.grid.size();
  std::vector<double> gv(n);
  for (std::size_t i = 0; i < n; ++i) gv[i] = kernel.g(d.grid[i]);

  double trap = 0.0, gauss = 0.0, gauss_coarse = 0.0;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double h = d.grid[i + 1] - d.grid[i];
    trap += 0.5 * h * (d.values[i] * gv[i] + d.values[i + 1] * gv[i + 1]);
    if (d.rule == DensityRule::gauss_composite) {
      auto f = [&](double lam) { return interp(d, i, lam) * kernel.g(lam); };
      gauss += gauss_panel(f, d.grid[i], d.grid[i + 1], 8);
      gauss_coarse += gauss_panel(f, d.grid[i], d.grid[i + 1], 4);
    }
  }
  if (d.rule == DensityRule::trapezoid) {
    // Error estimate: distance to the exact integral of the interpolant.
    double exact = 0.0;
    for (std::size_t i = 0; i + 1 < n; ++i) {
      auto f = [&](double lam) { return interp(d, i, lam) * kernel.g(lam); };
      exact += gauss_panel(f, d.grid[i], d.grid[i + 1], 8);
    }
    acc.value += trap;
    acc.bound += std::abs(trap - exact);
  } else {
    acc.value += gauss;
    acc.bound += std::abs(gauss - gauss_coarse);
  }

  const double top = d.grid.back();
  if (support.first < d.grid.front()) acc.converged = false;
  if (support.second > top) {
    if (!d.tail_envelope) {
      acc.converged = false;
      acc.bound = kInf;
      return;
    }
    const PowerExpBound& env = *d.tail_envelope;
    double extra = 0.0;
    if (top < 1.0) {
      const double hi = std::min(1.0, support.second);
      const PowerExpBound b = env * kernel.head;
      extra += adaptive_gauss([&](double x) { return b(x); }, std::max(top, 0.0), hi, 1e-14).value;
    }
    if (support.second > 1.0) extra += tail_integral_bound(env * kernel.tail, std::max(top, 1.0));
    if (!std::isfinite(extra)) {
      throw Error(ErrorKind::DivergentIntegral, "density tail envelope is not integrable");
    }
    acc.bound += extra;
  }
}

void integrate_term(const PowerExpDensity& term, const KernelSpec& kernel, double budget,
                    Accumulator& acc) {
  if (term.coeff == 0.0 || !(term.hi > term.lo)) return;
  const PowerExpBound density{term.coeff, term.power, term.rate};
  const double edge_budget = 0.1 * budget;

  double start = term.lo;
  if (term.lo == 0.0) {
    const PowerExpBound b = density * kernel.head;
    if (b.coeff != 0.0 && b.power <= -1.0) {
      throw Error(ErrorKind::DivergentIntegral, "integrand is not integrable at lambda = 0");
    }
    double eps = std::min(1.0, term.hi);
    double hb = head_integral_bound(b, eps);
    int k = 0;
    while (hb > edge_budget && k < kMaxDyadic) {
      eps *= 0.5;
      hb = head_integral_bound(b, eps);
      ++k;
    }
    if (hb > edge_budget) acc.converged = false;
    acc.bound += hb;
    start = eps;
  }

  double end = term.hi;
  if (std::isinf(term.hi)) {
    const PowerExpBound b = density * kernel.tail;
    const bool divergent = b.coeff != 0.0 && (b.rate < 0.0 || (b.rate == 0.0 && b.power >= -1.0));
    if (divergent) throw Error(ErrorKind::DivergentIntegral, "integrand does not decay at infinity");
    double T = std::max(1.0, start);
    double tb = tail_integral_bound(b, T);
    int k = 0;
    while (tb > edge_budget && k < kMaxDyadic) {
      T *= 2.0;
      tb = tail_integral_bound(b, T);
      ++k;
    }
    if (!(tb <= edge_budget)) acc.converged = false;
    acc.bound += tb;
    end = T;
  }

  // Dyadic breakpoints grade the mesh toward 0 and toward infinity.
  std::vector<double> cuts{start};
  double p = std::exp2(std::ceil(std::log2(start)));
  if (p == start) p *= 2.0;
  for (; p < end; p *= 2.0) cuts.push_back(p);
  if (cuts.back() < end) cuts.push_back(end);

  auto f = [&](double lam) { return density(lam) * kernel.g(lam); };
  const double panel_tol = 0.8 * budget / static_cast<double>(cuts.size());
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const QuadResult r = adaptive_gauss(f, cuts[i], cuts[i + 1], panel_tol, 30);
    acc.value += r.value;
    acc.bound += r.error;
  }
}

std::pair<double, double> clip(std::pair<double, double> a, double lo, double hi) {
  return {std::max(a.first, lo), std::min(a.second, hi)};
}

}  // namespace

double PowerExpDensity::operator()(double lambda) const {
  if (lambda < lo || lambda > hi) return 0.0;
  return coeff * std::pow(lambda, power) * std::exp(-rate * lambda);
}

Measure Measure::dirac(double lambda, double weight) {
  Measure m;
  m.atoms.push_back({lambda, weight});
  return m;
}

Measure Measure::power_exp(double coeff, double power, double rate, double lo, double hi) {
  Measure m;
  m.terms.push_back({coeff, power, rate, lo, hi});
  return m;
}

Measure& Measure::add_atom(double lambda, double weight) {
  atoms.push_back({lambda, weight});
  return *this;
}

Measure& Measure::add_term(const PowerExpDensity& term) {
  terms.push_back(term);
  return *this;
}

void Measure::validate() const {
  for (const Atom& a : atoms) {
    if (!std::isfinite(a.lambda) || !finite_nonneg(a.weight)) {
      throw Error(ErrorKind::InvalidMeasure, "atom weights must be finite and >= 0");
    }
  }
  if (density) {
    const auto& d = *density;
    if (d.grid.size() < 2 || d.grid.size() != d.values.size()) {
      throw Error(ErrorKind::InvalidMeasure, "density grid and values must match, size >= 2");
    }
    for (std::size_t i = 0; i < d.grid.size(); ++i) {
      if (!std::isfinite(d.grid[i]) || !finite_nonneg(d.values[i])) {
        throw Error(ErrorKind::InvalidMeasure, "density values must be finite and >= 0");
      }
      if (i > 0 && !(d.grid[i] > d.grid[i - 1])) {
        throw Error(ErrorKind::InvalidMeasure, "density grid must be strictly increasing");
      }
    }
    if (d.tail_envelope && !finite_nonneg(d.tail_envelope->coeff)) {
      throw Error(ErrorKind::InvalidMeasure, "tail envelope coefficient must be >= 0");
    }
  }
  for (const PowerExpDensity& t : terms) {
    if (!finite_nonneg(t.coeff) || !std::isfinite(t.power) || !std::isfinite(t.rate) ||
        !(t.lo >= 0.0) || !(t.hi > t.lo)) {
      throw Error(ErrorKind::InvalidMeasure, "power-exp density needs coeff >= 0, 0 <= lo < hi");
    }
  }
  if (support && !(support->first <= support->second)) {
    throw Error(ErrorKind::InvalidMeasure, "support hint must satisfy lo <= hi");
  }
}

std::pair<double, double> Measure::support_interval() const {
  if (support) return *support;
  double lo = kInf, hi = -kInf;
  for (const Atom& a : atoms) lo = std::min(lo, a.lambda), hi = std::max(hi, a.lambda);
  if (density) lo = std::min(lo, density->grid.front()), hi = std::max(hi, density->grid.back());
  for (const auto& t : terms) lo = std::min(lo, t.lo), hi = std::max(hi, t.hi);
  if (lo > hi) return {0.0, 0.0};
  return {lo, hi};
}

LaplaceValue integrate(const Measure& mu, const KernelSpec& kernel, double tol) {
  if (!(tol > 0.0)) throw Error(ErrorKind::InvalidArgument, "tolerance must be > 0");
  mu.validate();
  Accumulator acc;
  for (const Atom& a : mu.atoms) {
    if (a.weight == 0.0) continue;
    acc.value += a.weight * kernel.g(a.lambda);
  }
  if (!std::isfinite(acc.value)) {
    throw Error(ErrorKind::DivergentIntegral, "atom contribution overflows");
  }
  if (mu.density) integrate_gridded(*mu.density, mu.support_interval(), kernel, acc);
  if (!mu.terms.empty()) {
    const double budget = 0.5 * tol / static_cast<double>(mu.terms.size());
    for (const auto& term : mu.terms) integrate_term(term, kernel, budget, acc);
  }
  if (!std::isfinite(acc.value)) {
    throw Error(ErrorKind::DivergentIntegral, "integral is not finite");
  }
  LaplaceValue out;
  out.value = acc.value;
  out.truncation_bound = acc.bound;
  out.converged = acc.converged && acc.bound <= tol;
  return out;
}

LaplaceValue laplace_deriv(const Measure& mu, double t, int k, double tol) {
  if (k < 0 || k > 8) throw Error(ErrorKind::OrderTooHigh, "laplace_deriv supports 0 <= k <= 8");
  if (!std::isfinite(t)) throw Error(ErrorKind::DomainError, "t must be finite");
  const double sign = (k % 2 == 0) ? 1.0 : -1.0;
  KernelSpec kernel;
  kernel.g = [t, k, sign](double lambda) {
    double p = 1.0;
    for (int i = 0; i < k; ++i) p *= lambda;
    return sign * p * std::exp(-lambda * t);
  };
  kernel.head = {std::max(1.0, std::exp(-t)), static_cast<double>(k), 0.0};
  kernel.tail = {1.0, static_cast<double>(k), t};
  return integrate(mu, kernel, tol);
}

LaplaceValue laplace(const Measure& mu, double t, double tol) { return laplace_deriv(mu, t, 0, tol); }

double total_mass(const Measure& mu) {
  KernelSpec kernel{[](double) { return 1.0; }, {1.0, 0.0, 0.0}, {1.0, 0.0, 0.0}};
  const LaplaceValue v = integrate(mu, kernel, 1e-10);
  return v.value;
}

double tail_mass(const Measure& mu, double T) {
  mu.validate();
  const double cut = std::abs(T);
  double mass = 0.0;
  for (const Atom& a : mu.atoms) {
    if (std::abs(a.lambda) > cut) mass += a.weight;
  }
  if (mu.density) {
    const auto& d = *mu.density;
    // Exact integral of the piecewise-linear density over |lambda| > cut.
    for (std::size_t i = 0; i + 1 < d.grid.size(); ++i) {
      for (auto piece : {clip({d.grid[i], d.grid[i + 1]}, -kInf, -cut),
                         clip({d.grid[i], d.grid[i + 1]}, cut, kInf)}) {
        if (!(piece.second > piece.first)) continue;
        mass += 0.5 * (piece.second - piece.first) *
                (interp(d, i, piece.first) + interp(d, i, piece.second));
      }
    }
  }
  for (const auto& t : mu.terms) {
    PowerExpDensity part = t;
    part.lo = std::max(t.lo, cut);
    if (!(part.hi > part.lo)) continue;
    Measure m;
    m.terms.push_back(part);
    mass += total_mass(m);
  }
  return mass;
}

double one_wedge_integral(const Measure& sigma) {
  sigma.validate();
  for (const Atom& a : sigma.atoms) {
    if (!(a.lambda > 0.0) && a.weight > 0.0) {
      throw Error(ErrorKind::InvalidMeasure, "sigma must be supported in (0, infinity)");
    }
  }
  if (sigma.density && sigma.density->grid.front() < 0.0) {
    throw Error(ErrorKind::InvalidMeasure, "sigma must be supported in (0, infinity)");
  }
  KernelSpec kernel{[](double lam) { return std::min(1.0, lam); }, {1.0, 1.0, 0.0}, {1.0, 0.0, 0.0}};
  const LaplaceValue v = integrate(sigma, kernel, 1e-10);
  if (!v.converged) throw Error(ErrorKind::DivergentIntegral, "cannot bound int (1 ^ lambda) dsigma");
  return v.value;
}

FuncHandle laplace_function(const Measure& mu, Domain domain, double tol, std::string name) {
  auto eval = [mu, tol](double t) {
    const LaplaceValue v = laplace(mu, t, tol);
    return Evaluation{v.value, v.converged};
  };
  auto deriv = [mu, tol](double t, int k) { return laplace_deriv(mu, t, k, tol).value; };
  return FuncHandle(std::move(name), domain, FuncHandle::Evaluator(eval)).with_derivatives(deriv, 8);
}

}  // namespace lkpos
