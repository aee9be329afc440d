#include "lkpos/reflection.hpp"

#include <algorithm>
#include <cmath>

#include "lkpos/error.hpp"

namespace lkpos {

namespace {

struct Grids {
  std::vector<double> plus;
  std::vector<double> minus;
};

Grids make_grids(double a, const ReflectionOptions& opt) {
  if (!(a > 0.0)) throw Error(ErrorKind::InvalidArgument, "a must be > 0");
  const double top = std::isfinite(a) ? a : kInfiniteWindow;
  Grids g;
  g.plus = make_grid(opt.grid_kind, 0.0, top, opt.n);
  g.minus = symmetric_grid(g.plus);
  return g;
}

// max |f(t) - f(-t)| and max |f| over the symmetric grid.
std::pair<double, double> asymmetry(const FuncHandle& f, const std::vector<double>& pos) {
  double worst = 0.0, scale = 0.0;
  for (double t : pos) {
    const double p = f(t), m = f(-t);
    worst = std::max(worst, std::abs(p - m));
    scale = std::max({scale, std::abs(p), std::abs(m)});
  }
  return {worst, scale > 0.0 ? scale : 1.0};
}

Verdict combine(std::initializer_list<const PositivityVerdict*> parts) {
  bool inconclusive = false;
  for (const PositivityVerdict* p : parts) {
    if (!p) continue;
    if (p->failed()) return Verdict::fail;
    inconclusive = inconclusive || p->verdict == Verdict::inconclusive;
  }
  return inconclusive ? Verdict::inconclusive : Verdict::pass;
}

const PositivityVerdict* ptr(const std::optional<PositivityVerdict>& v) { return v ? &*v : nullptr; }

}  // namespace

ReflectionReport reflection_positive_check(const FuncHandle& phi, double a, const ReflectionOptions& opt) {
  const Grids g = make_grids(a, opt);
  ReflectionReport r;
  r.a = a;
  const double tol = opt.tol.value_or(default_tolerance(g.minus.size()));
  const auto [asym, scale] = asymmetry(phi, g.plus);
  r.asymmetry = asym;
  r.symmetric = asym <= tol * scale;

  const KernelGram minus = gram_minus(phi, g.minus);
  r.minus_verdict = psd_check(minus, opt.tol);
  r.plus_verdict = psd_check(gram_plus(phi, g.plus), opt.tol);
  if (r.minus_verdict.failed()) r.two_point = two_point_witness(minus, opt.tol);

  r.verdict = combine({&r.minus_verdict, &r.plus_verdict});
  if (!r.symmetric) {
    r.verdict = Verdict::fail;
    r.note = "function is not even";
  } else if (r.minus_verdict.failed()) {
    r.note = "minus kernel is not positive definite";
  } else if (r.plus_verdict.failed()) {
    r.note = "plus kernel is not positive definite";
  }
  return r;
}

ReflectionReport reflection_negative_check(const FuncHandle& psi, double a, const std::vector<double>& hs,
                                           const ReflectionOptions& opt) {
  const Grids g = make_grids(a, opt);
  ReflectionReport r;
  r.a = a;
  const double tol = opt.tol.value_or(default_tolerance(g.minus.size()));
  const auto [asym, scale] = asymmetry(psi, g.plus);
  r.asymmetry = asym;
  r.symmetric = asym <= tol * scale;
  if (!r.symmetric) {
    throw Error(ErrorKind::NotSymmetric, "psi is not even: |psi(t) - psi(-t)| = " + std::to_string(asym));
  }

  r.minus_verdict = cnd_check(gram_minus(psi, g.minus), opt.tol);
  r.plus_verdict = cnd_check(gram_plus(psi, g.plus), opt.tol);
  if (!hs.empty()) {
    r.schoenberg_minus = schoenberg_check(psi, g.minus, hs, KernelKind::minus, opt.tol);
    r.schoenberg_plus = schoenberg_check(psi, g.plus, hs, KernelKind::plus, opt.tol);
  }
  if (!std::isfinite(a)) {
    const double base = psi.domain().contains(0.0) ? psi(0.0) : psi(1e-12);
    const FuncHandle shifted("psi - psi(0+)", Domain::open(0.0, kInf),
                             [psi, base](double t) { return psi(t) - base; });
    r.bernstein_verdict = bernstein_check(shifted, g.plus, 6, default_deltas(), opt.tol).overall;
  }

  r.verdict = combine({&r.minus_verdict, &r.plus_verdict, ptr(r.schoenberg_minus), ptr(r.schoenberg_plus),
                       ptr(r.bernstein_verdict)});
  if (r.minus_verdict.failed()) {
    r.note = "minus kernel is not conditionally negative definite";
  } else if (r.plus_verdict.failed()) {
    r.note = "plus kernel is not conditionally negative definite";
  } else if (r.schoenberg_minus && r.schoenberg_minus->failed()) {
    r.note = "e^{-h psi} fails on the minus kernel";
  } else if (r.schoenberg_plus && r.schoenberg_plus->failed()) {
    r.note = "e^{-h psi} fails on the plus kernel";
  } else if (r.bernstein_verdict && r.bernstein_verdict->failed()) {
    r.note = "psi - psi(0+) is not a Bernstein function";
  }
  return r;
}

PositivityVerdict summary(const ReflectionReport& r) {
  const std::initializer_list<const PositivityVerdict*> parts = {
      &r.minus_verdict, &r.plus_verdict, ptr(r.schoenberg_minus), ptr(r.schoenberg_plus), ptr(r.bernstein_verdict)};
  const PositivityVerdict* pick = nullptr;
  for (Verdict want : {Verdict::fail, Verdict::inconclusive}) {
    for (const PositivityVerdict* p : parts) {
      if (p && p->verdict == want) {
        pick = p;
        break;
      }
    }
    if (pick) break;
  }
  PositivityVerdict out = pick ? *pick : r.minus_verdict;
  if (r.minus_verdict.failed() && r.two_point) out = *r.two_point;
  out.verdict = r.verdict;
  if (!r.note.empty()) out.note = r.note;
  return out;
}

double boundary_pair_min_eig(const FuncHandle& phi, double a, double eps) {
  if (!(eps > 0.0 && eps < a)) throw Error(ErrorKind::InvalidArgument, "need 0 < eps < a");
  const KernelGram g = gram_minus(phi, {-(a - eps), a - eps});
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(g.entries);
  return es.eigenvalues()(0);
}

PositivityVerdict polya_check(const FuncHandle& phi, const std::vector<double>& grid, std::optional<double> tol) {
  for (double t : grid)
    if (t < 0.0) throw Error(ErrorKind::DomainError, "polya_check grid must lie in [0, inf)");
  PositivityVerdict v = convex_decreasing_check(phi, grid, tol);
  if (v.passed()) {
    double worst = kInf, scale = 0.0;
    std::size_t at = 0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const double y = phi(grid[i]);
      scale = std::max(scale, std::abs(y));
      if (y < worst) {
        worst = y;
        at = i;
      }
    }
    if (worst < -v.tol_used * std::max(scale, 1e-300)) {
      v.verdict = Verdict::fail;
      v.extremal_eig = worst;
      v.witness.assign(grid.size(), 0.0);
      v.witness[at] = 1.0;
      v.params = {{"t", grid[at]}};
      v.note = "negative value";
    }
  }
  if (v.failed()) {
    v.note = "criterion not met (" + v.note + "); this does not show phi is not positive definite";
    return v;
  }
  // Cross-validation on the mirrored grid.
  std::vector<double> pos;
  for (double t : grid)
    if (t > 0.0) pos.push_back(t);
  std::vector<double> mirrored = symmetric_grid(pos);
  if (grid.front() == 0.0) mirrored.insert(mirrored.begin() + static_cast<long>(pos.size()), 0.0);
  const PositivityVerdict check = psd_check(gram_minus(phi, mirrored), tol);
  v.params["cross_check_eig"] = check.extremal_eig;
  if (!check.passed()) {
    v.verdict = Verdict::inconclusive;
    v.note = "criterion met but the minus kernel check disagrees";
  } else {
    v.note = "convex, decreasing and nonnegative: positive definite on the line";
  }
  return v;
}

Extension extendable_check(const FuncHandle& psi, double a, double tol) {
  if (!(a > 0.0) || !std::isfinite(a)) throw Error(ErrorKind::InvalidArgument, "a must be finite and > 0");
  const Domain& d = psi.domain();
  if (!d.contains(a)) throw Error(ErrorKind::DomainError, "psi must be defined at a");
  std::vector<double> grid = uniform_points(0.0, a, 31);
  if (d.contains(0.0)) grid.insert(grid.begin(), 0.0);
  grid.push_back(a);
  std::vector<double> y(grid.size());
  double sscale = 1.0;
  for (std::size_t i = 0; i < grid.size(); ++i) y[i] = psi(grid[i]);
  std::vector<double> slope(grid.size() - 1);
  for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
    slope[i] = (y[i + 1] - y[i]) / (grid[i + 1] - grid[i]);
    sscale = std::max(sscale, std::abs(slope[i]));
  }
  for (std::size_t i = 0; i + 1 < slope.size(); ++i) {
    if (slope[i + 1] - slope[i] < -tol * sscale) {
      throw Error(ErrorKind::NotConvex, "psi is not convex near t = " + std::to_string(grid[i + 1]));
    }
  }
  Extension out;
  out.slope = one_sided_derivative(psi, a, -1);
  out.extendable = out.slope <= tol;
  const double tail = psi(a);
  out.extension = FuncHandle(psi.name() + "_ext", Domain{0.0, kInf, d.contains(0.0), false},
                             FuncHandle::Evaluator([psi, a, tail](double t) {
                               return t <= a ? psi.evaluate(t) : Evaluation{tail, true};
                             }));
  return out;
}

Thm59Report thm59_check(const Measure& mu, double a, const ReflectionOptions& opt) {
  if (!(a > 0.0) || !std::isfinite(a)) throw Error(ErrorKind::InvalidArgument, "a must be finite and > 0");
  const double qtol = 1e-12;
  const double tol = opt.tol.value_or(default_tolerance(2 * static_cast<std::size_t>(opt.n)));
  Thm59Report out;
  const LaplaceValue slope = laplace_deriv(mu, a, 1, qtol);
  if (!slope.converged) throw Error(ErrorKind::DivergentIntegral, "L(mu)' does not converge at a");
  out.boundary_slope = slope.value;
  out.sufficient = slope.value <= tol;

  const FuncHandle lap = laplace_function(mu, Domain::closed(0.0, a), qtol);
  const FuncHandle phi("phi", Domain::closed(-a, a), FuncHandle::Evaluator([lap](double t) {
                         return lap.evaluate(std::abs(t));
                       }));
  out.rp = reflection_positive_check(phi, a, opt);

  double lo = kInf, hi = -kInf;
  for (double t : make_grid(opt.grid_kind, 0.0, a, opt.n)) {
    const double v = phi(t);
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  out.nonconstant = hi - lo > tol * std::max({std::abs(lo), std::abs(hi), 1e-300});

  if (out.rp.verdict == Verdict::pass && out.nonconstant) {
    const double step = 1e-3 * a;
    for (int i = 1; i <= 1000; ++i) {
      const double b = std::min(a, i * step);
      if (laplace_deriv(mu, b, 1, qtol).value < -tol) {
        out.necessary_witness = b;
        break;
      }
    }
  }
  out.consistent = !(out.sufficient && out.rp.verdict == Verdict::fail);
  return out;
}

LaplaceValue periodic_rp(const Measure& mu_plus, double beta, double t, double tol) {
  if (!(beta > 0.0) || !std::isfinite(beta)) throw Error(ErrorKind::InvalidArgument, "beta must be finite and > 0");
  if (!mu_plus.empty() && mu_plus.support_interval().first < 0.0) {
    throw Error(ErrorKind::InvalidMeasure, "mu_plus must be supported in [0, inf)");
  }
  double r = std::fmod(t, beta);
  if (r < 0.0) r += beta;
  if (r >= beta) r = 0.0;
  const LaplaceValue x = laplace(mu_plus, r, 0.5 * tol);
  const LaplaceValue y = laplace(mu_plus, beta - r, 0.5 * tol);
  return {x.value + y.value, x.truncation_bound + y.truncation_bound, x.converged && y.converged};
}

FuncHandle periodic_function(const Measure& mu_plus, double beta, double tol) {
  (void)periodic_rp(mu_plus, beta, 0.0, tol);
  return FuncHandle("periodic", Domain::real_line(), FuncHandle::Evaluator([mu_plus, beta, tol](double t) {
                      const LaplaceValue v = periodic_rp(mu_plus, beta, t, tol);
                      return Evaluation{v.value, v.converged};
                    }));
}

double double_integral_rp(const std::vector<BiAtom>& atoms, double a, double t) {
  if (!(std::abs(t) < a)) throw Error(ErrorKind::DomainError, "double_integral_rp needs |t| < a");
  const double s = std::abs(t);
  double sum = 0.0;
  for (const BiAtom& at : atoms) {
    if (!(at.lambda >= 0.0) || !(at.beta >= a) || !(at.weight >= 0.0)) {
      throw Error(ErrorKind::InvalidMeasure, "atoms need lambda >= 0, beta >= a, weight >= 0");
    }
    sum += at.weight * (std::exp(-at.lambda * s) + std::exp(at.lambda * (s - at.beta)));
  }
  return sum;
}

FuncHandle double_integral_function(const std::vector<BiAtom>& atoms, double a) {
  if (!atoms.empty()) (void)double_integral_rp(atoms, a, 0.0);
  return FuncHandle("double_integral", Domain::open(-a, a),
                    [atoms, a](double t) { return double_integral_rp(atoms, a, t); });
}

}  // namespace lkpos
