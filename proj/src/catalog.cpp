#include "lkpos/catalog.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "lkpos/diffcalc.hpp"
#include "lkpos/error.hpp"
#include "lkpos/grids.hpp"
#include "lkpos/reflection.hpp"

namespace lkpos {

namespace {

constexpr int kOrder = 8;
constexpr double kWindow = 4.0;

// alpha (alpha - 1) ... (alpha - k + 1)
double falling(double alpha, int k) {
  double p = 1.0;
  for (int j = 0; j < k; ++j) p *= alpha - j;
  return p;
}

double factorial(int k) { return std::tgamma(k + 1.0); }

double sign_pow(double s, int k) { return (k % 2 == 0 || s >= 0.0) ? 1.0 : -1.0; }

FlagClaim claim(Property p, double lo, double hi, std::string citation) {
  return {p, lo, hi, std::move(citation)};
}

FlagClaim half_line(Property p, std::string citation) { return claim(p, 0.0, kWindow, std::move(citation)); }

FlagClaim reflection(Property p, double a, std::string citation) { return claim(p, -a, a, std::move(citation)); }

// sigma_alpha = alpha / Gamma(1 - alpha) lambda^{-1-alpha} d lambda, the Bernstein measure of t^alpha.
BernsteinRep power_rep(double alpha) {
  BernsteinRep r;
  if (alpha == 0.0) {
    r.a = 1.0;
  } else if (alpha == 1.0) {
    r.b = 1.0;
  } else {
    r.sigma = Measure::power_exp(alpha / std::tgamma(1.0 - alpha), -1.0 - alpha, 0.0);
  }
  return r;
}

FuncHandle smooth(const std::string& name, Domain d, std::function<double(double, int)> deriv) {
  return FuncHandle(name, d, [deriv](double t) { return deriv(t, 0); }).with_derivatives(deriv, kOrder);
}

double param(const CatalogParams& p, const char* key) { return p.at(key); }

void require(bool ok, const std::string& what) {
  if (!ok) throw Error(ErrorKind::InvalidArgument, what);
}

const char* const kBernsteinNecessary = "t^alpha is Bernstein iff 0 <= alpha <= 1";

CatalogEntry make_power(const CatalogParams& p) {
  const double alpha = param(p, "alpha");
  require(alpha > 0.0 && alpha <= 2.0, "power needs 0 < alpha <= 2");
  CatalogEntry e;
  e.domain = Domain{0.0, kInf, true, false};
  e.window = {0.0, kWindow};
  e.func = smooth("power", e.domain,
                  [alpha](double t, int k) { return falling(alpha, k) * std::pow(t, alpha - k); });
  if (alpha <= 1.0) {
    e.known_flags = {
        half_line(Property::bernstein,
                  "t^alpha = int (1 - e^{-lambda t}) alpha / Gamma(1 - alpha) lambda^{-1-alpha} dlambda, 0 < alpha < 1"),
        half_line(Property::negative_definite, "Bernstein functions are negative definite on the half line")};
    e.lk_data = LKData{power_rep(alpha), false};
  } else {
    e.refuted_flags = {half_line(Property::bernstein, kBernsteinNecessary),
                       half_line(Property::negative_definite,
                                 "-psi'' = -alpha (alpha - 1) t^{alpha-2} < 0 is not positive definite")};
  }
  return e;
}

CatalogEntry make_log1p(const CatalogParams&) {
  CatalogEntry e;
  e.domain = Domain::open(-1.0, kInf);
  e.window = {0.0, kWindow};
  e.func = smooth("log1p", e.domain, [](double t, int k) {
    if (k == 0) return std::log1p(t);
    return sign_pow(-1.0, k - 1) * factorial(k - 1) * std::pow(1.0 + t, -k);
  });
  e.known_flags = {
      half_line(Property::bernstein, "log(1 + t) = int (1 - e^{-lambda t}) e^{-lambda} dlambda / lambda"),
      half_line(Property::negative_definite, "Bernstein functions are negative definite on the half line")};
  e.lk_data = LKData{BernsteinRep{0.0, 0.0, Measure::power_exp(1.0, -1.0, 1.0)}, false};
  return e;
}

CatalogEntry make_log(const CatalogParams&) {
  CatalogEntry e;
  e.domain = Domain::open(0.0, kInf);
  e.window = {0.0, kWindow};
  e.func = smooth("log", e.domain, [](double t, int k) {
    if (k == 0) return std::log(t);
    return sign_pow(-1.0, k - 1) * factorial(k - 1) * std::pow(t, -k);
  });
  e.known_flags = {half_line(Property::negative_definite,
                             "log t = int_0^inf (e^{-lambda} - e^{-lambda t}) dlambda / lambda, psi' = 1/t completely monotone")};
  e.refuted_flags = {half_line(Property::bernstein, "log t < 0 on (0, 1)")};
  e.lk_data = LKData{LKIncreasingRep{0.0, Measure::power_exp(1.0, 0.0, 0.0)}, false};
  return e;
}

CatalogEntry make_ratio(const CatalogParams&) {
  CatalogEntry e;
  e.domain = Domain::open(-1.0, kInf);
  e.window = {0.0, kWindow};
  e.func = smooth("ratio", e.domain, [](double t, int k) {
    if (k == 0) return t / (1.0 + t);
    return sign_pow(-1.0, k + 1) * factorial(k) * std::pow(1.0 + t, -k - 1);
  });
  e.known_flags = {half_line(Property::bernstein, "t / (1 + t) = int (1 - e^{-lambda t}) e^{-lambda} dlambda"),
                   half_line(Property::negative_definite, "Bernstein functions are negative definite on the half line")};
  e.lk_data = LKData{BernsteinRep{0.0, 0.0, Measure::power_exp(1.0, 0.0, 1.0)}, false};
  return e;
}

CatalogEntry make_neg_power(const CatalogParams& p) {
  const double alpha = param(p, "alpha");
  require(alpha > 0.0 && alpha <= 4.0, "neg_power needs 0 < alpha <= 4");
  CatalogEntry e;
  e.domain = Domain::open(0.0, kInf);
  e.window = {0.0, kWindow};
  e.func = smooth("neg_power", e.domain,
                  [alpha](double t, int k) { return falling(-alpha, k) * std::pow(t, -alpha - k); });
  const std::string laplace_form = "t^-alpha = int e^{-lambda t} lambda^{alpha-1} / Gamma(alpha) dlambda";
  e.known_flags = {half_line(Property::completely_monotone, laplace_form),
                   half_line(Property::positive_definite, laplace_form + "; Laplace transforms are positive definite")};
  e.refuted_flags = {half_line(Property::bernstein, "t^-alpha is decreasing")};
  e.lk_data = LKData{LaplaceRep{Measure::power_exp(1.0 / std::tgamma(alpha), alpha - 1.0, 0.0), Domain::open(0.0, kInf)},
                     false};
  return e;
}

CatalogEntry make_neg_tlogt(const CatalogParams&) {
  CatalogEntry e;
  e.domain = Domain::open(0.0, kInf);
  e.window = {0.0, kWindow};
  e.func = smooth("neg_tlogt", e.domain, [](double t, int k) {
    if (k == 0) return -t * std::log(t);
    if (k == 1) return -std::log(t) - 1.0;
    return -sign_pow(-1.0, k - 2) * factorial(k - 2) * std::pow(t, 1 - k);
  });
  e.known_flags = {half_line(Property::negative_definite,
                             "t^{ht} = e^{-h(-t log t)} is positive definite for h > 0; -psi'' = 1/t = L(dlambda)")};
  LKIntervalRep rep;
  rep.t0 = 1.0;
  rep.c = 0.0;
  rep.d = -1.0;
  rep.mu = Measure::power_exp(1.0, 0.0, 0.0);
  rep.interval = Domain::open(0.0, kInf);
  e.lk_data = LKData{rep, false};
  return e;
}

CatalogEntry make_signed_power(const CatalogParams& p) {
  const double alpha = param(p, "alpha");
  require(alpha > 0.0 && alpha <= 2.0, "signed_power needs 0 < alpha <= 2");
  const double s = alpha < 1.0 ? 1.0 : -1.0;
  CatalogEntry e;
  e.domain = Domain::open(0.0, kInf);
  e.window = {0.0, kWindow};
  e.func = smooth("signed_power", e.domain,
                  [alpha, s](double t, int k) { return s * falling(alpha, k) * std::pow(t, alpha - k); });
  e.known_flags = {half_line(Property::negative_definite,
                             "t^alpha (alpha <= 1) and -t^alpha (1 <= alpha <= 2) are negative definite on the half line")};
  if (alpha < 1.0) {
    e.lk_data = LKData{power_rep(alpha), false};
  } else {
    // -psi'' = alpha (alpha - 1) t^{alpha - 2} = L(alpha (alpha - 1) / Gamma(2 - alpha) lambda^{1 - alpha}).
    LKIntervalRep rep;
    rep.t0 = 1.0;
    rep.c = -1.0;
    rep.d = -alpha;
    rep.interval = Domain::open(0.0, kInf);
    if (alpha == 2.0) {
      rep.mu = Measure::dirac(0.0, 2.0);
    } else if (alpha > 1.0) {
      rep.mu = Measure::power_exp(alpha * (alpha - 1.0) / std::tgamma(2.0 - alpha), 1.0 - alpha, 0.0);
    }
    e.lk_data = LKData{rep, false};
    e.refuted_flags = {half_line(Property::bernstein, "-t^alpha < 0")};
  }
  return e;
}

double abs_signed(double t) { return t < 0.0 ? -1.0 : 1.0; }

CatalogEntry make_green(const CatalogParams& p) {
  const double lambda = param(p, "lambda");
  require(lambda > 0.0, "green needs lambda > 0");
  CatalogEntry e;
  e.domain = Domain::real_line();
  e.window = {-kWindow, kWindow};
  // Derivatives at 0 are the right-hand limits.
  e.func = smooth("green", e.domain, [lambda](double t, int k) {
    return std::pow(-lambda * abs_signed(t), k) * std::exp(-lambda * std::abs(t));
  });
  e.known_flags = {
      reflection(Property::reflection_positive, kInf,
                 "exp(-lambda |t|) is positive definite on the line; L(mu)(|t|) is reflection positive for mu on [0, inf)"),
      half_line(Property::completely_monotone, "exp(-lambda t) = L(delta_lambda)")};
  e.refuted_flags = {claim(Property::positive_definite, -2.0, 2.0,
                           "the plus kernel exp(-lambda |x + y| / 2) has a negative 2x2 minor at x = -y")};
  e.lk_data = LKData{LaplaceRep{Measure::dirac(lambda), Domain::real_line()}, true};
  return e;
}

CatalogEntry make_thermal_green(const CatalogParams& p) {
  const double lambda = param(p, "lambda");
  const double beta = param(p, "beta");
  require(lambda > 0.0, "thermal_green needs lambda > 0");
  require(beta > 0.0 && std::isfinite(beta), "thermal_green needs finite beta > 0");
  const double w = std::exp(-beta * lambda);
  CatalogEntry e;
  e.domain = Domain::closed(-beta, beta);
  e.window = {-beta, beta};
  e.func = smooth("thermal_green", e.domain, [lambda, w](double t, int k) {
    const double s = abs_signed(t), u = std::abs(t);
    return std::pow(-lambda * s, k) * std::exp(-lambda * u) + w * std::pow(lambda * s, k) * std::exp(lambda * u);
  });
  e.known_flags = {
      reflection(Property::reflection_positive, beta,
                 "e^{-|t| lambda} + e^{-beta lambda} e^{|t| lambda} is reflection positive on (-a, a) for beta >= a"),
      claim(Property::positive_definite, 0.0, beta, "L(delta_lambda + e^{-beta lambda} delta_{-lambda})")};
  Measure mu = Measure::dirac(lambda);
  mu.add_atom(-lambda, w);
  e.lk_data = LKData{LaplaceRep{mu, Domain::real_line()}, true};
  return e;
}

CatalogEntry make_abs_power(const CatalogParams& p) {
  const double alpha = param(p, "alpha");
  require(alpha >= 0.0 && alpha <= 2.0, "abs_power needs 0 <= alpha <= 2");
  CatalogEntry e;
  e.domain = Domain::real_line();
  e.window = {-kWindow, kWindow};
  // Derivatives at 0 are the right-hand limits.
  e.func = smooth("abs_power", e.domain, [alpha](double t, int k) {
    if (k == 0) return std::pow(std::abs(t), alpha);
    return std::pow(abs_signed(t), k) * falling(alpha, k) * std::pow(std::abs(t), alpha - k);
  });
  if (alpha <= 1.0) {
    e.known_flags = {reflection(Property::reflection_negative, kInf,
                                "|t|^alpha is reflection negative on the line iff 0 <= alpha <= 1")};
    e.lk_data = LKData{power_rep(alpha), true};
  } else {
    e.refuted_flags = {reflection(Property::reflection_negative, kInf,
                                  "t^alpha restricted to (0, inf) is not Bernstein for alpha > 1")};
  }
  return e;
}

CatalogEntry make_one_minus_cexp(const CatalogParams& p) {
  const double c = param(p, "c");
  const double lambda = param(p, "lambda");
  require(c >= 0.0, "one_minus_cexp needs c >= 0");
  require(lambda > 0.0, "one_minus_cexp needs lambda > 0");
  CatalogEntry e;
  e.domain = Domain::real_line();
  e.window = {0.0, kWindow};
  e.func = smooth("one_minus_cexp", e.domain, [c, lambda](double t, int k) {
    if (k == 0) return 1.0 - c * std::exp(-lambda * t);
    return -c * std::pow(-lambda, k) * std::exp(-lambda * t);
  });
  const std::string nd = "-psi'' = c lambda^2 e^{-lambda t} is a Laplace transform";
  e.known_flags = {half_line(Property::negative_definite, nd)};
  if (c <= 1.0) {
    e.known_flags.push_back(half_line(Property::bernstein, "1 - c e^{-lambda t} = (1 - c) + c (1 - e^{-lambda t}), c <= 1"));
    e.lk_data = LKData{BernsteinRep{1.0 - c, 0.0, Measure::dirac(lambda, c)}, false};
  } else {
    e.refuted_flags = {half_line(Property::bernstein, "psi(0+) = 1 - c < 0 for c > 1")};
    e.lk_data = LKData{LKIncreasingRep{1.0 - c * std::exp(-lambda), Measure::dirac(lambda, c * lambda)}, false};
  }
  return e;
}

CatalogEntry make_exp(const CatalogParams& p) {
  const double lambda = param(p, "lambda");
  require(std::isfinite(lambda), "exp needs finite lambda");
  CatalogEntry e;
  e.domain = Domain::real_line();
  e.window = {-2.0, 2.0};
  e.func = smooth("exp", e.domain,
                  [lambda](double t, int k) { return std::pow(-lambda, k) * std::exp(-lambda * t); });
  e.known_flags = {claim(Property::positive_definite, -2.0, 2.0, "exp(-lambda t) = L(delta_lambda)")};
  if (lambda >= 0.0) e.known_flags.push_back(half_line(Property::completely_monotone, "L(delta_lambda), lambda >= 0"));
  e.lk_data = LKData{LaplaceRep{Measure::dirac(lambda), Domain::real_line()}, false};
  return e;
}

CatalogEntry make_cosh(const CatalogParams&) {
  CatalogEntry e;
  e.domain = Domain::real_line();
  e.window = {-2.0, 2.0};
  e.func = smooth("cosh", e.domain, [](double t, int k) { return k % 2 == 0 ? std::cosh(t) : std::sinh(t); });
  e.known_flags = {claim(Property::positive_definite, -2.0, 2.0, "cosh t = L((delta_1 + delta_{-1}) / 2)")};
  e.refuted_flags = {half_line(Property::completely_monotone, "cosh is increasing on (0, inf)"),
                     reflection(Property::reflection_positive, 2.0,
                                "cosh((x - y) / 2) has a negative 2x2 minor; its measure is not on [0, inf)")};
  Measure mu = Measure::dirac(1.0, 0.5);
  mu.add_atom(-1.0, 0.5);
  e.lk_data = LKData{LaplaceRep{mu, Domain::real_line()}, false};
  return e;
}

struct Recipe {
  const char* name;
  const char* formula;
  CatalogParams defaults;
  CatalogEntry (*make)(const CatalogParams&);
};

const std::vector<Recipe>& recipes() {
  static const std::vector<Recipe> r = {
      {"power", "t^alpha", {{"alpha", 0.5}}, make_power},
      {"log1p", "log(1 + t)", {}, make_log1p},
      {"log", "log t", {}, make_log},
      {"ratio", "t / (1 + t)", {}, make_ratio},
      {"neg_power", "t^-alpha", {{"alpha", 0.5}}, make_neg_power},
      {"neg_tlogt", "-t log t", {}, make_neg_tlogt},
      {"signed_power", "t^alpha (alpha < 1), -t^alpha (1 <= alpha <= 2)", {{"alpha", 1.5}}, make_signed_power},
      {"green", "exp(-lambda |t|)", {{"lambda", 1.0}}, make_green},
      {"thermal_green", "exp(-lambda |t|) + exp(-beta lambda) exp(lambda |t|)", {{"lambda", 1.0}, {"beta", 1.0}},
       make_thermal_green},
      {"abs_power", "|t|^alpha", {{"alpha", 0.5}}, make_abs_power},
      {"one_minus_cexp", "1 - c exp(-lambda t)", {{"c", 0.5}, {"lambda", 1.0}}, make_one_minus_cexp},
      {"exp", "exp(-lambda t)", {{"lambda", 1.0}}, make_exp},
      {"cosh", "cosh t", {}, make_cosh},
  };
  return r;
}

}  // namespace

std::string to_string(Property p) {
  switch (p) {
    case Property::positive_definite: return "positive_definite";
    case Property::negative_definite: return "negative_definite";
    case Property::completely_monotone: return "completely_monotone";
    case Property::bernstein: return "bernstein";
    case Property::reflection_positive: return "reflection_positive";
    case Property::reflection_negative: return "reflection_negative";
  }
  return "unknown";
}

Property property_from_string(const std::string& s) {
  for (Property p : {Property::positive_definite, Property::negative_definite, Property::completely_monotone,
                     Property::bernstein, Property::reflection_positive, Property::reflection_negative}) {
    if (to_string(p) == s) return p;
  }
  throw Error(ErrorKind::InvalidArgument, "unknown property '" + s + "'");
}

std::string kind_name(const LKData& d) {
  switch (d.rep.index()) {
    case 0: return "interval";
    case 1: return "increasing";
    case 2: return d.even ? "reflection_negative" : "bernstein";
    default: return d.even ? "laplace_abs" : "laplace";
  }
}

FuncHandle lk_function(const LKData& d, double tol) {
  if (const auto* r = std::get_if<LKIntervalRep>(&d.rep)) return interval_function(*r, tol);
  if (const auto* r = std::get_if<LKIncreasingRep>(&d.rep)) return increasing_function(*r, tol);
  if (const auto* r = std::get_if<BernsteinRep>(&d.rep)) {
    return d.even ? reflection_negative_function(*r, tol) : bernstein_function(*r, tol);
  }
  const LaplaceRep& r = std::get<LaplaceRep>(d.rep);
  const FuncHandle lap = laplace_function(r.mu, r.domain, tol);
  if (!d.even) return lap;
  const Domain dom = r.domain.lo <= 0.0 ? Domain::real_line() : r.domain;
  return FuncHandle("laplace_abs", dom,
                    FuncHandle::Evaluator([lap](double t) { return lap.evaluate(std::abs(t)); }));
}

bool CatalogEntry::has_flag(Property p) const {
  return std::any_of(known_flags.begin(), known_flags.end(), [p](const FlagClaim& c) { return c.property == p; });
}

CatalogEntry get(const std::string& name, const CatalogParams& params) {
  for (const Recipe& r : recipes()) {
    if (name != r.name) continue;
    CatalogParams merged = r.defaults;
    for (const auto& [k, v] : params) {
      if (!merged.count(k)) throw Error(ErrorKind::InvalidArgument, name + " takes no parameter '" + k + "'");
      if (!std::isfinite(v) && k != "beta") throw Error(ErrorKind::InvalidArgument, k + " must be finite");
      merged[k] = v;
    }
    CatalogEntry e = r.make(merged);
    e.name = name;
    e.formula = r.formula;
    e.params = merged;
    return e;
  }
  throw Error(ErrorKind::UnknownName, "no catalog entry named '" + name + "'");
}

std::vector<std::string> list() {
  std::vector<std::string> out;
  for (const Recipe& r : recipes()) out.emplace_back(r.name);
  return out;
}

std::vector<CatalogInfo> catalog_info() {
  std::vector<CatalogInfo> out;
  for (const Recipe& r : recipes()) out.push_back({r.name, r.formula, r.defaults});
  return out;
}

PositivityVerdict check_claim(const FuncHandle& f, const FlagClaim& c) {
  switch (c.property) {
    case Property::reflection_positive:
      return summary(reflection_positive_check(f, c.hi));
    case Property::reflection_negative:
      return summary(reflection_negative_check(f, c.hi, dyadic_hs(10)));
    default:
      break;
  }
  const std::vector<double> grid = chebyshev_points(c.lo, c.hi, kDefaultGridSize);
  switch (c.property) {
    case Property::positive_definite: return psd_check(gram_plus(f, grid));
    case Property::negative_definite: return cnd_check(gram_plus(f, grid));
    case Property::completely_monotone: return completely_monotone_check(f, grid);
    default: return bernstein_check(f, grid).overall;
  }
}

}  // namespace lkpos
