#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "lkpos/diffcalc.hpp"
#include "lkpos/error.hpp"
#include "lkpos/grids.hpp"
#include "lkpos/kernelcheck.hpp"
#include "lkpos/levykhin.hpp"
#include "lkpos/quadrature.hpp"

using namespace lkpos;

namespace {

// e_lambda(t) = -int_0^u (u - r) e^{-lambda r} dr, by Gauss-Legendre on [0, u].
// Shares nothing with the series/expm1 evaluation under test.
double e_lambda_oracle(double lambda, double u) {
  const GaussRule& g = gauss_legendre(40);
  long double sum = 0.0L;
  for (std::size_t i = 0; i < g.nodes.size(); ++i) {
    const long double r = 0.5L * u * (1.0L + g.nodes[i]);
    sum += g.weights[i] * (u - r) * std::exp(-static_cast<long double>(lambda) * r);
  }
  return static_cast<double>(-0.5L * u * sum);
}

// f_lambda(t) = int_1^t e^{-lambda s} ds.
double f_lambda_oracle(double lambda, double t) {
  const GaussRule& g = gauss_legendre(40);
  long double sum = 0.0L;
  for (std::size_t i = 0; i < g.nodes.size(); ++i) {
    const long double s = 1.0L + 0.5L * (t - 1.0) * (1.0L + g.nodes[i]);
    sum += g.weights[i] * std::exp(-static_cast<long double>(lambda) * s);
  }
  return static_cast<double>(0.5L * (t - 1.0) * sum);
}

LKIntervalRep random_interval_rep(std::mt19937& rng, const std::vector<double>& lambdas) {
  std::uniform_int_distribution<int> count(0, 5), pick(0, static_cast<int>(lambdas.size()) - 1);
  std::uniform_real_distribution<double> w(0.05, 2.0), cd(-2.0, 2.0), t0(-0.5, 1.5);
  LKIntervalRep rep;
  rep.interval = Domain::open(-1.0, 2.0);
  rep.t0 = t0(rng);
  rep.c = cd(rng);
  rep.d = cd(rng);
  const int n = count(rng);
  for (int i = 0; i < n; ++i) rep.mu.add_atom(lambdas[pick(rng)], w(rng));
  return rep;
}

}  // namespace

TEST_CASE("e_lambda") {
  CHECK(e_lambda(0.0, 3.0, 0.0) == -4.5);
  for (double lam : {-3.0, 0.0, 1e-6, 2.0}) {
    CHECK(e_lambda(lam, 0.7, 0.7) == 0.0);
    CHECK(e_lambda_dt(lam, 0.7, 0.7) == 0.0);
  }
  // Tiny lambda: -1/2 + lambda/6 - lambda^2/24.
  const double tiny = e_lambda(1e-8, 1.0, 0.0);
  CHECK(std::abs(tiny + 0.5) <= 1e-8);
  CHECK(std::abs(tiny - (-0.5 + 1e-8 / 6.0)) <= 1e-16);
  CHECK(std::abs(e_lambda(1e-7, 1.0, 0.0) - (-0.5 + 1e-7 / 6.0)) <= 1e-15);

  for (double lam : {-4.0, -1.0, -1e-3, 1e-9, 1e-3, 0.5, 1.0, 3.0, 30.0}) {
    for (double u : {-1.5, -0.2, 1e-5, 0.3, 2.0}) {
      const double exact = e_lambda_oracle(lam, u);
      CHECK(std::abs(e_lambda(lam, u, 0.0) - exact) <= 1e-14 * std::abs(exact) + 1e-300);
    }
  }
  // Derivative in t against a central difference.
  const double lam = 0.8, t = 1.3, t0 = 0.2, h = 1e-5;
  const double fd = (e_lambda(lam, t + h, t0) - e_lambda(lam, t - h, t0)) / (2 * h);
  CHECK(e_lambda_dt(lam, t, t0) == doctest::Approx(fd).epsilon(1e-8));
}

TEST_CASE("f_lambda") {
  CHECK(f_lambda(0.0, 4.0) == 3.0);
  for (double lam : {-2.0, 0.0, 0.3, 5.0}) CHECK(f_lambda(lam, 1.0) == 0.0);
  CHECK(f_lambda(2.0, 3.0) == doctest::Approx((std::exp(-2.0) - std::exp(-6.0)) / 2.0).epsilon(1e-15));
  for (double lam : {-2.0, -1e-7, 1e-7, 0.3, 5.0})
    for (double t : {0.1, 0.9, 1.0 + 1e-9, 4.0}) {
      const double exact = f_lambda_oracle(lam, t);
      CHECK(std::abs(f_lambda(lam, t) - exact) <= 1e-14 * std::abs(exact) + 1e-300);
    }
}

TEST_CASE("synth_interval") {
  LKIntervalRep rep;
  rep.t0 = 0.5;
  rep.c = 1.25;
  rep.d = -0.75;
  rep.interval = Domain::open(-1.0, 2.0);
  CHECK(synth_interval(rep, 1.5, 1e-10).value == 1.25 - 0.75);

  LKIntervalRep one;
  one.t0 = 0.3;
  one.interval = Domain::open(-1.0, 2.0);
  const double l0 = 1.7, w = 0.6;
  one.mu = Measure::dirac(l0, w);
  for (double t : {-0.5, 0.3, 1.9}) {
    const double u = t - one.t0;
    const double expect = (1.0 - l0 * u - std::exp(-l0 * u)) * w * std::exp(-l0 * one.t0) / (l0 * l0);
    CHECK(synth_interval(one, t, 1e-12).value == doctest::Approx(expect).epsilon(1e-13));
  }
  CHECK_THROWS_AS(synth_interval(one, 2.5, 1e-10), Error);

  // Density part: mu = e^{-lambda} d lambda, psi'' = -1/(1+t).
  LKIntervalRep dens;
  dens.t0 = 1.0;
  dens.interval = Domain::open(-0.5, 3.0);
  dens.mu = Measure::power_exp(1.0, 0.0, 1.0);
  const FuncHandle psi = interval_function(dens);
  // int e_lambda(t) e^{-lambda} d lambda = -((1+t) log((1+t)/2) - (t-1)) for t0 = 1.
  for (double t : {-0.3, 0.5, 2.5}) {
    const double expect = -((1 + t) * std::log((1 + t) / 2) - (t - 1));
    CHECK(std::abs(psi(t) - expect) < 1e-9);
    CHECK(psi.analytic_derivative(t, 2) == doctest::Approx(-1.0 / (1 + t)).epsilon(1e-9));
    CHECK(psi.analytic_derivative(t, 1) == doctest::Approx(-std::log((1 + t) / 2)).epsilon(1e-9));
  }
}

TEST_CASE("analyze_interval") {
  LKIntervalRep rep;
  rep.t0 = 0.5;
  rep.c = 1.0;
  rep.d = -2.0;
  rep.interval = Domain::open(-1.0, 2.0);
  rep.mu = Measure::dirac(1.0).add_atom(-0.5, 2.0);
  const FuncHandle psi = interval_function(rep);
  const std::vector<double> lams = {-1.0, -0.5, 0.0, 0.5, 1.0, 2.0};
  const IntervalAnalysis an = analyze_interval(psi, 0.5, chebyshev_points(-1.0, 2.0, 12), lams);
  CHECK(std::abs(an.rep.c - 1.0) <= 1e-8);
  CHECK(std::abs(an.rep.d + 2.0) <= 1e-8);
  CHECK(an.residual <= 1e-6);

  const FuncHandle sq("t^2", Domain::real_line(), [](double t) { return t * t; });
  try {
    (void)analyze_interval(sq, 0.0, {-0.5, 0.5});
    FAIL("expected NotNegativeDefinite");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NotNegativeDefinite);
  }

  const double t0 = 0.4;
  const FuncHandle quad("quad", Domain::real_line(), [t0](double t) { return -(t - t0) * (t - t0) / 2; });
  const IntervalAnalysis q = analyze_interval(quad, t0, uniform_points(-1.0, 2.0, 10));
  CHECK(std::abs(q.rep.c) <= 1e-12);
  CHECK(std::abs(q.rep.d) <= 1e-8);
  CHECK(q.residual <= 1e-8);
  double at0 = 0.0, rest = 0.0;
  for (const Atom& a : q.rep.mu.atoms) (a.lambda == 0.0 ? at0 : rest) += a.weight;
  CHECK(at0 == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(rest < 1e-6);
}

TEST_CASE("synth_increasing") {
  LKIncreasingRep lin;
  lin.c = 0.3;
  lin.mu = Measure::dirac(0.0, 2.0);
  for (double t : {0.2, 1.0, 5.0}) CHECK(synth_increasing(lin, t, 1e-12).value == doctest::Approx(0.3 + 2.0 * (t - 1)));

  LKIncreasingRep lg;
  lg.mu = Measure::power_exp(1.0, 0.0, 0.0);
  for (double t : {0.5, 1.0, 2.0, 8.0}) CHECK(std::abs(synth_increasing(lg, t, 1e-11).value - std::log(t)) <= 1e-8);
  CHECK(synth_increasing(lg, 1.0, 1e-11).value == 0.0);
  CHECK_THROWS_AS(synth_increasing(lg, 0.0, 1e-11), Error);

  LKIncreasingRep neg;
  neg.mu = Measure::dirac(-1.0);
  CHECK_THROWS_AS(increasing_function(neg), Error);
}

TEST_CASE("analyze_increasing") {
  const auto grid = log_spaced(0.2, 5.0, 15);
  const FuncHandle lg = FuncHandle("log", Domain::open(0.0, kInf), [](double t) { return std::log(t); })
                            .with_derivatives([](double t, int k) { return k ? 1.0 / t : std::log(t); }, 1);
  const IncreasingAnalysis a = analyze_increasing(lg, grid);
  CHECK(a.rep.c == 0.0);
  CHECK(a.residual < 1e-4);

  const FuncHandle ident("t", Domain::open(0.0, kInf), [](double t) { return t; });
  const IncreasingAnalysis b = analyze_increasing(ident, grid);
  CHECK(b.rep.c == 1.0);
  REQUIRE_FALSE(b.rep.mu.atoms.empty());
  double zero = 0.0, rest = 0.0;
  for (const Atom& at : b.rep.mu.atoms) (at.lambda == 0.0 ? zero : rest) += at.weight;
  CHECK(zero == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(rest < 1e-6);

  const FuncHandle ex("-exp", Domain::open(0.0, kInf), [](double t) { return -std::exp(-t); });
  std::vector<double> lams = default_lambda_grid();
  lams.push_back(1.0);
  const IncreasingAnalysis c = analyze_increasing(ex, grid, lams);
  CHECK(c.rep.c == doctest::Approx(-std::exp(-1.0)));
  CHECK(c.residual < 1e-7);
  CHECK(total_mass(c.rep.mu) == doctest::Approx(1.0).epsilon(1e-5));

  const FuncHandle dec("decreasing", Domain::open(0.0, kInf), [](double t) { return 1.0 / t; });
  try {
    (void)analyze_increasing(dec, grid);
    FAIL("expected NotIncreasing");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NotIncreasing);
  }
  // psi' = 1 + t is increasing but not completely monotone.
  const FuncHandle cvx("convex", Domain::open(0.0, kInf), [](double t) { return t + t * t / 2; });
  try {
    (void)analyze_increasing(cvx, grid);
    FAIL("expected NotNegativeDefinite");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NotNegativeDefinite);
  }
}

TEST_CASE("synth_bernstein and reflection negative form") {
  const double alpha = 0.5;
  BernsteinRep pw;
  pw.sigma = Measure::power_exp(alpha / std::tgamma(1 - alpha), -1 - alpha, 0.0);
  CHECK(std::abs(synth_bernstein(pw, 4.0, 1e-10).value - 2.0) <= 1e-8);

  BernsteinRep ratio;
  ratio.sigma = Measure::power_exp(1.0, 0.0, 1.0);
  CHECK(std::abs(synth_bernstein(ratio, 1.0, 1e-12).value - 0.5) <= 1e-11);

  BernsteinRep l1p;
  l1p.sigma = Measure::power_exp(1.0, -1.0, 1.0);
  CHECK(std::abs(synth_bernstein(l1p, 1.0, 1e-11).value - std::numbers::ln2) <= 1e-9);

  BernsteinRep bad = ratio;
  bad.a = -1.0;
  try {
    (void)synth_bernstein(bad, 1.0, 1e-10);
    FAIL("expected InvalidRep");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::InvalidRep);
  }
  BernsteinRep heavy;
  heavy.sigma = Measure::power_exp(1.0, -2.5, 0.0);
  CHECK_THROWS_AS(synth_bernstein(heavy, 1.0, 1e-10), Error);

  BernsteinRep rn = pw;
  rn.a = 0.25;
  CHECK(synth_reflection_negative(rn, 0.0, 1e-10).value == 0.25);
  const FuncHandle psi = reflection_negative_function(pw);
  std::mt19937 rng(4);
  std::uniform_real_distribution<double> ts(0.01, 5.0);
  for (int i = 0; i < 10; ++i) {
    const double t = ts(rng);
    CHECK(psi(-t) == psi(t));
    CHECK(std::abs(psi(t) - std::sqrt(t)) <= 1e-8);
  }
}

TEST_CASE("bernstein handle derivatives") {
  BernsteinRep r;
  r.a = 0.5;
  r.b = 2.0;
  r.sigma = Measure::power_exp(1.0, 0.0, 1.0);  // t/(1+t)
  const FuncHandle psi = bernstein_function(r);
  for (double t : {0.3, 2.0}) {
    CHECK(psi(t) == doctest::Approx(0.5 + 2 * t + t / (1 + t)).epsilon(1e-11));
    CHECK(psi.analytic_derivative(t, 1) == doctest::Approx(2 + 1 / ((1 + t) * (1 + t))).epsilon(1e-10));
    CHECK(psi.analytic_derivative(t, 2) == doctest::Approx(-2 / std::pow(1 + t, 3)).epsilon(1e-10));
  }
}

TEST_CASE("property: forward negativity of interval representations") {
  std::mt19937 rng(17);
  std::uniform_real_distribution<double> lam(-3.0, 3.0);
  std::vector<double> lams;
  for (int i = 0; i < 30; ++i) lams.push_back(lam(rng));
  for (int trial = 0; trial < 20; ++trial) {
    const LKIntervalRep rep = random_interval_rep(rng, lams);
    const FuncHandle psi = interval_function(rep);
    CHECK(cnd_check(gram_plus(psi, chebyshev_points(-1.0, 2.0, 8))).passed());
  }
}

TEST_CASE("property: interval roundtrip recovers c and d") {
  std::mt19937 rng(23);
  const std::vector<double> lams = {-2.5, -1.0, -0.3, 0.0, 0.4, 1.0, 1.8, 2.7};
  const auto fit = chebyshev_points(-1.0, 2.0, 16);
  for (int trial = 0; trial < 20; ++trial) {
    const LKIntervalRep rep = random_interval_rep(rng, lams);
    const IntervalAnalysis an = analyze_interval(interval_function(rep), rep.t0, fit, lams);
    CHECK(std::abs(an.rep.c - rep.c) <= 1e-8);
    CHECK(std::abs(an.rep.d - rep.d) <= 1e-8);
    for (double s : fit) {
      const double truth = laplace(rep.mu, s, 1e-12).value;
      CHECK(std::abs(laplace(an.rep.mu, s, 1e-12).value - truth) <= 1e-6);
    }
  }
}

TEST_CASE("property: increasing form is monotone and roundtrips") {
  std::mt19937 rng(29);
  std::uniform_int_distribution<int> pick(0, 5);
  std::uniform_real_distribution<double> w(0.05, 2.0), c(-1.0, 1.0);
  const std::vector<double> lams = {0.0, 0.2, 0.5, 1.0, 2.0, 4.0};
  const auto grid = log_spaced(0.1, 6.0, 14);
  for (int trial = 0; trial < 15; ++trial) {
    LKIncreasingRep rep;
    rep.c = c(rng);
    for (int i = 0; i < 1 + trial % 4; ++i) rep.mu.add_atom(lams[pick(rng)], w(rng));
    if (trial % 3 == 0) rep.mu.add_term({0.5, 0.0, 2.0, 0.0, kInf});
    const FuncHandle psi = increasing_function(rep);
    double prev = -kInf;
    for (double t : grid) {
      CHECK(psi(t) >= prev);
      prev = psi(t);
    }
    CHECK(psi(1.0) == rep.c);
    if (trial % 3 != 0) {
      const IncreasingAnalysis an = analyze_increasing(psi, grid, lams);
      CHECK(std::abs(an.rep.c - rep.c) <= 1e-8);
      CHECK(an.residual <= 1e-6);
    }
  }
}

TEST_CASE("property: basis functions are continuous across the small-lambda switch") {
  for (double base : {1e-3, 1e-5, 1e-8}) {
    for (double sgn : {-1.0, 1.0}) {
      const double lam = sgn * base;
      for (double u : {0.5, 1.0, 3.0}) {
        const double exact = e_lambda_oracle(lam, u);
        CHECK(std::abs(e_lambda(lam, u, 0.0) - exact) <= 1e-12 * std::abs(exact));
        const double fe = f_lambda_oracle(lam, 1.0 + u);
        CHECK(std::abs(f_lambda(lam, 1.0 + u) - fe) <= 1e-12 * std::abs(fe));
      }
    }
  }
  // The series and expm1 branches meet at |lambda u| = 1.
  for (double x : {-1.0, 1.0}) {
    const double below = e_lambda(std::nextafter(x, 0.0), 1.0, 0.0);
    const double above = e_lambda(std::nextafter(x, 2 * x), 1.0, 0.0);
    CHECK(std::abs(below - above) <= 1e-14 * std::abs(above));
  }
}

TEST_CASE("property: Bernstein and increasing forms agree") {
  BernsteinRep r;
  r.a = 0.3;
  r.b = 0.7;
  r.sigma = Measure::power_exp(1.0, -1.0, 1.0).add_atom(2.0, 0.4);
  const LKIncreasingRep inc = to_increasing(r);
  for (double t : {0.1, 0.5, 1.0, 3.0, 10.0}) {
    CHECK(std::abs(synth_increasing(inc, t, 1e-11).value - synth_bernstein(r, t, 1e-11).value) <= 1e-9);
  }
}
