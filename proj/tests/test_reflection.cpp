#include <doctest.h>

#include <cmath>
#include <random>

#include "lkpos/error.hpp"
#include "lkpos/reflection.hpp"

using namespace lkpos;

namespace {

FuncHandle two_exp(double c) {
  return FuncHandle("two_exp", Domain::real_line(),
                    [c](double t) { return std::exp(-std::abs(t)) + c * std::exp(std::abs(t)); });
}

FuncHandle abs_power(double alpha) {
  return FuncHandle("abs_power", Domain::real_line(), [alpha](double t) { return std::pow(std::abs(t), alpha); });
}

FuncHandle triangle() {
  return FuncHandle("triangle", Domain::real_line(), [](double t) { return std::max(1.0 - std::abs(t), 0.0); });
}

FuncHandle green() {
  return FuncHandle("green", Domain::real_line(), [](double t) { return std::exp(-std::abs(t)); });
}

std::vector<double> random_symmetric(std::mt19937& rng, double a, int n) {
  std::uniform_real_distribution<double> u(0.0, a);
  std::vector<double> pos;
  while (static_cast<int>(pos.size()) < n) {
    pos.push_back(u(rng));
    std::sort(pos.begin(), pos.end());
    pos.erase(std::unique(pos.begin(), pos.end()), pos.end());
  }
  return symmetric_grid(pos);
}

}  // namespace

TEST_CASE("reflection_positive_check") {
  const FuncHandle g1("green", Domain::real_line(), [](double t) { return std::exp(-std::abs(t)); });
  CHECK(reflection_positive_check(g1, 2.0).verdict == Verdict::pass);
  CHECK(reflection_positive_check(g1, kInf).verdict == Verdict::pass);

  // Thermal Green function with beta = a = 1.
  CHECK(reflection_positive_check(two_exp(std::exp(-1.0)), 1.0).verdict == Verdict::pass);

  const ReflectionReport bad = reflection_positive_check(two_exp(1.2 * std::exp(-1.0)), 1.0);
  CHECK(bad.verdict == Verdict::fail);
  CHECK(bad.minus_verdict.failed());
  CHECK(bad.plus_verdict.passed());
  REQUIRE(bad.two_point.has_value());
  int support = 0;
  for (double w : bad.two_point->witness) support += (w != 0.0);
  CHECK(support == 2);

  const FuncHandle odd("odd", Domain::real_line(), [](double t) { return std::exp(-t); });
  const ReflectionReport r = reflection_positive_check(odd, 1.0);
  CHECK_FALSE(r.symmetric);
  CHECK(r.verdict == Verdict::fail);
}

TEST_CASE("boundary pair eigenvalue") {
  // 1 + c - e^{-(a-eps)} - c e^{a-eps} for lambda0 = 1.
  const double a = 1.0, eps = 1e-3;
  for (double c : {0.0, std::exp(-2.0), 0.3, 1.2 * std::exp(-1.0)}) {
    const double x = a - eps;
    const double expect = 1.0 + c - std::exp(-x) - c * std::exp(x);
    CHECK(boundary_pair_min_eig(two_exp(c), a, eps) == doctest::Approx(expect).epsilon(1e-12));
  }
  CHECK(boundary_pair_min_eig(two_exp(std::exp(-2.0)), a, eps) > 0.0);
  CHECK(boundary_pair_min_eig(two_exp(1.2 * std::exp(-1.0)), a, eps) < 0.0);
}

TEST_CASE("reflection_negative_check") {
  const auto hs = dyadic_hs(10);
  ReflectionOptions opt;
  opt.n = 6;
  CHECK(reflection_negative_check(abs_power(0.5), kInf, hs, opt).verdict == Verdict::pass);
  for (double alpha : {0.0, 0.5, 1.0}) CHECK(reflection_negative_check(abs_power(alpha), 2.0, hs, opt).verdict == Verdict::pass);
  for (double alpha : {1.25, 1.5, 2.0}) {
    const ReflectionReport r = reflection_negative_check(abs_power(alpha), 2.0, hs, opt);
    CHECK(r.verdict == Verdict::fail);
    CHECK(r.plus_verdict.failed());
    CHECK(r.plus_verdict.extremal_eig > 10 * r.plus_verdict.tol_used * r.plus_verdict.scale);
  }
  const ReflectionReport inf15 = reflection_negative_check(abs_power(1.5), kInf, hs, opt);
  CHECK(inf15.verdict == Verdict::fail);
  REQUIRE(inf15.bernstein_verdict.has_value());
  CHECK(inf15.bernstein_verdict->failed());

  const FuncHandle affine("affine", Domain::real_line(), [](double t) { return 0.5 + 2.0 * std::abs(t); });
  CHECK(reflection_negative_check(affine, kInf, hs).verdict == Verdict::pass);

  const FuncHandle odd("odd", Domain::real_line(), [](double t) { return t; });
  try {
    (void)reflection_negative_check(odd, 1.0, hs);
    FAIL("expected NotSymmetric");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NotSymmetric);
  }
}

TEST_CASE("polya_check") {
  const auto grid = uniform_points(0.0, 3.0, 20);
  const PositivityVerdict t = polya_check(triangle(), grid);
  CHECK(t.passed());
  CHECK(polya_check(green(), grid).passed());
  const FuncHandle gauss("gauss", Domain::real_line(), [](double s) { return std::exp(-s * s); });
  const PositivityVerdict g = polya_check(gauss, grid);
  CHECK(g.failed());
  CHECK(g.note.find("criterion not met") != std::string::npos);
  CHECK_THROWS_AS(polya_check(green(), {-1.0, 0.0, 1.0}), Error);
}

TEST_CASE("extendable_check") {
  const FuncHandle e("exp", Domain::closed(0.0, 1.0), [](double t) { return std::exp(-t); });
  const Extension x = extendable_check(e, 1.0);
  CHECK(x.extendable);
  CHECK(x.slope == doctest::Approx(-std::exp(-1.0)).epsilon(1e-8));
  CHECK(x.extension(5.0) == std::exp(-1.0));
  CHECK(x.extension(0.5) == std::exp(-0.5));

  const FuncHandle q2("quad", Domain::closed(0.0, 2.0), [](double t) { return (t - 1) * (t - 1); });
  const Extension y = extendable_check(q2, 2.0);
  CHECK_FALSE(y.extendable);
  CHECK(y.slope == doctest::Approx(2.0).epsilon(1e-8));

  const FuncHandle q1("quad", Domain::closed(0.0, 1.0), [](double t) { return (t - 1) * (t - 1); });
  CHECK(extendable_check(q1, 1.0).extendable);

  const FuncHandle concave("concave", Domain::closed(0.0, 1.0), [](double t) { return 1 - t * t; });
  try {
    (void)extendable_check(concave, 1.0);
    FAIL("expected NotConvex");
  } catch (const Error& err) {
    CHECK(err.kind() == ErrorKind::NotConvex);
  }
}

TEST_CASE("thm59_check") {
  const Thm59Report a = thm59_check(Measure::dirac(1.0), 1.0);
  CHECK(a.sufficient);
  CHECK(a.rp.verdict == Verdict::pass);
  CHECK(a.necessary_witness.has_value());
  CHECK(a.consistent);

  Measure edge = Measure::dirac(1.0);
  edge.add_atom(-1.0, std::exp(-2.0));
  const Thm59Report b = thm59_check(edge, 1.0);
  CHECK(std::abs(b.boundary_slope) < 1e-15);
  CHECK(b.sufficient);
  CHECK(b.rp.verdict == Verdict::pass);
  CHECK(b.necessary_witness.has_value());

  Measure over = Measure::dirac(1.0);
  over.add_atom(-1.0, 1.2 * std::exp(-1.0));
  const Thm59Report c = thm59_check(over, 1.0);
  CHECK_FALSE(c.sufficient);
  CHECK(c.rp.verdict == Verdict::fail);
  CHECK(c.rp.two_point.has_value());
  CHECK_FALSE(c.necessary_witness.has_value());

  // Constant phi: no witness required.
  const Thm59Report d = thm59_check(Measure::dirac(0.0, 2.0), 1.0);
  CHECK(d.rp.verdict == Verdict::pass);
  CHECK_FALSE(d.nonconstant);
  CHECK_FALSE(d.necessary_witness.has_value());
}

TEST_CASE("periodic_rp") {
  const double lam = 0.7, beta = 3.0;
  const Measure mu = Measure::dirac(lam);
  for (double t : {0.0, 0.4, 1.5, 2.9}) {
    const double expect = 2 * std::exp(-beta * lam / 2) * std::cosh((beta / 2 - t) * lam);
    CHECK(periodic_rp(mu, beta, t, 1e-12).value == doctest::Approx(expect).epsilon(1e-14));
  }
  const double mid = periodic_rp(mu, beta, beta / 2, 1e-12).value;
  for (double t : {0.1, 1.0, 1.4, 2.2}) CHECK(periodic_rp(mu, beta, t, 1e-12).value >= mid);

  Measure mixed = Measure::dirac(0.3, 0.5).add_atom(2.0, 1.0);
  mixed.add_term({1.0, 0.5, 1.0, 0.0, kInf});
  std::mt19937 rng(31);
  std::uniform_real_distribution<double> ts(-10.0, 10.0);
  for (int i = 0; i < 20; ++i) {
    const double t = ts(rng);
    const double f = periodic_rp(mixed, beta, t, 1e-12).value;
    CHECK(std::abs(periodic_rp(mixed, beta, beta - t, 1e-12).value - f) <= 1e-12 * f);
    CHECK(std::abs(periodic_rp(mixed, beta, t + beta, 1e-12).value - f) <= 1e-12 * f);
    CHECK(std::abs(periodic_rp(mixed, beta, -t, 1e-12).value - f) <= 1e-12 * f);
  }
  const FuncHandle per = periodic_function(mixed, beta);
  CHECK(reflection_positive_check(per, beta / 2).verdict == Verdict::pass);
  CHECK_THROWS_AS(periodic_rp(Measure::dirac(-1.0), beta, 0.0, 1e-12), Error);
}

TEST_CASE("double_integral_rp") {
  const double a = 1.0;
  CHECK(double_integral_rp({}, a, 0.3) == 0.0);
  const double t = 0.4;
  CHECK(double_integral_rp({{1.0, 1.0, 1.0}}, a, t) ==
        doctest::Approx(std::exp(-t) + std::exp(-1.0) * std::exp(t)).epsilon(1e-15));
  const std::vector<BiAtom> two = {{1.0, 1.0, 1.0}, {2.5, 1.7, 0.4}};
  CHECK(double_integral_rp(two, a, -t) ==
        doctest::Approx(double_integral_rp({two[0]}, a, t) + double_integral_rp({two[1]}, a, t)));
  ReflectionOptions opt;
  opt.n = 10;
  CHECK(reflection_positive_check(double_integral_function(two, a), a, opt).verdict == Verdict::pass);
  CHECK_THROWS_AS(double_integral_rp(two, a, 1.0), Error);
  CHECK_THROWS_AS(double_integral_rp({{1.0, 0.5, 1.0}}, a, 0.0), Error);
}

TEST_CASE("property: Polya criterion implies positive definite minus kernels") {
  std::mt19937 rng(37);
  for (const FuncHandle& f : {triangle(), green()}) {
    REQUIRE(polya_check(f, uniform_points(0.0, 3.0, 24)).passed());
    for (int i = 0; i < 10; ++i) CHECK(psd_check(gram_minus(f, random_symmetric(rng, 3.0, 6))).passed());
  }
}

TEST_CASE("property: extendable convex functions give positive definite kernels") {
  std::mt19937 rng(41);
  std::uniform_real_distribution<double> r(0.2, 3.0);
  for (int trial = 0; trial < 10; ++trial) {
    const double l1 = r(rng), l2 = r(rng), a = 1.0;
    const FuncHandle psi("psi", Domain::closed(0.0, a),
                         [=](double t) { return std::exp(-l1 * t) + 0.5 * std::exp(-l2 * t); });
    const Extension ext = extendable_check(psi, a);
    REQUIRE(ext.extendable);
    const FuncHandle phi("phi", Domain::closed(-a, a), [psi](double t) { return psi(std::abs(t)); });
    CHECK(psd_check(gram_minus(phi, random_symmetric(rng, a, 6))).passed());
  }
}

TEST_CASE("property: sufficient boundary slope implies reflection positivity") {
  std::mt19937 rng(43);
  std::uniform_real_distribution<double> lam(0.0, 3.0), w(0.1, 2.0);
  for (int trial = 0; trial < 10; ++trial) {
    Measure mu;
    for (int i = 0; i < 3; ++i) mu.add_atom(lam(rng), w(rng));
    const Thm59Report r = thm59_check(mu, 1.0);
    CHECK(r.sufficient);
    CHECK(r.rp.verdict == Verdict::pass);
    if (r.nonconstant) CHECK(r.necessary_witness.has_value());
  }
}

TEST_CASE("property: boundary pair eigenvalue decreases in c and crosses near e^{-1}") {
  const double a = 1.0, eps = 1e-6;
  double prev = kInf;
  for (double c = 0.0; c <= 0.6; c += 0.02) {
    const double e = boundary_pair_min_eig(two_exp(c), a, eps);
    CHECK(e < prev);
    prev = e;
  }
  const double cstar = std::exp(-(a - eps));
  CHECK(boundary_pair_min_eig(two_exp(cstar * 0.999), a, eps) > 0.0);
  CHECK(boundary_pair_min_eig(two_exp(cstar * 1.001), a, eps) < 0.0);
}
