#include "lkpos/quadrature.hpp"

#include "lkpos/func.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <numbers>
#include <utility>

namespace lkpos {

namespace {

// Legendre P_n(x) and P_{n-1}(x) by the three-term recurrence.
std::pair<double, double> legendre(int n, double x) {
  double p0 = 1.0, p1 = x;
  for (int k = 2; k <= n; ++k) {
    const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
    p0 = p1;
    p1 = p2;
  }
  return {p1, p0};
}

GaussRule build_rule(int n) {
  GaussRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    for (int iter = 0; iter < 100; ++iter) {
      const auto [pn, pm] = legendre(n, x);
      const double dx = pn / (n * (x * pn - pm) / (x * x - 1.0));
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    const auto [pn, pm] = legendre(n, x);
    const double dp = n * (x * pn - pm) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = -x;
    rule.nodes[n - 1 - i] = x;
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  return rule;
}

}  // namespace

const GaussRule& gauss_legendre(int order) {
  static std::mutex mutex;
  static std::map<int, GaussRule> cache;
  std::lock_guard lock(mutex);
  auto it = cache.find(order);
  if (it == cache.end()) it = cache.emplace(order, build_rule(order)).first;
  return it->second;
}

double gauss_panel(const std::function<double(double)>& f, double a, double b, int order) {
  const GaussRule& rule = gauss_legendre(order);
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (a + b);
  double sum = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    sum += rule.weights[i] * f(mid + half * rule.nodes[i]);
  }
  return half * sum;
}

double PowerExpBound::operator()(double x) const {
  if (coeff == 0.0) return 0.0;
  return coeff * std::pow(x, power) * std::exp(-rate * x);
}

double head_integral_bound(const PowerExpBound& b, double eps) {
  if (b.coeff == 0.0) return 0.0;
  if (b.power <= -1.0) return kInf;
  // exp(-rate x) <= max(1, exp(-rate eps)) on (0, eps].
  const double expo = std::max(1.0, std::exp(-b.rate * eps));
  return b.coeff * expo * std::pow(eps, b.power + 1.0) / (b.power + 1.0);
}

double tail_integral_bound(const PowerExpBound& b, double T) {
  if (b.coeff == 0.0) return 0.0;
  double best = kInf;
  if (b.rate > 0.0) {
    if (b.power <= 0.0) {
      best = b.coeff * std::pow(T, b.power) * std::exp(-b.rate * T) / b.rate;
    } else if (T >= 2.0 * b.power / b.rate) {
      best = 2.0 * b.coeff * std::pow(T, b.power) * std::exp(-b.rate * T) / b.rate;
    }
  }
  if (b.rate >= 0.0 && b.power < -1.0) {
    best = std::min(best, b.coeff * std::pow(T, b.power + 1.0) / (-b.power - 1.0));
  }
  return best;
}

namespace {

void adaptive_step(const std::function<double(double)>& f, double a, double b, double tol,
                   int depth, QuadResult& acc) {
  const double coarse = gauss_panel(f, a, b, 10);
  const double fine = gauss_panel(f, a, b, 20);
  const double diff = std::abs(fine - coarse);
  const double noise = 64.0 * std::numeric_limits<double>::epsilon() * std::abs(fine);
  if (diff <= std::max(tol, noise) || depth <= 0 || !std::isfinite(diff)) {
    acc.value += fine;
    acc.error += diff;
    return;
  }
  const double mid = 0.5 * (a + b);
  adaptive_step(f, a, mid, 0.5 * tol, depth - 1, acc);
  adaptive_step(f, mid, b, 0.5 * tol, depth - 1, acc);
}

}  // namespace

QuadResult adaptive_gauss(const std::function<double(double)>& f, double a, double b, double tol,
                          int max_depth) {
  QuadResult acc;
  if (!(b > a)) return acc;
  adaptive_step(f, a, b, tol, max_depth, acc);
  return acc;
}

}  // namespace lkpos
