#pragma once

#include <functional>
#include <span>
#include <vector>

namespace lkpos {

/// Gauss-Legendre nodes and weights on [-1, 1].
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Cached rule of the given order (Newton iteration on P_n).
const GaussRule& gauss_legendre(int order);

double gauss_panel(const std::function<double(double)>& f, double a, double b, int order);

/// Bound of the form coeff * x^power * exp(-rate * x), used for envelopes of
/// densities and kernels on x > 0.
struct PowerExpBound {
  double coeff = 0.0;
  double power = 0.0;
  double rate = 0.0;

  double operator()(double x) const;
  PowerExpBound operator*(const PowerExpBound& other) const {
    return {coeff * other.coeff, power + other.power, rate + other.rate};
  }
};

/// Upper bound for the integral of `b` over (0, eps], eps <= 1. Infinite when
/// the power is not integrable at zero.
double head_integral_bound(const PowerExpBound& b, double eps);

/// Upper bound for the integral of `b` over [T, infinity), T >= 1. Infinite
/// when the integral diverges.
double tail_integral_bound(const PowerExpBound& b, double T);

struct QuadResult {
  double value = 0.0;
  double error = 0.0;
};

/// Adaptive Gauss-Legendre (10 vs 20 nodes) with bisection until the local
/// difference is below `tol`.
QuadResult adaptive_gauss(const std::function<double(double)>& f, double a, double b, double tol,
                          int max_depth = 40);

}  // namespace lkpos
