#include "lkpos/grids.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "lkpos/error.hpp"

namespace lkpos {

namespace {

void check_size(int n) {
  if (n < 1 || n > kMaxGridSize) {
    throw Error(ErrorKind::InvalidArgument,
                "grid size must be between 1 and " + std::to_string(kMaxGridSize));
  }
}

}  // namespace

std::vector<double> chebyshev_points(double lo, double hi, int n) {
  check_size(n);
  std::vector<double> x(n);
  for (int k = 0; k < n; ++k) {
    const double c = std::cos(std::numbers::pi * (2.0 * (n - k) - 1.0) / (2.0 * n));
    x[k] = 0.5 * (lo + hi) + 0.5 * (hi - lo) * c;
  }
  return x;
}

std::vector<double> uniform_points(double lo, double hi, int n) {
  check_size(n);
  std::vector<double> x(n);
  for (int k = 0; k < n; ++k) x[k] = lo + (hi - lo) * (k + 1.0) / (n + 1.0);
  return x;
}

std::vector<double> make_grid(GridKind kind, double lo, double hi, int n) {
  return kind == GridKind::chebyshev ? chebyshev_points(lo, hi, n) : uniform_points(lo, hi, n);
}

std::vector<double> log_spaced(double lo, double hi, int n) {
  std::vector<double> x(n);
  if (n == 1) return {lo};
  const double a = std::log(lo), b = std::log(hi);
  for (int k = 0; k < n; ++k) x[k] = std::exp(a + (b - a) * k / (n - 1.0));
  x.front() = lo;
  x.back() = hi;
  return x;
}

std::vector<double> symmetric_grid(const std::vector<double>& positive) {
  std::vector<double> out;
  out.reserve(2 * positive.size());
  for (auto it = positive.rbegin(); it != positive.rend(); ++it) out.push_back(-*it);
  for (double x : positive) out.push_back(x);
  return out;
}

std::vector<double> random_points(double lo, double hi, int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(lo, hi);
  std::vector<double> x;
  while (static_cast<int>(x.size()) < n) {
    x.push_back(u(rng));
    std::sort(x.begin(), x.end());
    x.erase(std::unique(x.begin(), x.end()), x.end());
  }
  return x;
}

std::pair<double, double> probe_window(const Domain& d) {
  const bool lo_fin = std::isfinite(d.lo), hi_fin = std::isfinite(d.hi);
  if (lo_fin && hi_fin) return {d.lo, d.hi};
  if (lo_fin) return {d.lo, d.lo + 4.0};
  if (hi_fin) return {d.hi - 4.0, d.hi};
  return {-2.0, 2.0};
}

}  // namespace lkpos
