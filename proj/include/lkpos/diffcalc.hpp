#pragma once

#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "lkpos/func.hpp"
#include "lkpos/kernelcheck.hpp"

namespace lkpos {

/// Highest order accepted by delta_k.
inline constexpr int kMaxDifferenceOrder = 12;
/// Highest order derivative() estimates from samples alone.
inline constexpr int kMaxNumericOrder = 4;

/// (Delta_delta^k f)(t) with Delta_delta f(t) = f(t) - f(t + delta), i.e.
/// sum_j (-1)^j C(k, j) f(t + j delta).
double delta_k(const FuncHandle& f, double t, double delta, int k);

/// f^{(k)}(t). Uses the closed form when the handle has one; otherwise
/// central differences at geometrically shrinking steps, extrapolated in h^2
/// (Ridders) with the best-agreeing tableau entry returned.
double derivative(const FuncHandle& f, double t, int k);

/// Left (side < 0) or right (side > 0) derivative at t from one-sided
/// differences with three Richardson steps.
double one_sided_derivative(const FuncHandle& f, double t, int side);

std::vector<double> default_deltas();

/// Finite-difference complete monotonicity: Delta_delta^k f(t) >= -tol * max(1, |f(t)|)
/// for all t in grid, delta in deltas (scaled by |t|), k = 0..k_max.
/// FAIL reports params {t, delta, k}; witness holds the stencil weights and
/// grid the stencil points.
PositivityVerdict completely_monotone_check(const FuncHandle& f, const std::vector<double>& grid,
                                            int k_max = 6,
                                            const std::vector<double>& deltas = default_deltas(),
                                            std::optional<double> tol = std::nullopt);

struct BernsteinVerdict {
  PositivityVerdict overall;
  /// psi >= -tol on the grid.
  PositivityVerdict nonnegative;
  /// Delta_delta^{k+1} psi <= tol * scale for k = 0..k_max, the differenced
  /// form of "psi' is completely monotone".
  PositivityVerdict derivative_part;
};

/// Only the grid points in (0, inf) are used.
BernsteinVerdict bernstein_check(const FuncHandle& psi, const std::vector<double>& grid, int k_max = 6,
                                 const std::vector<double>& deltas = default_deltas(),
                                 std::optional<double> tol = std::nullopt);

/// size x size matrix sign * f^{(first + i + j)}(c).
Eigen::MatrixXd hankel_matrix(const FuncHandle& f, double c, int first, int size, double sign = 1.0);

/// psd_check of (f^{(i+j)}(c))_{i,j=0..n}, or of (-f^{(1+i+j)}(c)) when shifted.
PositivityVerdict hankel_check(const FuncHandle& f, double c, int n, bool shifted,
                               std::optional<double> tol = std::nullopt);

/// Consecutive values nonincreasing and consecutive slopes nondecreasing,
/// both within tol * scale. Grid must be increasing with at least 3 points.
PositivityVerdict convex_decreasing_check(const FuncHandle& f, const std::vector<double>& grid,
                                          std::optional<double> tol = std::nullopt);

}  // namespace lkpos
