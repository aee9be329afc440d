#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "lkpos/func.hpp"

namespace lkpos {

enum class GridKind { chebyshev, uniform };

/// n Chebyshev points of the first kind mapped into the open interval (lo, hi), increasing.
std::vector<double> chebyshev_points(double lo, double hi, int n);
/// n equally spaced interior points of (lo, hi).
std::vector<double> uniform_points(double lo, double hi, int n);
std::vector<double> make_grid(GridKind kind, double lo, double hi, int n);
/// n log-spaced points from lo to hi inclusive (lo, hi > 0).
std::vector<double> log_spaced(double lo, double hi, int n);
/// {-x_n, ..., -x_1, x_1, ..., x_n} for positive increasing x.
std::vector<double> symmetric_grid(const std::vector<double>& positive);
/// Sorted uniform random points in (lo, hi); deterministic for a given seed.
std::vector<double> random_points(double lo, double hi, int n, std::uint64_t seed);

/// Finite window used to sample a function whose domain may be unbounded.
std::pair<double, double> probe_window(const Domain& domain);

inline constexpr int kDefaultGridSize = 12;
inline constexpr int kMaxGridSize = 64;

}  // namespace lkpos
