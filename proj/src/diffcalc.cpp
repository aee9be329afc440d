#include "lkpos/diffcalc.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "lkpos/error.hpp"

namespace lkpos {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

double binomial(int n, int k) {
  double c = 1.0;
  for (int j = 1; j <= k; ++j) c = c * (n - k + j) / j;
  return c;
}

std::vector<double> stencil_weights(int k) {
  std::vector<double> w(k + 1);
  for (int j = 0; j <= k; ++j) w[j] = (j % 2 ? -1.0 : 1.0) * binomial(k, j);
  return w;
}

// Central difference of order k with spacing h; points t + (k/2 - j) h.
double central_difference(const FuncHandle& f, double t, int k, double h) {
  const std::vector<double> w = stencil_weights(k);
  double sum = 0.0;
  for (int j = 0; j <= k; ++j) sum += w[j] * f(t + (0.5 * k - j) * h);
  return sum / std::pow(h, k);
}

double tol_or_default(std::optional<double> tol, double fallback) {
  const double t = tol.value_or(fallback);
  if (!(t > 0.0)) throw Error(ErrorKind::InvalidArgument, "tolerance must be > 0");
  return t;
}

double local_step(double t, double delta) { return t != 0.0 ? delta * std::abs(t) : delta; }

}  // namespace

std::vector<double> default_deltas() { return {1e-1, 1e-2, 1e-3}; }

double delta_k(const FuncHandle& f, double t, double delta, int k) {
  if (k < 0 || k > kMaxDifferenceOrder) {
    throw Error(ErrorKind::OrderTooHigh, "difference order must be in [0, 12]");
  }
  const std::vector<double> w = stencil_weights(k);
  double sum = 0.0;
  for (int j = 0; j <= k; ++j) sum += w[j] * f(t + j * delta);
  return sum;
}

double derivative(const FuncHandle& f, double t, int k) {
  if (k < 0) throw Error(ErrorKind::InvalidArgument, "derivative order must be >= 0");
  if (f.has_derivatives() && k <= f.max_order()) return f.analytic_derivative(t, k);
  if (k > kMaxNumericOrder) {
    throw Error(ErrorKind::OrderTooHigh, f.name() + ": order " + std::to_string(k) +
                                             " needs closed-form derivatives");
  }
  if (k == 0) return f(t);
  if (!f.domain().contains(t)) {
    throw Error(ErrorKind::DomainError, f.name() + ": argument outside the domain");
  }
  // Ridders' extrapolation: central differences at steps shrinking by 1.4,
  // Neville tableau in h^2, keep the entry whose neighbours agree best. The
  // largest step keeps the stencil inside the domain and is capped by the
  // distance to a finite endpoint, where the function may vary faster.
  const double room = f.domain().distance_to_boundary(t);
  double h = std::min(0.1 * std::max(1.0, std::abs(t)), 0.3 * room / std::max(1.0, 0.5 * k));
  if (!(h > 0.0)) throw Error(ErrorKind::DomainError, f.name() + ": no room for a central difference");

  constexpr int kTab = 10;
  constexpr double kCon = 1.4, kCon2 = kCon * kCon;
  double tab[kTab][kTab];
  tab[0][0] = central_difference(f, t, k, h);
  double best = tab[0][0], err = kInf;
  for (int i = 1; i < kTab; ++i) {
    h /= kCon;
    tab[0][i] = central_difference(f, t, k, h);
    double fac = kCon2;
    for (int j = 1; j <= i; ++j) {
      tab[j][i] = (tab[j - 1][i] * fac - tab[j - 1][i - 1]) / (fac - 1.0);
      fac *= kCon2;
      const double e = std::max(std::abs(tab[j][i] - tab[j - 1][i]), std::abs(tab[j][i] - tab[j - 1][i - 1]));
      if (e <= err) {
        err = e;
        best = tab[j][i];
      }
    }
    if (i >= 4 && std::abs(tab[i][i] - tab[i - 1][i - 1]) >= 2.0 * err) break;
  }
  return best;
}

double one_sided_derivative(const FuncHandle& f, double t, int side) {
  if (side == 0) throw Error(ErrorKind::InvalidArgument, "side must be nonzero");
  const double s = side < 0 ? -1.0 : 1.0;
  const double f0 = f(t);
  double h = std::pow(kEps, 0.2) * std::max(1.0, std::abs(t));
  const Domain& d = f.domain();
  const double room = s < 0 ? t - d.lo : d.hi - t;
  if (std::isfinite(room)) h = std::min(h, 0.9 * room);
  if (!(h > 0.0)) throw Error(ErrorKind::DomainError, f.name() + ": no room for a one-sided difference");

  // Error expansion in all powers of h: eliminate h, h^2, h^3.
  double tab[4];
  for (int i = 0; i < 4; ++i) {
    const double hi = std::ldexp(h, -i);
    tab[i] = s * (f(t + s * hi) - f0) / hi;
  }
  for (int level = 1; level < 4; ++level) {
    const double p = std::ldexp(1.0, level);
    for (int i = 3; i >= level; --i) tab[i] = (p * tab[i] - tab[i - 1]) / (p - 1.0);
  }
  return tab[3];
}

PositivityVerdict completely_monotone_check(const FuncHandle& f, const std::vector<double>& grid, int k_max,
                                            const std::vector<double>& deltas, std::optional<double> tol) {
  if (grid.empty() || deltas.empty()) throw Error(ErrorKind::InvalidArgument, "grid and deltas must be nonempty");
  if (k_max < 0 || k_max > kMaxDifferenceOrder) throw Error(ErrorKind::OrderTooHigh, "k_max must be in [0, 12]");
  PositivityVerdict out;
  out.tol_used = tol_or_default(tol, 1e-9);
  out.grid = grid;
  double worst = kInf;
  for (double t : grid) {
    const double scale = std::max(1.0, std::abs(f(t)));
    for (double delta : deltas) {
      const double h = local_step(t, delta);
      for (int k = 0; k <= k_max; ++k) {
        const double v = delta_k(f, t, h, k) / scale;
        if (v < worst) {
          worst = v;
          out.extremal_eig = v;
          out.scale = scale;
          out.params = {{"t", t}, {"delta", h}, {"k", static_cast<double>(k)}};
        }
      }
    }
  }
  if (worst < -out.tol_used) {
    const int k = static_cast<int>(out.params["k"]);
    const double t = out.params["t"], h = out.params["delta"];
    out.verdict = Verdict::fail;
    out.witness = stencil_weights(k);
    out.grid.clear();
    for (int j = 0; j <= k; ++j) out.grid.push_back(t + j * h);
    out.note = "finite difference of order " + std::to_string(k) + " has the wrong sign";
  }
  return out;
}

BernsteinVerdict bernstein_check(const FuncHandle& psi, const std::vector<double>& grid, int k_max,
                                 const std::vector<double>& deltas, std::optional<double> tol) {
  if (k_max < 0 || k_max + 1 > kMaxDifferenceOrder) throw Error(ErrorKind::OrderTooHigh, "k_max must be in [0, 11]");
  std::vector<double> pos;
  for (double t : grid)
    if (t > 0.0) pos.push_back(t);
  if (pos.empty() || deltas.empty()) throw Error(ErrorKind::InvalidArgument, "need positive grid points and deltas");
  const double tl = tol_or_default(tol, 1e-9);

  BernsteinVerdict out;
  PositivityVerdict& nn = out.nonnegative;
  nn.tol_used = tl;
  nn.grid = pos;
  nn.extremal_eig = kInf;
  for (double t : pos) {
    const double v = psi(t);
    if (v < nn.extremal_eig) {
      nn.extremal_eig = v;
      nn.params = {{"t", t}};
    }
  }
  if (nn.extremal_eig < -tl) {
    nn.verdict = Verdict::fail;
    nn.witness.assign(pos.size(), 0.0);
    const auto at = std::find(pos.begin(), pos.end(), nn.params["t"]);
    nn.witness[at - pos.begin()] = 1.0;
    nn.note = "negative value";
  }

  PositivityVerdict& dp = out.derivative_part;
  dp.tol_used = tl;
  dp.grid = pos;
  double worst = -kInf;
  for (double t : pos) {
    const double scale = std::max(1.0, std::abs(psi(t)));
    for (double delta : deltas) {
      const double h = local_step(t, delta);
      for (int k = 0; k <= k_max; ++k) {
        const double v = delta_k(psi, t, h, k + 1) / scale;
        if (v > worst) {
          worst = v;
          dp.extremal_eig = v;
          dp.scale = scale;
          dp.params = {{"t", t}, {"delta", h}, {"k", static_cast<double>(k)}};
        }
      }
    }
  }
  if (worst > tl) {
    const int k = static_cast<int>(dp.params["k"]) + 1;
    const double t = dp.params["t"], h = dp.params["delta"];
    dp.verdict = Verdict::fail;
    dp.witness = stencil_weights(k);
    dp.grid.clear();
    for (int j = 0; j <= k; ++j) dp.grid.push_back(t + j * h);
    dp.note = "derivative is not completely monotone";
  }

  out.overall = nn.failed() ? nn : dp;
  if (nn.failed() && dp.failed()) out.overall.note = "negative value and derivative is not completely monotone";
  return out;
}

Eigen::MatrixXd hankel_matrix(const FuncHandle& f, double c, int first, int size, double sign) {
  if (size < 1) throw Error(ErrorKind::InvalidArgument, "Hankel size must be >= 1");
  const int top = first + 2 * (size - 1);
  if (!(f.has_derivatives() && top <= f.max_order()) && top > kMaxNumericOrder) {
    throw Error(ErrorKind::OrderTooHigh, f.name() + ": Hankel matrix needs derivatives up to order " +
                                             std::to_string(top));
  }
  std::vector<double> d(top + 1 - first);
  for (int k = first; k <= top; ++k) d[k - first] = sign * derivative(f, c, k);
  Eigen::MatrixXd m(size, size);
  for (int i = 0; i < size; ++i)
    for (int j = 0; j < size; ++j) m(i, j) = d[i + j];
  return m;
}

PositivityVerdict hankel_check(const FuncHandle& f, double c, int n, bool shifted, std::optional<double> tol) {
  if (n < 0) throw Error(ErrorKind::InvalidArgument, "n must be >= 0");
  const Eigen::MatrixXd m = shifted ? hankel_matrix(f, c, 1, n + 1, -1.0) : hankel_matrix(f, c, 0, n + 1);
  std::vector<double> idx(n + 1);
  for (int i = 0; i <= n; ++i) idx[i] = i;
  PositivityVerdict v = psd_check(custom_gram(idx, m), tol);
  v.params["c"] = c;
  if (v.failed()) v.note = shifted ? "-f' Hankel matrix is not positive semidefinite"
                                   : "Hankel matrix is not positive semidefinite";
  return v;
}

PositivityVerdict convex_decreasing_check(const FuncHandle& f, const std::vector<double>& grid,
                                          std::optional<double> tol) {
  const std::size_t n = grid.size();
  if (n < 3) throw Error(ErrorKind::InvalidArgument, "convex_decreasing_check needs at least 3 points");
  for (std::size_t i = 1; i < n; ++i)
    if (!(grid[i] > grid[i - 1])) throw Error(ErrorKind::InvalidArgument, "grid must be strictly increasing");
  PositivityVerdict out;
  out.tol_used = tol_or_default(tol, default_tolerance(n));
  out.grid = grid;

  std::vector<double> y(n), slope(n - 1);
  double vscale = 1.0;
  for (std::size_t i = 0; i < n; ++i) {
    y[i] = f(grid[i]);
    vscale = std::max(vscale, std::abs(y[i]));
  }
  double sscale = 1.0;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    slope[i] = (y[i + 1] - y[i]) / (grid[i + 1] - grid[i]);
    sscale = std::max(sscale, std::abs(slope[i]));
  }
  out.scale = vscale;

  // Decreasing: the largest rise between neighbours.
  std::size_t worst_i = 0;
  double rise = -kInf;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    if (y[i + 1] - y[i] > rise) {
      rise = y[i + 1] - y[i];
      worst_i = i;
    }
  }
  if (rise > out.tol_used * vscale) {
    out.verdict = Verdict::fail;
    out.extremal_eig = rise;
    out.witness.assign(n, 0.0);
    out.witness[worst_i] = -1.0;
    out.witness[worst_i + 1] = 1.0;
    out.params = {{"t", grid[worst_i]}};
    out.note = "not decreasing";
    return out;
  }

  // Convex: the most negative change of slope.
  double drop = kInf;
  for (std::size_t i = 0; i + 2 < n; ++i) {
    if (slope[i + 1] - slope[i] < drop) {
      drop = slope[i + 1] - slope[i];
      worst_i = i;
    }
  }
  out.extremal_eig = drop;
  if (drop < -out.tol_used * sscale) {
    const double h0 = grid[worst_i + 1] - grid[worst_i], h1 = grid[worst_i + 2] - grid[worst_i + 1];
    out.verdict = Verdict::fail;
    out.scale = sscale;
    out.witness.assign(n, 0.0);
    out.witness[worst_i] = 1.0 / h0;
    out.witness[worst_i + 1] = -1.0 / h0 - 1.0 / h1;
    out.witness[worst_i + 2] = 1.0 / h1;
    out.params = {{"t", grid[worst_i + 1]}};
    out.note = "not convex";
  }
  return out;
}

}  // namespace lkpos
