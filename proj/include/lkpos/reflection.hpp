#pragma once

#include <optional>
#include <string>
#include <vector>

#include "lkpos/diffcalc.hpp"
#include "lkpos/func.hpp"
#include "lkpos/grids.hpp"
#include "lkpos/kernelcheck.hpp"
#include "lkpos/measure.hpp"

namespace lkpos {

/// Sampling window used in place of (0, a) when a is infinite.
inline constexpr double kInfiniteWindow = 4.0;

struct ReflectionReport {
  /// Kernel phi((t - s)/2) on a symmetric grid in (-a, a).
  PositivityVerdict minus_verdict;
  /// Kernel phi((t + s)/2) on a grid in (0, a).
  PositivityVerdict plus_verdict;
  double a = 0.0;
  bool symmetric = true;
  /// max |phi(t) - phi(-t)| over the symmetric grid.
  double asymmetry = 0.0;
  Verdict verdict = Verdict::pass;
  /// Reflection negativity only: e^{-h psi} on both kernels.
  std::optional<PositivityVerdict> schoenberg_minus;
  std::optional<PositivityVerdict> schoenberg_plus;
  /// Reflection negativity on the whole line only: psi - psi(0+) on (0, inf).
  std::optional<PositivityVerdict> bernstein_verdict;
  /// Smallest 2x2 violation of the minus kernel, when it fails.
  std::optional<PositivityVerdict> two_point;
  std::string note;
};

struct ReflectionOptions {
  int n = kDefaultGridSize;
  GridKind grid_kind = GridKind::chebyshev;
  std::optional<double> tol;
};

/// Both kernels positive semidefinite and phi even on the grid. a may be infinite.
ReflectionReport reflection_positive_check(const FuncHandle& phi, double a, const ReflectionOptions& opt = {});

/// Both kernels conditionally negative definite, cross-checked with
/// e^{-h psi} for h in hs; for a = inf also the Bernstein test. Throws
/// NotSymmetric when psi is not even on the grid.
ReflectionReport reflection_negative_check(const FuncHandle& psi, double a, const std::vector<double>& hs,
                                           const ReflectionOptions& opt = {});

/// The sub-verdict that decided the report (first failing, else first
/// inconclusive, else the minus kernel) with the combined verdict and note.
PositivityVerdict summary(const ReflectionReport& r);

/// Minimum eigenvalue of the minus kernel at the pair {-(a - eps), a - eps}.
double boundary_pair_min_eig(const FuncHandle& phi, double a, double eps);

/// Sufficient criterion for positive definiteness on the line: phi >= 0,
/// convex and decreasing on grid (a subset of [0, inf)). FAIL means only that
/// the criterion is not met. A PASS is cross-validated against the minus
/// kernel on the mirrored grid and downgraded to INCONCLUSIVE on disagreement.
PositivityVerdict polya_check(const FuncHandle& phi, const std::vector<double>& grid,
                              std::optional<double> tol = std::nullopt);

struct Extension {
  bool extendable = false;
  /// One-sided derivative psi'(a-).
  double slope = 0.0;
  /// psi on [0, a], constant psi(a) beyond.
  FuncHandle extension;
};

/// Throws NotConvex when psi is not convex on [0, a].
Extension extendable_check(const FuncHandle& psi, double a, double tol = 1e-8);

struct Thm59Report {
  /// L(mu)'(a-) <= tol.
  bool sufficient = false;
  double boundary_slope = 0.0;
  ReflectionReport rp;
  bool nonconstant = false;
  /// Smallest b on the scan grid with L(mu)'(b) < -tol.
  std::optional<double> necessary_witness;
  /// False when the sufficient condition holds but rp failed.
  bool consistent = true;
};

/// Boundary-derivative test for phi(t) = L(mu)(|t|) on (-a, a).
Thm59Report thm59_check(const Measure& mu, double a, const ReflectionOptions& opt = {});

/// beta-periodic f(t) = int e^{-t lambda} + e^{-(beta - t) lambda} dmu_plus, t reduced mod beta.
LaplaceValue periodic_rp(const Measure& mu_plus, double beta, double t, double tol);
FuncHandle periodic_function(const Measure& mu_plus, double beta, double tol = 1e-12);

/// Atom of a measure on [0, inf) x [a, inf).
struct BiAtom {
  double lambda = 0.0;
  double beta = 0.0;
  double weight = 0.0;
};

/// sum w (e^{-lambda |t|} + e^{-beta lambda} e^{lambda |t|}) for |t| < a.
double double_integral_rp(const std::vector<BiAtom>& atoms, double a, double t);
FuncHandle double_integral_function(const std::vector<BiAtom>& atoms, double a);

}  // namespace lkpos
