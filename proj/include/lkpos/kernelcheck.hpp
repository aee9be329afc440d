#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "lkpos/error.hpp"
#include "lkpos/func.hpp"

namespace lkpos {

enum class KernelKind { plus, minus, custom };

/// Symmetric sample matrix of a two-variable kernel at increasing points.
struct KernelGram {
  std::vector<double> points;
  Eigen::MatrixXd entries;
  KernelKind kind = KernelKind::custom;
  /// False when some entry came from a quadrature that missed its target.
  bool converged = true;

  std::size_t size() const { return points.size(); }
};

enum class Verdict { pass, fail, inconclusive };

std::string to_string(Verdict v);

/// Outcome of a finite positivity test. PASS means no violation was found at
/// this grid and tolerance; FAIL always carries a witness vector.
struct PositivityVerdict {
  Verdict verdict = Verdict::pass;
  double extremal_eig = 0.0;
  double tol_used = 0.0;
  double scale = 1.0;
  std::vector<double> witness;
  std::vector<double> grid;
  /// Which condition failed, or extra context for PASS.
  std::string note;
  /// Location of a witness, e.g. {"h", 0.25} or {"t", 0.1}, {"k", 2}.
  std::map<std::string, double> params;

  bool passed() const { return verdict == Verdict::pass; }
  bool failed() const { return verdict == Verdict::fail; }
};

/// Default relative tolerance 1e-9 * n.
double default_tolerance(std::size_t n);

/// Entries f((x_i + x_j) / 2).
KernelGram gram_plus(const FuncHandle& f, const std::vector<double>& points);
/// Entries f((x_i - x_j) / 2).
KernelGram gram_minus(const FuncHandle& f, const std::vector<double>& points);
KernelGram make_gram(const FuncHandle& f, const std::vector<double>& points, KernelKind kind);
KernelGram custom_gram(std::vector<double> points, Eigen::MatrixXd entries);

/// PASS iff lambda_min(G) >= -tol * scale with scale = max|G_ij|.
PositivityVerdict psd_check(const KernelGram& g, std::optional<double> tol = std::nullopt);

/// PASS iff c^T G c <= tol * scale whenever sum(c) = 0, decided through
/// lambda_max(P G P) with the centering projector P.
PositivityVerdict cnd_check(const KernelGram& g, std::optional<double> tol = std::nullopt);

/// Smallest 2x2 principal minor violation: a pair (i, j) whose 2x2 block has
/// an eigenvalue below -tol * scale. The witness is supported on {i, j}.
std::optional<PositivityVerdict> two_point_witness(const KernelGram& g,
                                                   std::optional<double> tol = std::nullopt);

/// Samples e^{-h psi} on the chosen kernel for every h and runs psd_check.
/// FAIL reports the first failing h in params["h"].
PositivityVerdict schoenberg_check(const FuncHandle& psi, const std::vector<double>& points,
                                   const std::vector<double>& hs, KernelKind kind,
                                   std::optional<double> tol = std::nullopt);

/// Powers of two 2^{-k} for k = 0..k_max.
std::vector<double> dyadic_hs(int k_max);

/// Quotient of the reflection-positive subspace generated by the kernel
/// sections at the plus points.
struct QuotientSpace {
  Eigen::MatrixXd gram_tau;
  int rank = 0;
  int null_dim = 0;
  std::vector<double> q_gram_eigvals;
  /// max |<theta K_x, K_y> - K^tau(x, y)| computed through a factorization of K.
  double identity_residual = 0.0;
  double scale = 1.0;
};

class NotReflectionPositiveError : public Error {
 public:
  NotReflectionPositiveError(const std::string& what, std::vector<double> witness, double eig)
      : Error(ErrorKind::NotReflectionPositive, what), witness_(std::move(witness)), eig_(eig) {}
  const std::vector<double>& witness() const { return witness_; }
  double eigenvalue() const { return eig_; }

 private:
  std::vector<double> witness_;
  double eig_;
};

/// tau_pairing[i] is the index of the reflection of point i; plus_indices
/// select the points of the positive half.
QuotientSpace quotient_space(const KernelGram& k, const std::vector<int>& tau_pairing,
                             const std::vector<int>& plus_indices,
                             std::optional<double> tol = std::nullopt);

}  // namespace lkpos
