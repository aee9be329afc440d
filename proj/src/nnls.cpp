#include "lkpos/nnls.hpp"

#include <algorithm>
#include <limits>
#include <vector>

#include "lkpos/error.hpp"

namespace lkpos {

namespace {

// Unconstrained least squares on the passive columns; zero elsewhere.
Eigen::VectorXd passive_solve(const Eigen::MatrixXd& a, const Eigen::VectorXd& b,
                              const std::vector<bool>& passive) {
  std::vector<Eigen::Index> cols;
  for (Eigen::Index j = 0; j < a.cols(); ++j)
    if (passive[j]) cols.push_back(j);
  Eigen::MatrixXd sub(a.rows(), static_cast<Eigen::Index>(cols.size()));
  for (std::size_t k = 0; k < cols.size(); ++k) sub.col(k) = a.col(cols[k]);
  const Eigen::VectorXd s = sub.completeOrthogonalDecomposition().solve(b);
  Eigen::VectorXd z = Eigen::VectorXd::Zero(a.cols());
  for (std::size_t k = 0; k < cols.size(); ++k) z(cols[k]) = s(k);
  return z;
}

}  // namespace

NnlsResult nnls(const Eigen::MatrixXd& a, const Eigen::VectorXd& b, int max_iter) {
  if (a.rows() != b.size()) throw Error(ErrorKind::InvalidArgument, "nnls: dimension mismatch");
  const Eigen::Index n = a.cols();
  if (max_iter <= 0) max_iter = static_cast<int>(3 * n + 10);
  const double tol = 10.0 * std::numeric_limits<double>::epsilon() * a.cwiseAbs().colwise().sum().maxCoeff() *
                     static_cast<double>(std::max(a.rows(), n));

  NnlsResult out;
  out.x = Eigen::VectorXd::Zero(n);
  std::vector<bool> passive(n, false);
  Eigen::VectorXd w = a.transpose() * (b - a * out.x);
  while (true) {
    Eigen::Index j = -1;
    double best = tol;
    for (Eigen::Index i = 0; i < n; ++i) {
      if (!passive[i] && w(i) > best) {
        best = w(i);
        j = i;
      }
    }
    if (j < 0) break;
    if (++out.iterations > max_iter) {
      out.converged = false;
      break;
    }
    passive[j] = true;

    Eigen::VectorXd z = passive_solve(a, b, passive);
    while (true) {
      bool feasible = true;
      for (Eigen::Index i = 0; i < n; ++i)
        if (passive[i] && z(i) <= 0.0) feasible = false;
      if (feasible) break;
      double alpha = 1.0;
      for (Eigen::Index i = 0; i < n; ++i) {
        if (passive[i] && z(i) <= 0.0) alpha = std::min(alpha, out.x(i) / (out.x(i) - z(i)));
      }
      out.x += alpha * (z - out.x);
      for (Eigen::Index i = 0; i < n; ++i) {
        if (passive[i] && out.x(i) <= tol) {
          passive[i] = false;
          out.x(i) = 0.0;
        }
      }
      z = passive_solve(a, b, passive);
    }
    out.x = z;
    w = a.transpose() * (b - a * out.x);
  }
  out.residual_norm = (a * out.x - b).norm();
  return out;
}

}  // namespace lkpos
