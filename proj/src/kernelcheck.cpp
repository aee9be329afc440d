#include "lkpos/kernelcheck.hpp"

#include <algorithm>
#include <cmath>

namespace lkpos {

namespace {

void check_points(const std::vector<double>& points) {
  if (points.empty()) throw Error(ErrorKind::InvalidArgument, "kernel needs at least one point");
  for (std::size_t i = 1; i < points.size(); ++i) {
    if (!(points[i] > points[i - 1])) {
      throw Error(ErrorKind::InvalidArgument, "kernel points must be strictly increasing");
    }
  }
}

double matrix_scale(const Eigen::MatrixXd& m) {
  const double s = m.size() ? m.cwiseAbs().maxCoeff() : 0.0;
  return s > 0.0 ? s : 1.0;
}

void check_finite(const KernelGram& g) {
  if (!g.entries.allFinite()) throw Error(ErrorKind::NonFiniteEntry, "Gram matrix has non-finite entries");
}

std::vector<double> to_vector(const Eigen::VectorXd& v) { return {v.data(), v.data() + v.size()}; }

}  // namespace

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::pass: return "PASS";
    case Verdict::fail: return "FAIL";
    case Verdict::inconclusive: return "INCONCLUSIVE";
  }
  return "INCONCLUSIVE";
}

double default_tolerance(std::size_t n) { return 1e-9 * static_cast<double>(std::max<std::size_t>(n, 1)); }

KernelGram make_gram(const FuncHandle& f, const std::vector<double>& points, KernelKind kind) {
  check_points(points);
  const std::size_t n = points.size();
  KernelGram g;
  g.points = points;
  g.kind = kind;
  g.entries.resize(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      const double arg = kind == KernelKind::minus ? 0.5 * (points[i] - points[j])
                                                   : 0.5 * (points[i] + points[j]);
      const Evaluation e = f.evaluate(arg);
      g.converged = g.converged && e.converged;
      g.entries(i, j) = e.value;
      // The minus kernel at (j, i) is f(-arg); sampling it keeps the matrix
      // honest for functions that are not even.
      g.entries(j, i) = (kind == KernelKind::minus && i != j) ? f.evaluate(-arg).value : e.value;
    }
  }
  if (kind == KernelKind::minus) {
    // Symmetric by construction: keep the average, asymmetry shows up in the
    // evenness tests of the callers.
    g.entries = 0.5 * (g.entries + g.entries.transpose()).eval();
  }
  return g;
}

KernelGram gram_plus(const FuncHandle& f, const std::vector<double>& points) {
  return make_gram(f, points, KernelKind::plus);
}

KernelGram gram_minus(const FuncHandle& f, const std::vector<double>& points) {
  return make_gram(f, points, KernelKind::minus);
}

KernelGram custom_gram(std::vector<double> points, Eigen::MatrixXd entries) {
  if (entries.rows() != entries.cols() || entries.rows() != static_cast<Eigen::Index>(points.size())) {
    throw Error(ErrorKind::InvalidArgument, "Gram matrix must be square and match the points");
  }
  if (!entries.allFinite()) throw Error(ErrorKind::NonFiniteEntry, "Gram matrix has non-finite entries");
  if (entries != entries.transpose()) {
    throw Error(ErrorKind::NotSymmetric, "Gram matrix must be symmetric");
  }
  KernelGram g;
  g.points = std::move(points);
  g.entries = std::move(entries);
  g.kind = KernelKind::custom;
  return g;
}

PositivityVerdict psd_check(const KernelGram& g, std::optional<double> tol) {
  check_finite(g);
  PositivityVerdict out;
  out.tol_used = tol.value_or(default_tolerance(g.size()));
  out.scale = matrix_scale(g.entries);
  out.grid = g.points;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(g.entries);
  out.extremal_eig = es.eigenvalues()(0);
  if (out.extremal_eig < -out.tol_used * out.scale) {
    out.verdict = Verdict::fail;
    out.witness = to_vector(es.eigenvectors().col(0));
    out.note = "negative eigenvalue";
  } else {
    out.verdict = Verdict::pass;
  }
  if (!g.converged && out.verdict == Verdict::pass) {
    out.verdict = Verdict::inconclusive;
    out.note = "kernel evaluations did not converge";
  }
  return out;
}

PositivityVerdict cnd_check(const KernelGram& g, std::optional<double> tol) {
  check_finite(g);
  const Eigen::Index n = g.entries.rows();
  PositivityVerdict out;
  out.tol_used = tol.value_or(default_tolerance(g.size()));
  out.scale = matrix_scale(g.entries);
  out.grid = g.points;
  const Eigen::MatrixXd p =
      Eigen::MatrixXd::Identity(n, n) - Eigen::MatrixXd::Constant(n, n, 1.0 / static_cast<double>(n));
  const Eigen::MatrixXd centered = p * g.entries * p;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (centered + centered.transpose()));
  out.extremal_eig = es.eigenvalues()(n - 1);
  if (out.extremal_eig > out.tol_used * out.scale) {
    Eigen::VectorXd w = p * es.eigenvectors().col(n - 1);
    w.normalize();
    out.verdict = Verdict::fail;
    out.witness = to_vector(w);
    out.note = "positive quadratic form on centered vectors";
  } else {
    out.verdict = Verdict::pass;
  }
  if (!g.converged && out.verdict == Verdict::pass) {
    out.verdict = Verdict::inconclusive;
    out.note = "kernel evaluations did not converge";
  }
  return out;
}

std::optional<PositivityVerdict> two_point_witness(const KernelGram& g, std::optional<double> tol) {
  check_finite(g);
  const double t = tol.value_or(default_tolerance(2));
  const double scale = matrix_scale(g.entries);
  const Eigen::Index n = g.entries.rows();
  std::optional<PositivityVerdict> best;
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      Eigen::Matrix2d block;
      block << g.entries(i, i), g.entries(i, j), g.entries(j, i), g.entries(j, j);
      Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(block);
      const double lmin = es.eigenvalues()(0);
      if (lmin < -t * scale && (!best || lmin < best->extremal_eig)) {
        PositivityVerdict v;
        v.verdict = Verdict::fail;
        v.extremal_eig = lmin;
        v.tol_used = t;
        v.scale = scale;
        v.grid = g.points;
        v.witness.assign(n, 0.0);
        v.witness[i] = es.eigenvectors()(0, 0);
        v.witness[j] = es.eigenvectors()(1, 0);
        v.params = {{"i", static_cast<double>(i)}, {"j", static_cast<double>(j)},
                    {"x_i", g.points[i]}, {"x_j", g.points[j]}};
        v.note = "2x2 principal block is indefinite";
        best = v;
      }
    }
  }
  return best;
}

std::vector<double> dyadic_hs(int k_max) {
  std::vector<double> hs;
  for (int k = 0; k <= k_max; ++k) hs.push_back(std::ldexp(1.0, -k));
  return hs;
}

PositivityVerdict schoenberg_check(const FuncHandle& psi, const std::vector<double>& points,
                                   const std::vector<double>& hs, KernelKind kind,
                                   std::optional<double> tol) {
  if (hs.empty()) throw Error(ErrorKind::InvalidArgument, "schoenberg_check needs at least one h");
  std::optional<PositivityVerdict> tightest;
  bool inconclusive = false;
  for (double h : hs) {
    if (!(h > 0.0)) throw Error(ErrorKind::InvalidArgument, "h must be > 0");
    const FuncHandle phi(psi.name() + "_exp", psi.domain(), FuncHandle::Evaluator([psi, h](double t) {
                           const Evaluation e = psi.evaluate(t);
                           return Evaluation{std::exp(-h * e.value), e.converged};
                         }));
    PositivityVerdict v = psd_check(make_gram(phi, points, kind), tol);
    v.params["h"] = h;
    if (v.failed()) {
      v.note = "e^{-h psi} is not positive definite";
      return v;
    }
    inconclusive = inconclusive || v.verdict == Verdict::inconclusive;
    if (!tightest || v.extremal_eig / v.scale < tightest->extremal_eig / tightest->scale) tightest = v;
  }
  if (inconclusive) tightest->verdict = Verdict::inconclusive;
  return *tightest;
}

QuotientSpace quotient_space(const KernelGram& k, const std::vector<int>& tau_pairing,
                             const std::vector<int>& plus_indices, std::optional<double> tol) {
  check_finite(k);
  const int n_full = static_cast<int>(k.size());
  if (static_cast<int>(tau_pairing.size()) != n_full) {
    throw Error(ErrorKind::IndexError, "tau_pairing must cover every point");
  }
  for (int i = 0; i < n_full; ++i) {
    const int j = tau_pairing[i];
    if (j < 0 || j >= n_full || tau_pairing[j] != i) {
      throw Error(ErrorKind::IndexError, "tau_pairing must be an involution on the indices");
    }
  }
  for (int p : plus_indices) {
    if (p < 0 || p >= n_full) throw Error(ErrorKind::IndexError, "plus index out of range");
  }
  const PositivityVerdict base = psd_check(k, tol);
  if (base.failed()) {
    throw Error(ErrorKind::InvalidArgument, "kernel is not positive definite on the full grid");
  }

  const int n = static_cast<int>(plus_indices.size());
  const double t = tol.value_or(default_tolerance(k.size()));
  QuotientSpace q;
  q.scale = matrix_scale(k.entries);
  q.gram_tau.resize(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) q.gram_tau(i, j) = k.entries(tau_pairing[plus_indices[i]], plus_indices[j]);
  }
  if ((q.gram_tau - q.gram_tau.transpose()).cwiseAbs().maxCoeff() > t * q.scale) {
    throw Error(ErrorKind::NotSymmetric, "kernel is not invariant under the reflection");
  }

  // K = F F^T; theta K_x = K_{tau x}, so <theta K_x, K_y> = F(tau x) . F(y).
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> full(k.entries);
  const Eigen::MatrixXd factor =
      full.eigenvectors() * full.eigenvalues().cwiseMax(0.0).cwiseSqrt().asDiagonal();
  double residual = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const double inner = factor.row(tau_pairing[plus_indices[i]]).dot(factor.row(plus_indices[j]));
      residual = std::max(residual, std::abs(inner - q.gram_tau(i, j)));
    }
  }
  q.identity_residual = residual;

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (q.gram_tau + q.gram_tau.transpose()));
  q.q_gram_eigvals = to_vector(es.eigenvalues());
  if (n > 0 && es.eigenvalues()(0) < -t * q.scale) {
    throw NotReflectionPositiveError("K^tau is not positive definite on the plus points",
                                     to_vector(es.eigenvectors().col(0)), es.eigenvalues()(0));
  }
  q.rank = static_cast<int>(std::count_if(q.q_gram_eigvals.begin(), q.q_gram_eigvals.end(),
                                          [&](double e) { return e > t * q.scale; }));
  q.null_dim = n - q.rank;
  return q;
}

}  // namespace lkpos
