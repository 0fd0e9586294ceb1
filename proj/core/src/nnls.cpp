#include "neuralnmf/nnls.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "neuralnmf/threads.hpp"

namespace nnmf {

namespace {

IndexSet set_from_mask(const std::vector<char>& mask) {
  std::vector<std::size_t> idx;
  for (std::size_t j = 0; j < mask.size(); ++j)
    if (mask[j]) idx.push_back(j);
  return IndexSet(std::move(idx), mask.size());
}

/// Unconstrained least squares on the columns in `subset`.
Vector restricted_lstsq(const DenseMatrix& a, const IndexSet& subset,
                        const Vector& x, double rank_tol) {
  const DenseMatrix sub = restrict(a, std::nullopt, subset);
  return pinv(sub, rank_tol) * x;
}

Vector residual(const DenseMatrix& a, const Vector& s, const Vector& x) {
  Vector r = a * s;
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = x[i] - r[i];
  return r;
}

}  // namespace

ColumnSolution nnls_column(const DenseMatrix& a, const Vector& x,
                           const NnlsOptions& opts) {
  const std::size_t n = a.rows();
  const std::size_t k = a.cols();
  if (x.size() != n) {
    throw ShapeMismatch("nnls_column: x has length " +
                        std::to_string(x.size()) + ", A has " +
                        std::to_string(n) + " rows");
  }

  Vector s(k, 0.0);
  std::vector<char> passive(k, 0);
  // Dual vector w = A^T (x - A s); at s = 0 this is A^T x.
  Vector w = transpose_times(a, x);

  const std::size_t major_limit = 3 * k;
  std::size_t major = 0;

  for (;;) {
    // Entering index: largest dual among non-passive coordinates. Strict
    // comparison keeps the lowest index on ties.
    std::size_t enter = k;
    double best = opts.kkt_tol;
    for (std::size_t j = 0; j < k; ++j) {
      if (!passive[j] && w[j] > best) {
        best = w[j];
        enter = j;
      }
    }
    if (enter == k) break;  // dual feasible: done
    if (++major > major_limit) {
      throw NonConvergence("nnls_column: more than " +
                           std::to_string(major_limit) +
                           " active-set iterations");
    }
    passive[enter] = 1;

    // Inner loop: solve on the passive set, step back along the segment to
    // the previous iterate whenever the unconstrained solution leaves the
    // positive orthant, dropping the coordinates that hit zero.
    for (std::size_t guard = 0; guard <= k + 1; ++guard) {
      if (guard == k + 1) {
        throw NonConvergence("nnls_column: inner loop failed to settle");
      }
      const IndexSet pset = set_from_mask(passive);
      const Vector z = restricted_lstsq(a, pset, x, opts.rank_tol);

      double zmin = std::numeric_limits<double>::infinity();
      for (double v : z) zmin = std::min(zmin, v);
      if (zmin > 0.0) {
        std::fill(s.begin(), s.end(), 0.0);
        for (std::size_t t = 0; t < pset.size(); ++t) s[pset[t]] = z[t];
        break;
      }

      double alpha = std::numeric_limits<double>::infinity();
      for (std::size_t t = 0; t < pset.size(); ++t) {
        if (z[t] <= 0.0) {
          const double sj = s[pset[t]];
          alpha = std::min(alpha, sj / (sj - z[t]));
        }
      }
      for (std::size_t t = 0; t < pset.size(); ++t) {
        const std::size_t j = pset[t];
        s[j] += alpha * (z[t] - s[j]);
        if (s[j] <= opts.support_tol) {
          s[j] = 0.0;
          passive[j] = 0;
        }
      }
    }

    const Vector r = residual(a, s, x);
    w = transpose_times(a, r);
  }

  // Snap sub-threshold coefficients to exactly zero and re-solve on the
  // final support so the support formula s_T = pinv(A_{:,T}) x holds to
  // machine precision.
  std::vector<char> in_support(k, 0);
  for (std::size_t j = 0; j < k; ++j)
    in_support[j] = s[j] > opts.support_tol ? 1 : 0;
  IndexSet support = set_from_mask(in_support);
  std::fill(s.begin(), s.end(), 0.0);
  for (std::size_t pass = 0; pass <= k && !support.empty(); ++pass) {
    const Vector z = restricted_lstsq(a, support, x, opts.rank_tol);
    bool clean = true;
    for (std::size_t t = 0; t < support.size(); ++t) {
      if (z[t] <= opts.support_tol) {
        in_support[support[t]] = 0;
        clean = false;
      }
    }
    if (clean) {
      for (std::size_t t = 0; t < support.size(); ++t) s[support[t]] = z[t];
      break;
    }
    support = set_from_mask(in_support);
  }

  ColumnSolution out;
  out.coefficients = std::move(s);
  out.support = std::move(support);
  out.kkt_residual =
      kkt_check(a, x, out.coefficients, opts.kkt_tol).residual;
  return out;
}

NnlsSolution nnls_matrix(const DenseMatrix& a, const DenseMatrix& x,
                         const NnlsOptions& opts) {
  if (a.rows() != x.rows()) {
    throw ShapeMismatch("nnls_matrix: A has " + std::to_string(a.rows()) +
                        " rows, X has " + std::to_string(x.rows()));
  }
  const std::size_t m = x.cols();
  NnlsSolution out;
  out.coefficients = DenseMatrix(a.cols(), m);
  out.supports.resize(m);
  out.kkt_residuals.resize(m);
  parallel_for(m, [&](std::size_t j) {
    ColumnSolution col = nnls_column(a, x.col(j), opts);
    for (std::size_t i = 0; i < a.cols(); ++i)
      out.coefficients(i, j) = col.coefficients[i];
    out.supports[j] = std::move(col.support);
    out.kkt_residuals[j] = col.kkt_residual;
  });
  return out;
}

KktReport kkt_check(const DenseMatrix& a, const Vector& x, const Vector& s,
                    double tol) {
  if (x.size() != a.rows() || s.size() != a.cols()) {
    throw ShapeMismatch("kkt_check: dimension mismatch");
  }
  Vector g = a * s;
  for (std::size_t i = 0; i < g.size(); ++i) g[i] -= x[i];
  g = transpose_times(a, g);  // gradient direction A^T (A s - x)

  double worst = 0.0;
  for (std::size_t j = 0; j < s.size(); ++j) {
    worst = std::max(worst, -s[j]);           // primal feasibility
    worst = std::max(worst, -g[j]);           // dual feasibility
    worst = std::max(worst, std::abs(s[j] * g[j]));  // complementarity
  }
  return KktReport{worst <= tol, worst};
}

}  // namespace nnmf
