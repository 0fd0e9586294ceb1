#pragma once

#include <vector>

#include "neuralnmf/matrix.hpp"

namespace nnmf {

struct NnlsOptions {
  /// Dual feasibility / complementary slackness tolerance.
  double kkt_tol = 1e-10;
  /// Coefficients at or below this are snapped to exactly zero, so supports
  /// are unambiguous discrete objects.
  double support_tol = 1e-10;
  double rank_tol = kDefaultRankTol;
};

/// One nonnegative least squares column solve: the minimizer of
/// ||x - A s|| over s >= 0, its support T (indices with s strictly above
/// support_tol), and the KKT residual certifying optimality.
struct ColumnSolution {
  Vector coefficients;
  IndexSet support;
  double kkt_residual = 0.0;
};

/// Columnwise NNLS solution for a whole matrix.
struct NnlsSolution {
  DenseMatrix coefficients;        // k x M, exactly zero off each support
  std::vector<IndexSet> supports;  // one per column
  std::vector<double> kkt_residuals;
};

struct KktReport {
  bool passes = false;
  double residual = 0.0;
};

/// Lawson-Hanson active-set NNLS for a single right-hand side. Terminates
/// with an exact support set; on the support the coefficients equal the
/// restricted pseudoinverse applied to x. Ties at the entering-index step
/// break toward the lowest index. x = 0 returns s = 0 with empty support.
///
/// Throws RankDeficient if a visited column subset of A loses full column
/// rank, NonConvergence if more than 3 * cols indices are brought in.
ColumnSolution nnls_column(const DenseMatrix& a, const Vector& x,
                           const NnlsOptions& opts = {});

/// Columnwise application of nnls_column; columns are independent and may
/// be solved in parallel with identical results.
NnlsSolution nnls_matrix(const DenseMatrix& a, const DenseMatrix& x,
                         const NnlsOptions& opts = {});

/// Optimality certificate. residual is the largest violation among
/// s >= 0, A^T(As - x) >= 0, and |s .* A^T(As - x)| = 0.
KktReport kkt_check(const DenseMatrix& a, const Vector& x, const Vector& s,
                    double tol);

}  // namespace nnmf
