#pragma once

#include <cstddef>
#include <vector>

#include "neuralnmf/matrix.hpp"

namespace nnmf {

/// Rank sequence k^(0) > k^(1) > ... > k^(L) for a layered factorization.
struct LayerSpec {
  std::vector<std::size_t> ranks;

  std::size_t depth() const { return ranks.size(); }

  /// Ranks must be positive, strictly decreasing, and start below the data
  /// row count. Throws InvalidRank otherwise.
  void validate(std::size_t data_rows) const;
};

/// Layered factorization state: the A matrices (independent variables), the
/// S matrices derived from them, and per-column supports when the S
/// matrices came from NNLS solves. Baseline multiplicative-update runs fill
/// A and S but leave supports empty.
///
/// Shapes: A[l] is k^(l-1) x k^(l) with k^(-1) the row count of X;
/// S[l] is k^(l) x M.
struct FactorStack {
  DenseMatrix X;
  std::vector<DenseMatrix> A;
  std::vector<DenseMatrix> S;
  std::vector<std::vector<IndexSet>> supports;

  /// Number of layers (count of A matrices).
  std::size_t depth() const { return A.size(); }

  /// Input matrix of layer `ell`: X for layer 0, otherwise S[ell-1].
  const DenseMatrix& input(std::size_t ell) const {
    return ell == 0 ? X : S[ell - 1];
  }

  bool has_supports() const { return !supports.empty(); }
};

}  // namespace nnmf
