#pragma once

#include <optional>
#include <vector>

#include "neuralnmf/factor_stack.hpp"
#include "neuralnmf/matrix.hpp"

namespace nnmf {

/// Relative reconstruction error through the full hierarchy:
/// ||X - A^(0)...A^(L) S^(L)|| / ||X||.
double recon_error(const DenseMatrix& x, const FactorStack& stack);

/// Same, truncated at layer `ell`: ||X - A^(0)...A^(ell) S^(ell)|| / ||X||.
double recon_error_at_layer(const DenseMatrix& x, const FactorStack& stack,
                            std::size_t ell);

/// Fraction of scored columns whose argmax of B S equals the true label.
/// Ties break toward the lowest class index. eval_cols restricts scoring;
/// empty scores every column.
double class_accuracy(const DenseMatrix& b, const DenseMatrix& s_last,
                      const std::vector<int>& labels,
                      const std::optional<IndexSet>& eval_cols = std::nullopt);

/// Row indices of the `count` largest-magnitude entries of each column,
/// sorted by decreasing magnitude. Keyword extraction for topic tables.
std::vector<std::vector<std::size_t>> top_rows(const DenseMatrix& a,
                                               std::size_t count = 10);

}  // namespace nnmf
