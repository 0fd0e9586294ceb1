#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "neuralnmf/factor_stack.hpp"
#include "neuralnmf/matrix.hpp"

namespace nnmf {

/// Label data for the semisupervised objective
///   ||W .* (X - AS)||^2 + lambda ||Z .* (Y - BS)||^2.
/// Z columns are all ones (label known) or all zeros. W is the data
/// indicator; an empty W means everything is known (all ones).
struct SupervisionData {
  DenseMatrix Y;  // P x M, nonnegative (one-hot for classification)
  DenseMatrix Z;  // P x M binary mask
  DenseMatrix W;  // N x M binary mask; empty = all ones
  double lambda = 1.0;

  std::size_t num_classes() const { return Y.rows(); }

  /// Shape/content checks against a data matrix. Throws ShapeMismatch.
  void validate(std::size_t data_rows, std::size_t data_cols) const;
};

/// One factorization produced by multiplicative updates.
struct NmfResult {
  DenseMatrix A;  // N x k
  DenseMatrix S;  // k x M
  std::optional<DenseMatrix> B;  // P x k, supervised runs only
  std::vector<double> objective_trace;  // initial value plus one per iteration
};

/// Lee-Seung multiplicative updates for ||X - AS||^2. Factors are seeded
/// i.i.d. uniform(0,1) scaled by sqrt(mean(X)/k); denominators are floored
/// at 1e-12. The objective is recorded before the first update and after
/// every iteration.
NmfResult nmf_mu(const DenseMatrix& x, std::size_t k, std::size_t iters,
                 std::uint64_t seed);

/// Multiplicative updates for the masked semisupervised objective. With
/// lambda = 0 and all-ones W the A and S iterates coincide with nmf_mu's
/// for the same seed.
NmfResult ssnmf_mu(const DenseMatrix& x, const SupervisionData& supervision,
                   std::size_t k, std::size_t iters, std::uint64_t seed);

struct HnmfRun {
  FactorStack stack;              // supports left empty: S comes from MU
  std::vector<NmfResult> layers;  // per-layer traces, B on the last layer
};

/// Sequential hierarchical NMF: layer 0 factors X, layer l factors
/// S^(l-1). When supervision is given, the last layer uses ssnmf_mu (labels
/// attach to the coarsest topics). Layer l runs with seed + l.
HnmfRun hnmf(const DenseMatrix& x, const LayerSpec& layers,
             std::size_t iters_per_layer, std::uint64_t seed,
             const SupervisionData* supervision = nullptr);

}  // namespace nnmf
