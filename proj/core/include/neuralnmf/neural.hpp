#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "neuralnmf/baselines.hpp"
#include "neuralnmf/factor_stack.hpp"
#include "neuralnmf/matrix.hpp"
#include "neuralnmf/nnls.hpp"

namespace nnmf {

enum class LossKind {
  kReconstructionFinal,       // ||X - A^(0)...A^(L) S^(L)||^2
  kReconstructionAllLayers,   // sum_l ||S^(l-1) - A^(l) S^(l)||^2
  kReconstructionClassification,  // final + lambda ||Z.*(Y - B S^(L))||^2
};

struct LossSpec {
  LossKind kind = LossKind::kReconstructionFinal;
  double lambda = 1.0;
  std::optional<SupervisionData> supervision;  // required for classification
};

struct GradientStack {
  std::vector<DenseMatrix> dA;  // same shapes as the A matrices
};

/// Loss value plus the two ingredient families of the layered chain rule:
/// dS_star[l] is the partial of the loss with respect to S^(l) holding the
/// later S matrices fixed (an empty matrix means identically zero), and
/// dA_direct[l] is the partial with respect to A^(l) holding every S fixed.
struct LossEval {
  double value = 0.0;
  std::vector<DenseMatrix> dS_star;
  std::vector<DenseMatrix> dA_direct;
};

struct TrainConfig {
  double gamma = 1e-3;              // projected gradient step size
  std::size_t max_outer_iters = 500;
  double conv_tol = 1e-6;           // relative loss change over the window
  std::size_t conv_window = 5;
  std::size_t warm_start_iters = 1000;  // MU iterations for the default init
  std::uint64_t seed = 0;
  NnlsOptions nnls;
  double divergence_factor = 10.0;
  std::size_t divergence_patience = 10;
};

struct TrainHistory {
  std::vector<double> loss;  // one entry per evaluated iterate
  std::size_t best_iteration = 0;
  double best_loss = 0.0;
};

struct TrainResult {
  FactorStack stack;  // forward pass of the best-loss iterate
  TrainHistory history;
  std::optional<DenseMatrix> B;  // classification matrix of the best iterate
};

/// Forward propagation: S^(0) = q(A^(0), X), S^(l) = q(A^(l), S^(l-1)),
/// with q the columnwise NNLS map. Records every support set. A
/// RankDeficient error carries the offending layer index.
FactorStack forward(std::vector<DenseMatrix> a_list, const DenseMatrix& x,
                    const NnlsOptions& opts = {});

/// Jacobian of the NNLS map q(A, x) with respect to x at a support-stable
/// point: rows in T hold the restricted pseudoinverse, other rows are zero.
DenseMatrix dq_dx(const DenseMatrix& a, const IndexSet& support,
                  double rank_tol = kDefaultRankTol);

/// Jacobian of q(A, x) with respect to row i of A at a support-stable
/// point. Nonzero only on the (T, T) block.
DenseMatrix dq_dA_row(const DenseMatrix& a, const Vector& x,
                      const IndexSet& support, std::size_t i,
                      double rank_tol = kDefaultRankTol);

/// Chained restricted pseudoinverses along layers l1..l2 for column m: the
/// nonzero rows of the Jacobian of S^(l2)_{:,m} with respect to
/// S^(l1-1)_{:,m}. An empty support at layer l2 yields a 0-row matrix,
/// which downstream contributions treat as zero.
DenseMatrix phi(const FactorStack& stack, std::size_t l1, std::size_t l2,
                std::size_t m, double rank_tol = kDefaultRankTol);

/// Classification matrix B = (Z .* Y) pinv(S_last). May contain negative
/// entries; apply relu for the clamped variant.
DenseMatrix compute_B(const SupervisionData& supervision,
                      const DenseMatrix& s_last,
                      double rank_tol = kDefaultRankTol);

/// Loss value and partials for the given spec. When fixed_b is provided it
/// replaces the classification matrix; otherwise B is computed from the
/// stack. B is treated as a constant in the partials either way.
LossEval loss_eval(const FactorStack& stack, const LossSpec& spec,
                   const DenseMatrix* fixed_b = nullptr);

/// Backpropagation assembly: the direct A partials plus the per-column,
/// per-layer-pair chain contributions built from the supports recorded
/// during the forward pass. Accumulation order is fixed (column, then
/// source layer) for reproducibility.
GradientStack grad_from_partials(const FactorStack& stack, const LossEval& ev,
                                 double rank_tol = kDefaultRankTol);

/// Full gradient of the loss with respect to every A matrix. Verifies that
/// the stack is NNLS-consistent at kkt_tol first (InconsistentStack).
GradientStack grad_A(const FactorStack& stack, const LossSpec& spec,
                     const DenseMatrix* fixed_b = nullptr,
                     double kkt_tol = 1e-10);

/// Throws InconsistentStack unless every S column passes the NNLS
/// optimality certificate against its layer input at tol.
void check_consistency(const FactorStack& stack, double tol);

/// Projected gradient descent over the A matrices: forward pass, analytic
/// gradient, A <- relu(A - gamma dA). Starts from `init` when given,
/// otherwise from a hierarchical multiplicative-update warm start. Returns
/// the best-loss iterate.
TrainResult train(const DenseMatrix& x, const LayerSpec& layers,
                  const TrainConfig& config, const LossSpec& loss,
                  const std::vector<DenseMatrix>* init = nullptr);

}  // namespace nnmf
