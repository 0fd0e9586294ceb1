#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "neuralnmf/neural.hpp"

namespace nnmf {

struct FdOptions {
  double h = 1e-6;
  /// 0 probes every entry; otherwise this many seeded distinct entries per
  /// layer.
  std::size_t samples_per_layer = 0;
  std::uint64_t seed = 0;
  NnlsOptions nnls;
};

/// Central-difference gradient with per-entry bookkeeping. `probed` and
/// `stable` are 0/1 masks with the same shapes as the A matrices; a probe
/// is support-stable when the +h and -h forward passes report identical
/// supports at every layer and column.
struct FdResult {
  GradientStack grad;
  std::vector<DenseMatrix> probed;
  std::vector<DenseMatrix> stable;
};

struct GradReport {
  struct LayerReport {
    double max_abs_err = 0.0;
    double max_rel_err = 0.0;
    std::size_t compared = 0;
    std::size_t skipped = 0;
    std::size_t worst_row = 0;
    std::size_t worst_col = 0;
  };
  std::vector<LayerReport> layers;
  double max_abs_err = 0.0;
  double max_rel_err = 0.0;  // |analytic - numeric| / (1 + |numeric|)
  std::size_t compared = 0;
  std::size_t skipped = 0;
  std::size_t worst_layer = 0;
  std::size_t worst_row = 0;
  std::size_t worst_col = 0;
  double rtol = 0.0;
  bool passes = false;
};

using StackLossFn = std::function<double(const FactorStack&)>;

/// Generic central-difference engine for any scalar function of the
/// forward-propagated stack. Re-runs the forward pass at every probe.
FdResult finite_diff_grad(const DenseMatrix& x,
                          const std::vector<DenseMatrix>& a_list,
                          const StackLossFn& f, const FdOptions& opts);

/// Central differences of the configured loss. For the classification loss
/// the B matrix is computed once at the base point and held fixed across
/// probes, matching the analytic gradient's stopped-B convention.
FdResult finite_diff_loss_grad(const DenseMatrix& x,
                               const std::vector<DenseMatrix>& a_list,
                               const LossSpec& spec, const FdOptions& opts);

/// Entrywise comparison on the probed, support-stable entries.
GradReport compare(const GradientStack& analytic, const FdResult& fd,
                   double rtol);

/// End-to-end certification: analytic gradient vs central differences.
/// passes iff the max relative error over stable probes is at most rtol.
GradReport check(const DenseMatrix& x, const std::vector<DenseMatrix>& a_list,
                 const LossSpec& spec, double h, double rtol,
                 const FdOptions& base = {});

}  // namespace nnmf
