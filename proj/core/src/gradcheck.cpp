#include "neuralnmf/gradcheck.hpp"

#include <cmath>
#include <utility>

#include "neuralnmf/rng.hpp"
#include "neuralnmf/threads.hpp"

namespace nnmf {

namespace {

bool same_supports(const FactorStack& a, const FactorStack& b) {
  if (a.supports.size() != b.supports.size()) return false;
  for (std::size_t ell = 0; ell < a.supports.size(); ++ell) {
    if (a.supports[ell] != b.supports[ell]) return false;
  }
  return true;
}

}  // namespace

FdResult finite_diff_grad(const DenseMatrix& x,
                          const std::vector<DenseMatrix>& a_list,
                          const StackLossFn& f, const FdOptions& opts) {
  FdResult res;
  res.grad.dA.reserve(a_list.size());
  for (const auto& a : a_list) {
    res.grad.dA.emplace_back(a.rows(), a.cols());
    res.probed.emplace_back(a.rows(), a.cols());
    res.stable.emplace_back(a.rows(), a.cols());
  }

  // Flat probe list (layer, flat entry index).
  std::vector<std::pair<std::size_t, std::size_t>> probes;
  for (std::size_t ell = 0; ell < a_list.size(); ++ell) {
    const std::size_t total = a_list[ell].size();
    if (opts.samples_per_layer == 0 || opts.samples_per_layer >= total) {
      for (std::size_t i = 0; i < total; ++i) probes.emplace_back(ell, i);
    } else {
      Rng rng(opts.seed + ell);
      for (std::size_t i :
           rng.sample_without_replacement(total, opts.samples_per_layer)) {
        probes.emplace_back(ell, i);
      }
    }
  }

  parallel_for(probes.size(), [&](std::size_t p) {
    const auto [ell, idx] = probes[p];
    std::vector<DenseMatrix> work = a_list;

    work[ell].data()[idx] = a_list[ell].data()[idx] + opts.h;
    const FactorStack plus = forward(work, x, opts.nnls);
    const double f_plus = f(plus);

    work[ell].data()[idx] = a_list[ell].data()[idx] - opts.h;
    const FactorStack minus = forward(work, x, opts.nnls);
    const double f_minus = f(minus);

    res.probed[ell].data()[idx] = 1.0;
    if (same_supports(plus, minus)) {
      res.stable[ell].data()[idx] = 1.0;
      res.grad.dA[ell].data()[idx] = (f_plus - f_minus) / (2.0 * opts.h);
    }
  });
  return res;
}

FdResult finite_diff_loss_grad(const DenseMatrix& x,
                               const std::vector<DenseMatrix>& a_list,
                               const LossSpec& spec, const FdOptions& opts) {
  std::optional<DenseMatrix> frozen_b;
  if (spec.kind == LossKind::kReconstructionClassification) {
    if (!spec.supervision) {
      throw ShapeMismatch("finite_diff_loss_grad: missing supervision");
    }
    const FactorStack base = forward(a_list, x, opts.nnls);
    frozen_b = compute_B(*spec.supervision, base.S.back(), opts.nnls.rank_tol);
  }
  const DenseMatrix* b_ptr = frozen_b ? &*frozen_b : nullptr;
  return finite_diff_grad(
      x, a_list,
      [&spec, b_ptr](const FactorStack& st) {
        return loss_eval(st, spec, b_ptr).value;
      },
      opts);
}

GradReport compare(const GradientStack& analytic, const FdResult& fd,
                   double rtol) {
  GradReport report;
  report.rtol = rtol;
  report.layers.resize(fd.grad.dA.size());
  for (std::size_t ell = 0; ell < fd.grad.dA.size(); ++ell) {
    auto& layer = report.layers[ell];
    const DenseMatrix& numeric = fd.grad.dA[ell];
    const DenseMatrix& a = analytic.dA[ell];
    for (std::size_t i = 0; i < numeric.rows(); ++i) {
      for (std::size_t j = 0; j < numeric.cols(); ++j) {
        if (fd.probed[ell](i, j) == 0.0) continue;
        if (fd.stable[ell](i, j) == 0.0) {
          ++layer.skipped;
          continue;
        }
        ++layer.compared;
        const double n = numeric(i, j);
        const double abs_err = std::abs(a(i, j) - n);
        const double rel_err = abs_err / (1.0 + std::abs(n));
        layer.max_abs_err = std::max(layer.max_abs_err, abs_err);
        if (rel_err > layer.max_rel_err) {
          layer.max_rel_err = rel_err;
          layer.worst_row = i;
          layer.worst_col = j;
        }
      }
    }
    report.compared += layer.compared;
    report.skipped += layer.skipped;
    report.max_abs_err = std::max(report.max_abs_err, layer.max_abs_err);
    if (layer.max_rel_err > report.max_rel_err) {
      report.max_rel_err = layer.max_rel_err;
      report.worst_layer = ell;
      report.worst_row = layer.worst_row;
      report.worst_col = layer.worst_col;
    }
  }
  report.passes = report.max_rel_err <= rtol;
  return report;
}

GradReport check(const DenseMatrix& x, const std::vector<DenseMatrix>& a_list,
                 const LossSpec& spec, double h, double rtol,
                 const FdOptions& base) {
  FdOptions opts = base;
  opts.h = h;
  const FactorStack stack = forward(a_list, x, opts.nnls);
  const GradientStack analytic =
      grad_A(stack, spec, nullptr, opts.nnls.kkt_tol);
  const FdResult fd = finite_diff_loss_grad(x, a_list, spec, opts);
  return compare(analytic, fd, rtol);
}

}  // namespace nnmf
