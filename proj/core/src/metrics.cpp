#include "neuralnmf/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace nnmf {

double recon_error_at_layer(const DenseMatrix& x, const FactorStack& stack,
                            std::size_t ell) {
  if (ell >= stack.depth()) {
    throw IndexOutOfRange("recon_error_at_layer: layer " +
                          std::to_string(ell) + " out of range");
  }
  DenseMatrix product = stack.A[0];
  for (std::size_t i = 1; i <= ell; ++i) product = product * stack.A[i];
  if (product.rows() != x.rows() || stack.S[ell].cols() != x.cols()) {
    throw ShapeMismatch("recon_error: stack does not chain to X");
  }
  const double denom = frobenius(x);
  if (denom == 0.0) return 0.0;
  return frobenius(x - product * stack.S[ell]) / denom;
}

double recon_error(const DenseMatrix& x, const FactorStack& stack) {
  if (stack.depth() == 0) throw ShapeMismatch("recon_error: empty stack");
  return recon_error_at_layer(x, stack, stack.depth() - 1);
}

double class_accuracy(const DenseMatrix& b, const DenseMatrix& s_last,
                      const std::vector<int>& labels,
                      const std::optional<IndexSet>& eval_cols) {
  if (b.cols() != s_last.rows()) {
    throw ShapeMismatch("class_accuracy: B columns do not match S rows");
  }
  if (labels.size() != s_last.cols()) {
    throw ShapeMismatch("class_accuracy: label count does not match columns");
  }
  if (eval_cols && eval_cols->universe() != s_last.cols()) {
    throw ShapeMismatch("class_accuracy: eval mask universe mismatch");
  }

  const DenseMatrix scores = b * s_last;  // P x M
  std::size_t scored = 0;
  std::size_t correct = 0;
  auto score_column = [&](std::size_t m) {
    std::size_t arg = 0;
    double best = scores(0, m);
    for (std::size_t p = 1; p < scores.rows(); ++p) {
      if (scores(p, m) > best) {  // strict: ties keep the lowest index
        best = scores(p, m);
        arg = p;
      }
    }
    ++scored;
    if (static_cast<int>(arg) == labels[m]) ++correct;
  };
  if (eval_cols) {
    for (std::size_t m : *eval_cols) score_column(m);
  } else {
    for (std::size_t m = 0; m < scores.cols(); ++m) score_column(m);
  }
  return scored == 0 ? 0.0 : static_cast<double>(correct) / scored;
}

std::vector<std::vector<std::size_t>> top_rows(const DenseMatrix& a,
                                               std::size_t count) {
  std::vector<std::vector<std::size_t>> out(a.cols());
  for (std::size_t j = 0; j < a.cols(); ++j) {
    std::vector<std::size_t> order(a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t lhs, std::size_t rhs) {
                       return std::abs(a(lhs, j)) > std::abs(a(rhs, j));
                     });
    order.resize(std::min(count, order.size()));
    out[j] = std::move(order);
  }
  return out;
}

}  // namespace nnmf
