#include "neuralnmf/baselines.hpp"

#include <cmath>
#include <string>

#include "neuralnmf/rng.hpp"

namespace nnmf {

namespace {

constexpr double kDenomFloor = 1e-12;

DenseMatrix random_factor(std::size_t rows, std::size_t cols, double scale,
                          Rng& rng) {
  DenseMatrix m(rows, cols);
  for (double& v : m.data()) v = rng.uniform() * scale;
  return m;
}

/// Elementwise a *= num / max(den, floor).
void mu_step(DenseMatrix& a, const DenseMatrix& num, const DenseMatrix& den) {
  for (std::size_t i = 0; i < a.data().size(); ++i) {
    a.data()[i] *= num.data()[i] / std::max(den.data()[i], kDenomFloor);
  }
}

double sq_frobenius(const DenseMatrix& m) {
  double acc = 0.0;
  for (double v : m.data()) acc += v * v;
  return acc;
}

void check_rank(std::size_t k, std::size_t n, std::size_t m) {
  if (k == 0 || k >= n || k >= m) {
    throw InvalidRank("rank " + std::to_string(k) +
                      " must satisfy 0 < k < min(" + std::to_string(n) + ", " +
                      std::to_string(m) + ")");
  }
}

}  // namespace

void LayerSpec::validate(std::size_t data_rows) const {
  if (ranks.empty()) throw InvalidRank("LayerSpec: empty rank list");
  if (ranks.front() >= data_rows) {
    throw InvalidRank("LayerSpec: first rank " + std::to_string(ranks.front()) +
                      " must be below the data row count " +
                      std::to_string(data_rows));
  }
  for (std::size_t i = 0; i < ranks.size(); ++i) {
    if (ranks[i] == 0) throw InvalidRank("LayerSpec: zero rank");
    if (i > 0 && ranks[i] >= ranks[i - 1]) {
      throw InvalidRank("LayerSpec: ranks must be strictly decreasing");
    }
  }
}

void SupervisionData::validate(std::size_t data_rows,
                               std::size_t data_cols) const {
  if (Y.rows() != Z.rows() || Y.cols() != Z.cols()) {
    throw ShapeMismatch("SupervisionData: Y and Z shapes differ");
  }
  if (Y.cols() != data_cols) {
    throw ShapeMismatch("SupervisionData: Y has " + std::to_string(Y.cols()) +
                        " columns, data has " + std::to_string(data_cols));
  }
  if (!W.empty() && (W.rows() != data_rows || W.cols() != data_cols)) {
    throw ShapeMismatch("SupervisionData: W shape does not match data");
  }
  if (!Y.nonnegative()) throw NegativeEntry("SupervisionData: Y has negatives");
  for (std::size_t m = 0; m < Z.cols(); ++m) {
    const double head = Z(0, m);
    if (head != 0.0 && head != 1.0) {
      throw ShapeMismatch("SupervisionData: Z entries must be 0 or 1");
    }
    for (std::size_t p = 1; p < Z.rows(); ++p) {
      if (Z(p, m) != head) {
        throw ShapeMismatch(
            "SupervisionData: Z columns must be all-ones or all-zeros");
      }
    }
  }
  if (lambda < 0.0) throw InvalidFraction("SupervisionData: lambda < 0");
}

NmfResult nmf_mu(const DenseMatrix& x, std::size_t k, std::size_t iters,
                 std::uint64_t seed) {
  check_rank(k, x.rows(), x.cols());
  if (!x.nonnegative()) throw NegativeEntry("nmf_mu: X has negative entries");

  Rng rng(seed);
  const double scale = std::sqrt(std::max(x.mean(), 0.0) / k);
  NmfResult res;
  res.A = random_factor(x.rows(), k, scale, rng);
  res.S = random_factor(k, x.cols(), scale, rng);

  res.objective_trace.reserve(iters + 1);
  res.objective_trace.push_back(sq_frobenius(x - res.A * res.S));
  for (std::size_t it = 0; it < iters; ++it) {
    const DenseMatrix at = res.A.transposed();
    mu_step(res.S, at * x, (at * res.A) * res.S);
    const DenseMatrix st = res.S.transposed();
    mu_step(res.A, x * st, res.A * (res.S * st));
    res.objective_trace.push_back(sq_frobenius(x - res.A * res.S));
  }
  return res;
}

NmfResult ssnmf_mu(const DenseMatrix& x, const SupervisionData& sup,
                   std::size_t k, std::size_t iters, std::uint64_t seed) {
  check_rank(k, x.rows(), x.cols());
  if (!x.nonnegative()) throw NegativeEntry("ssnmf_mu: X has negative entries");
  sup.validate(x.rows(), x.cols());

  const bool masked_data = !sup.W.empty();
  const DenseMatrix wx = masked_data ? hadamard(sup.W, x) : x;
  const DenseMatrix zy = hadamard(sup.Z, sup.Y);

  Rng rng(seed);
  const double scale = std::sqrt(std::max(x.mean(), 0.0) / k);
  const double b_scale = std::sqrt(std::max(zy.mean(), 0.0) / k);
  NmfResult res;
  res.A = random_factor(x.rows(), k, scale, rng);
  res.S = random_factor(k, x.cols(), scale, rng);
  DenseMatrix b = random_factor(sup.Y.rows(), k, b_scale, rng);

  auto objective = [&](void) {
    const DenseMatrix data_res =
        masked_data ? hadamard(sup.W, x - res.A * res.S) : x - res.A * res.S;
    const DenseMatrix label_res = hadamard(sup.Z, sup.Y - b * res.S);
    return sq_frobenius(data_res) + sup.lambda * sq_frobenius(label_res);
  };

  res.objective_trace.reserve(iters + 1);
  res.objective_trace.push_back(objective());
  for (std::size_t it = 0; it < iters; ++it) {
    // S update uses both the data and label terms. The unmasked path keeps
    // the same product association as nmf_mu so the lambda = 0 iterates are
    // bit-identical to it.
    {
      const DenseMatrix at = res.A.transposed();
      DenseMatrix num = at * wx;
      DenseMatrix den = masked_data
                            ? at * hadamard(sup.W, res.A * res.S)
                            : (at * res.A) * res.S;
      if (sup.lambda > 0.0) {
        const DenseMatrix bt = b.transposed();
        num += sup.lambda * (bt * zy);
        den += sup.lambda * (bt * hadamard(sup.Z, b * res.S));
      }
      mu_step(res.S, num, den);
    }
    {
      const DenseMatrix st = res.S.transposed();
      const DenseMatrix den = masked_data
                                  ? hadamard(sup.W, res.A * res.S) * st
                                  : res.A * (res.S * st);
      mu_step(res.A, wx * st, den);
      mu_step(b, zy * st, hadamard(sup.Z, b * res.S) * st);
    }
    res.objective_trace.push_back(objective());
  }
  res.B = std::move(b);
  return res;
}

HnmfRun hnmf(const DenseMatrix& x, const LayerSpec& layers,
             std::size_t iters_per_layer, std::uint64_t seed,
             const SupervisionData* supervision) {
  layers.validate(x.rows());
  HnmfRun run;
  run.stack.X = x;
  const DenseMatrix* current = &x;
  for (std::size_t ell = 0; ell < layers.depth(); ++ell) {
    const bool last = ell + 1 == layers.depth();
    NmfResult res =
        (last && supervision != nullptr)
            ? ssnmf_mu(*current, *supervision, layers.ranks[ell],
                       iters_per_layer, seed + ell)
            : nmf_mu(*current, layers.ranks[ell], iters_per_layer, seed + ell);
    run.stack.A.push_back(res.A);
    run.stack.S.push_back(res.S);
    run.layers.push_back(std::move(res));
    current = &run.stack.S.back();
  }
  return run;
}

}  // namespace nnmf
