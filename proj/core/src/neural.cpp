#include "neuralnmf/neural.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <tuple>

#include "neuralnmf/rng.hpp"
#include "neuralnmf/threads.hpp"

namespace nnmf {

namespace {

void validate_chain(const std::vector<DenseMatrix>& a_list,
                    const DenseMatrix& x) {
  if (a_list.empty()) throw ShapeMismatch("forward: empty layer list");
  std::size_t prev = x.rows();
  for (std::size_t ell = 0; ell < a_list.size(); ++ell) {
    if (a_list[ell].rows() != prev) {
      throw ShapeMismatch("forward: layer " + std::to_string(ell) + " has " +
                          std::to_string(a_list[ell].rows()) +
                          " rows, expected " + std::to_string(prev));
    }
    if (a_list[ell].cols() == 0) {
      throw ShapeMismatch("forward: layer " + std::to_string(ell) +
                          " has no columns");
    }
    prev = a_list[ell].cols();
  }
}

DenseMatrix zero_like(const DenseMatrix& m) {
  return DenseMatrix(m.rows(), m.cols());
}

}  // namespace

FactorStack forward(std::vector<DenseMatrix> a_list, const DenseMatrix& x,
                    const NnlsOptions& opts) {
  validate_chain(a_list, x);
  if (!x.nonnegative()) throw NegativeEntry("forward: X has negative entries");

  FactorStack st;
  st.X = x;
  const DenseMatrix* current = &st.X;
  for (std::size_t ell = 0; ell < a_list.size(); ++ell) {
    NnlsSolution sol;
    try {
      sol = nnls_matrix(a_list[ell], *current, opts);
    } catch (const RankDeficient& e) {
      throw RankDeficient(
          "forward: layer " + std::to_string(ell) + ": " + e.what(), ell);
    }
    st.S.push_back(std::move(sol.coefficients));
    st.supports.push_back(std::move(sol.supports));
    current = &st.S.back();
  }
  st.A = std::move(a_list);
  return st;
}

DenseMatrix dq_dx(const DenseMatrix& a, const IndexSet& support,
                  double rank_tol) {
  if (support.universe() != a.cols()) {
    throw IndexOutOfRange("dq_dx: support universe does not match A columns");
  }
  DenseMatrix out(a.cols(), a.rows());
  if (support.empty()) return out;
  return scatter_rows(pinv(restrict(a, std::nullopt, support), rank_tol),
                      support, a.cols());
}

DenseMatrix dq_dA_row(const DenseMatrix& a, const Vector& x,
                      const IndexSet& support, std::size_t i,
                      double rank_tol) {
  if (support.universe() != a.cols()) {
    throw IndexOutOfRange(
        "dq_dA_row: support universe does not match A columns");
  }
  if (i >= a.rows()) throw IndexOutOfRange("dq_dA_row: row index");
  if (x.size() != a.rows()) throw ShapeMismatch("dq_dA_row: x length");

  const std::size_t k = a.cols();
  DenseMatrix out(k, k);
  if (support.empty()) return out;

  const DenseMatrix sub = restrict(a, std::nullopt, support);
  const DenseMatrix p = pinv(sub, rank_tol);  // |T| x n
  const Vector q = p * x;                     // restricted solution
  Vector proj = sub * q;                      // (I - A_T A_T^+) x
  for (std::size_t r = 0; r < proj.size(); ++r) proj[r] = x[r] - proj[r];
  const double proj_i = proj[i];
  const DenseMatrix ppt = p * p.transposed();

  for (std::size_t alpha = 0; alpha < support.size(); ++alpha) {
    for (std::size_t beta = 0; beta < support.size(); ++beta) {
      out(support[alpha], support[beta]) =
          -p(alpha, i) * q[beta] + proj_i * ppt(alpha, beta);
    }
  }
  return out;
}

DenseMatrix phi(const FactorStack& stack, std::size_t l1, std::size_t l2,
                std::size_t m, double rank_tol) {
  if (l1 > l2 || l2 >= stack.depth()) {
    throw IndexOutOfRange("phi: need 0 <= l1 <= l2 < depth");
  }
  if (!stack.has_supports()) {
    throw InconsistentStack("phi: stack has no recorded supports");
  }
  const std::size_t out_cols = stack.A[l1].rows();  // k^(l1-1)
  const IndexSet& top = stack.supports[l2][m];
  if (top.empty()) return DenseMatrix(0, out_cols);

  DenseMatrix p =
      pinv(restrict(stack.A[l2], std::nullopt, top), rank_tol);
  for (std::size_t ell = l2; ell-- > l1;) {
    const IndexSet& t = stack.supports[ell][m];
    if (t.empty()) return DenseMatrix(top.size(), out_cols);
    p = restrict(p, std::nullopt, t) *
        pinv(restrict(stack.A[ell], std::nullopt, t), rank_tol);
  }
  return p;
}

DenseMatrix compute_B(const SupervisionData& supervision,
                      const DenseMatrix& s_last, double rank_tol) {
  if (supervision.Y.cols() != s_last.cols()) {
    throw ShapeMismatch("compute_B: label columns do not match data columns");
  }
  return hadamard(supervision.Z, supervision.Y) * pinv(s_last, rank_tol);
}

LossEval loss_eval(const FactorStack& stack, const LossSpec& spec,
                   const DenseMatrix* fixed_b) {
  const std::size_t depth = stack.depth();
  if (depth == 0) throw ShapeMismatch("loss_eval: empty stack");
  LossEval ev;
  ev.dS_star.resize(depth);
  ev.dA_direct.resize(depth);

  if (spec.kind == LossKind::kReconstructionAllLayers) {
    std::vector<DenseMatrix> resid(depth);
    for (std::size_t ell = 0; ell < depth; ++ell) {
      resid[ell] = stack.input(ell) - stack.A[ell] * stack.S[ell];
      double acc = 0.0;
      for (double v : resid[ell].data()) acc += v * v;
      ev.value += acc;
    }
    for (std::size_t ell = 0; ell < depth; ++ell) {
      DenseMatrix ds = -2.0 * (stack.A[ell].transposed() * resid[ell]);
      if (ell + 1 < depth) ds += 2.0 * resid[ell + 1];
      ev.dS_star[ell] = std::move(ds);
      ev.dA_direct[ell] = -2.0 * (resid[ell] * stack.S[ell].transposed());
    }
    return ev;
  }

  // Reconstruction through the full product, optionally plus the
  // classification penalty.
  std::vector<DenseMatrix> prefix(depth);  // prefix[l] = A^(0) ... A^(l)
  prefix[0] = stack.A[0];
  for (std::size_t ell = 1; ell < depth; ++ell) {
    prefix[ell] = prefix[ell - 1] * stack.A[ell];
  }
  std::vector<DenseMatrix> tail(depth);  // tail[l] = A^(l+1) ... A^(L) S^(L)
  tail[depth - 1] = stack.S[depth - 1];
  for (std::size_t ell = depth - 1; ell-- > 0;) {
    tail[ell] = stack.A[ell + 1] * tail[ell + 1];
  }

  const DenseMatrix r = prefix[depth - 1] * stack.S[depth - 1] - stack.X;
  for (double v : r.data()) ev.value += v * v;

  ev.dS_star[depth - 1] = 2.0 * (prefix[depth - 1].transposed() * r);
  for (std::size_t ell = 0; ell < depth; ++ell) {
    if (ell == 0) {
      ev.dA_direct[0] = 2.0 * (r * tail[0].transposed());
    } else {
      ev.dA_direct[ell] =
          2.0 * (prefix[ell - 1].transposed() * (r * tail[ell].transposed()));
    }
  }

  if (spec.kind == LossKind::kReconstructionClassification) {
    if (!spec.supervision) {
      throw ShapeMismatch("loss_eval: classification loss needs supervision");
    }
    const SupervisionData& sup = *spec.supervision;
    DenseMatrix b = fixed_b != nullptr
                        ? *fixed_b
                        : compute_B(sup, stack.S[depth - 1]);
    const DenseMatrix c = hadamard(sup.Z, b * stack.S[depth - 1] - sup.Y);
    double acc = 0.0;
    for (double v : c.data()) acc += v * v;
    ev.value += spec.lambda * acc;
    ev.dS_star[depth - 1] +=
        (2.0 * spec.lambda) * (b.transposed() * c);
  }
  return ev;
}

void check_consistency(const FactorStack& stack, double tol) {
  if (!stack.has_supports()) {
    throw InconsistentStack("stack has no supports (not built by forward)");
  }
  for (std::size_t ell = 0; ell < stack.depth(); ++ell) {
    const DenseMatrix g =
        stack.A[ell].transposed() *
        (stack.A[ell] * stack.S[ell] - stack.input(ell));
    for (std::size_t m = 0; m < g.cols(); ++m) {
      double worst = 0.0;
      for (std::size_t j = 0; j < g.rows(); ++j) {
        const double s = stack.S[ell](j, m);
        worst = std::max(worst, -s);
        worst = std::max(worst, -g(j, m));
        worst = std::max(worst, std::abs(s * g(j, m)));
      }
      if (worst > tol) {
        throw InconsistentStack("layer " + std::to_string(ell) + " column " +
                                std::to_string(m) + ": KKT residual " +
                                std::to_string(worst) + " exceeds " +
                                std::to_string(tol));
      }
    }
  }
}

GradientStack grad_from_partials(const FactorStack& stack, const LossEval& ev,
                                 double rank_tol) {
  const std::size_t depth = stack.depth();
  const std::size_t cols = stack.X.cols();
  if (!stack.has_supports()) {
    throw InconsistentStack("gradient needs supports from a forward pass");
  }

  GradientStack g;
  g.dA.resize(depth);
  for (std::size_t ell = 0; ell < depth; ++ell) {
    g.dA[ell] = ev.dA_direct[ell].empty() ? zero_like(stack.A[ell])
                                          : ev.dA_direct[ell];
  }

  std::vector<DenseMatrix> resid(depth);
  for (std::size_t ell = 0; ell < depth; ++ell) {
    resid[ell] = stack.input(ell) - stack.A[ell] * stack.S[ell];
  }

  // Restricted pseudoinverses per (layer, column); columns are independent.
  std::vector<std::vector<DenseMatrix>> pim(depth,
                                            std::vector<DenseMatrix>(cols));
  parallel_for(cols, [&](std::size_t m) {
    for (std::size_t ell = 0; ell < depth; ++ell) {
      const IndexSet& t = stack.supports[ell][m];
      if (!t.empty()) {
        pim[ell][m] =
            pinv(restrict(stack.A[ell], std::nullopt, t), rank_tol);
      }
    }
  });

  // Chain contributions, accumulated in a fixed order: column, then source
  // layer l2, then descending target layer l1.
  for (std::size_t m = 0; m < cols; ++m) {
    for (std::size_t l2 = 0; l2 < depth; ++l2) {
      if (ev.dS_star[l2].empty()) continue;
      const IndexSet& t2 = stack.supports[l2][m];
      if (t2.empty()) continue;

      Vector v(t2.size());
      for (std::size_t t = 0; t < t2.size(); ++t) {
        v[t] = ev.dS_star[l2](t2[t], m);
      }
      // e = d^(l1,l2),m, maintained down the layers by the recursion
      // d^(l1-1) = pinv(A^(l1-1)_{:,T})^T d^(l1)_{T}.
      Vector e = transpose_times(pim[l2][m], v);

      for (std::size_t l1 = l2 + 1; l1-- > 0;) {
        const IndexSet& t1 = stack.supports[l1][m];
        if (t1.empty()) break;
        const Vector pe = pim[l1][m] * e;
        DenseMatrix& target = g.dA[l1];
        for (std::size_t beta = 0; beta < target.rows(); ++beta) {
          const double eb = e[beta];
          const double rb = resid[l1](beta, m);
          for (std::size_t t = 0; t < t1.size(); ++t) {
            target(beta, t1[t]) +=
                -eb * stack.S[l1](t1[t], m) + rb * pe[t];
          }
        }
        if (l1 == 0) break;
        const IndexSet& tn = stack.supports[l1 - 1][m];
        if (tn.empty()) break;
        Vector er(tn.size());
        for (std::size_t t = 0; t < tn.size(); ++t) er[t] = e[tn[t]];
        e = transpose_times(pim[l1 - 1][m], er);
      }
    }
  }
  return g;
}

GradientStack grad_A(const FactorStack& stack, const LossSpec& spec,
                     const DenseMatrix* fixed_b, double kkt_tol) {
  check_consistency(stack, kkt_tol);
  return grad_from_partials(stack, loss_eval(stack, spec, fixed_b));
}

TrainResult train(const DenseMatrix& x, const LayerSpec& layers,
                  const TrainConfig& config, const LossSpec& loss,
                  const std::vector<DenseMatrix>* init) {
  layers.validate(x.rows());
  const bool classify = loss.kind == LossKind::kReconstructionClassification;
  if (classify && !loss.supervision) {
    throw ShapeMismatch("train: classification loss needs supervision");
  }

  std::vector<DenseMatrix> a_list;
  if (init != nullptr) {
    a_list = *init;
    validate_chain(a_list, x);
  } else {
    const SupervisionData* sup =
        classify ? &*loss.supervision : nullptr;
    a_list =
        hnmf(x, layers, config.warm_start_iters, config.seed, sup).stack.A;
  }

  Rng jitter_rng(config.seed ^ 0x9e3779b97f4a7c15ull);
  auto jitter = [&](DenseMatrix& a) {
    for (double& v : a.data()) v += 1e-8 * jitter_rng.uniform();
  };

  // Forward + loss with the rank-deficiency fallback: jitter the offending
  // matrix and retry, giving up after 3 attempts.
  auto evaluate = [&](std::vector<DenseMatrix>& a) {
    for (int attempt = 0;; ++attempt) {
      try {
        FactorStack st = forward(a, x, config.nnls);
        std::optional<DenseMatrix> b;
        if (classify) {
          b = compute_B(*loss.supervision, st.S.back(), config.nnls.rank_tol);
        }
        LossEval ev = loss_eval(st, loss, b ? &*b : nullptr);
        return std::make_tuple(std::move(st), std::move(b), std::move(ev));
      } catch (const RankDeficient& e) {
        if (attempt >= 2) throw;
        if (e.layer() != RankDeficient::kNoLayer) {
          jitter(a[e.layer()]);
        } else {
          for (auto& mat : a) jitter(mat);
        }
      }
    }
  };

  TrainResult result;
  TrainHistory& hist = result.history;
  double best_loss = std::numeric_limits<double>::infinity();
  std::vector<DenseMatrix> best_a = a_list;
  std::size_t diverged_run = 0;

  for (std::size_t iter = 0;; ++iter) {
    auto [stack, b, ev] = evaluate(a_list);
    hist.loss.push_back(ev.value);
    if (ev.value < best_loss) {
      best_loss = ev.value;
      hist.best_iteration = iter;
      best_a = a_list;
    }

    if (iter >= config.conv_window) {
      const double ref = hist.loss[iter - config.conv_window];
      if (std::abs(ev.value - ref) <
          config.conv_tol * std::max(1.0, std::abs(ref))) {
        break;
      }
    }
    if (ev.value > config.divergence_factor * hist.loss.front()) {
      if (++diverged_run >= config.divergence_patience) {
        throw Divergence("train: loss " + std::to_string(ev.value) +
                         " stayed above " +
                         std::to_string(config.divergence_factor) +
                         "x the initial loss");
      }
    } else {
      diverged_run = 0;
    }
    if (iter >= config.max_outer_iters) break;

    const GradientStack grads =
        grad_from_partials(stack, ev, config.nnls.rank_tol);
    for (std::size_t ell = 0; ell < a_list.size(); ++ell) {
      a_list[ell] = relu(a_list[ell] - config.gamma * grads.dA[ell]);
    }
  }

  hist.best_loss = best_loss;
  auto [stack, b, ev] = evaluate(best_a);
  (void)ev;
  result.stack = std::move(stack);
  result.B = std::move(b);
  return result;
}

}  // namespace nnmf
