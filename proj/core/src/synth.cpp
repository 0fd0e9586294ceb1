#include "neuralnmf/synth.hpp"

#include <cmath>
#include <string>

#include "neuralnmf/rng.hpp"

namespace nnmf {

namespace {

BlockSpec make_block_spec() {
  BlockSpec spec;
  // Coarse split 45+45 rows / 44+43 columns.
  spec.coarse = {
      {0, 45, 0, 44, 1.0},
      {45, 90, 44, 87, 1.0},
  };
  // Two mid blocks per coarse block.
  spec.mid = {
      {0, 23, 0, 22, 1.0},
      {23, 45, 22, 44, 1.0},
      {45, 68, 44, 66, 1.0},
      {68, 90, 66, 87, 1.0},
  };
  // Nine fine blocks of unequal width along the diagonal (3+2+2+2 across
  // the four mid blocks).
  spec.fine = {
      {0, 8, 0, 9, 2.0},    {8, 16, 9, 16, 2.0},  {16, 23, 16, 22, 2.0},
      {23, 34, 22, 34, 2.0}, {34, 45, 34, 44, 2.0},
      {45, 56, 44, 56, 2.0}, {56, 68, 56, 66, 2.0},
      {68, 77, 66, 77, 2.0}, {77, 90, 77, 87, 2.0},
  };
  return spec;
}

void paint(DenseMatrix& x, const BlockSpec::Block& b) {
  for (std::size_t i = b.row_begin; i < b.row_end; ++i) {
    for (std::size_t j = b.col_begin; j < b.col_end; ++j) {
      x(i, j) += b.intensity;
    }
  }
}

}  // namespace

SyntheticDataset synth_hier(std::uint64_t seed, bool with_noise) {
  SyntheticDataset ds;
  ds.block_spec = make_block_spec();
  ds.X = DenseMatrix(kSyntheticRows, kSyntheticCols);
  for (const auto& b : ds.block_spec.coarse) paint(ds.X, b);
  for (const auto& b : ds.block_spec.mid) paint(ds.X, b);
  for (const auto& b : ds.block_spec.fine) paint(ds.X, b);

  ds.labels.assign(kSyntheticCols, -1);
  for (std::size_t f = 0; f < ds.block_spec.fine.size(); ++f) {
    const auto& b = ds.block_spec.fine[f];
    for (std::size_t j = b.col_begin; j < b.col_end; ++j) {
      ds.labels[j] = static_cast<int>(f);
    }
  }

  if (with_noise) {
    Rng rng(seed);
    for (double& v : ds.X.data()) v += rng.uniform();
  }
  return ds;
}

SupervisionData make_labels(const std::vector<int>& labels,
                            double known_fraction, std::uint64_t seed,
                            std::size_t num_classes) {
  if (!(known_fraction >= 0.0 && known_fraction <= 1.0)) {
    throw InvalidFraction("make_labels: fraction " +
                          std::to_string(known_fraction) +
                          " outside [0, 1]");
  }
  const std::size_t m = labels.size();
  SupervisionData sup;
  sup.Y = DenseMatrix(num_classes, m);
  sup.Z = DenseMatrix(num_classes, m);
  for (std::size_t j = 0; j < m; ++j) {
    const int label = labels[j];
    if (label < 0 || static_cast<std::size_t>(label) >= num_classes) {
      throw IndexOutOfRange("make_labels: label " + std::to_string(label) +
                            " outside [0, " + std::to_string(num_classes) +
                            ")");
    }
    sup.Y(static_cast<std::size_t>(label), j) = 1.0;
  }

  const std::size_t known =
      static_cast<std::size_t>(std::floor(known_fraction * m));
  Rng rng(seed);
  for (std::size_t j : rng.sample_without_replacement(m, known)) {
    for (std::size_t p = 0; p < num_classes; ++p) sup.Z(p, j) = 1.0;
  }
  return sup;
}

}  // namespace nnmf
