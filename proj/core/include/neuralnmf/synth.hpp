#pragma once

#include <cstdint>
#include <vector>

#include "neuralnmf/baselines.hpp"
#include "neuralnmf/matrix.hpp"

namespace nnmf {

/// Nested diagonal block layout of the synthetic hierarchical dataset: two
/// coarse blocks split into four mid blocks split into nine fine blocks,
/// each level adding intensity on its diagonal block.
struct BlockSpec {
  struct Block {
    std::size_t row_begin, row_end;  // half-open
    std::size_t col_begin, col_end;
    double intensity;
  };
  std::vector<Block> coarse;  // 2 blocks, +1.0
  std::vector<Block> mid;     // 4 blocks, +1.0
  std::vector<Block> fine;    // 9 blocks, +2.0
};

/// 90 x 87 hierarchical matrix: piecewise-constant nested blocks plus
/// i.i.d. uniform(0,1) noise on every entry. Labels are the fine-block
/// membership of each column, fixed before the noise draw.
struct SyntheticDataset {
  DenseMatrix X;            // 90 x 87, nonnegative
  std::vector<int> labels;  // one of 9 classes per column
  BlockSpec block_spec;
};

inline constexpr std::size_t kSyntheticRows = 90;
inline constexpr std::size_t kSyntheticCols = 87;
inline constexpr std::size_t kSyntheticClasses = 9;

/// Deterministic in seed. with_noise = false gives the exact block matrix
/// (9 distinct column patterns, exact nonnegative rank-9 factorization).
SyntheticDataset synth_hier(std::uint64_t seed, bool with_noise = true);

/// One-hot labels with a seeded uniform sample of floor(known_fraction * M)
/// known columns. Y covers every column; Z marks the known ones; W is left
/// empty (all data observed).
SupervisionData make_labels(const std::vector<int>& labels,
                            double known_fraction, std::uint64_t seed,
                            std::size_t num_classes);

}  // namespace nnmf
