#pragma once

#include <cstddef>
#include <functional>

namespace nnmf {

/// Worker cap: hardware concurrency clamped by the NEURAL_NMF_THREADS
/// environment variable when set. Always at least 1.
std::size_t max_threads();

/// Runs body(i) for i in [0, count). Bodies must be independent; each index
/// is executed exactly once. Falls back to a serial loop when count is small
/// or only one worker is available.
void parallel_for(std::size_t count,
                  const std::function<void(std::size_t)>& body);

}  // namespace nnmf
