#pragma once

#include <algorithm>
#include <cstddef>
#include <thread>
#include <vector>

namespace occam {

// Execution knobs. None of them may change a numeric result.
struct ExecPolicy {
  unsigned threads = 0;                        // 0 = hardware concurrency
  std::size_t block_size = 64;                 // rows per tile
  std::size_t memory_cap = std::size_t{8} << 30;  // bytes, for N x N buffers

  unsigned resolved_threads() const noexcept {
    if (threads != 0) return threads;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
  }
  std::size_t resolved_block(std::size_t n) const noexcept {
    return std::max<std::size_t>(1, std::min(block_size == 0 ? n : block_size, n));
  }
};

// Runs body(task) for task in [0, n_tasks) on up to `threads` workers.
// Tasks are handed out round-robin; callers must make tasks independent.
template <typename Body>
void parallel_for(std::size_t n_tasks, unsigned threads, Body&& body) {
  const std::size_t workers = std::min<std::size_t>(threads == 0 ? 1 : threads, n_tasks);
  if (workers <= 1) {
    for (std::size_t t = 0; t < n_tasks; ++t) body(t);
    return;
  }
  std::vector<std::jthread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (std::size_t t = w; t < n_tasks; t += workers) body(t);
    });
  }
}

// Pairwise (tree) summation with a shape that depends only on values.size().
double tree_sum(const double* values, std::size_t n) noexcept;

}  // namespace occam
