#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace superpose {

/// Runs body(begin, end, block) over `threads` contiguous blocks of [0, count).
/// Block boundaries depend only on (count, threads); callers that write into
/// per-block slots and merge in block order get thread-count-independent output
/// as long as per-item work is a function of the item index alone.
template <typename Body>
void parallel_blocks(std::size_t count, unsigned threads, Body&& body) {
  threads = std::max(1u, threads);
  if (threads == 1 || count < 2) {
    body(std::size_t{0}, count, std::size_t{0});
    return;
  }
  const std::size_t blocks = std::min<std::size_t>(threads, count);
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(blocks);
  pool.reserve(blocks);
  for (std::size_t b = 0; b < blocks; ++b) {
    const std::size_t begin = count * b / blocks;
    const std::size_t end = count * (b + 1) / blocks;
    pool.emplace_back([&, begin, end, b] {
      try {
        body(begin, end, b);
      } catch (...) {
        errors[b] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

inline std::size_t block_count(std::size_t count, unsigned threads) {
  threads = std::max(1u, threads);
  if (threads == 1 || count < 2) return 1;
  return std::min<std::size_t>(threads, count);
}

}  // namespace superpose
