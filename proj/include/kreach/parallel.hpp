#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

#include "kreach/types.hpp"

namespace kreach::detail {

/// Runs body(begin, end) over [0, count) split into chunks of `chunk` items,
/// spread over at most `threads` workers (0 = hardware concurrency). Chunks
/// must be independent; the first exception thrown by any chunk is rethrown.
template <typename Body>
void parallel_chunks(Index count, Index chunk, Body&& body, unsigned threads = 0) {
  if (count <= 0) return;
  chunk = std::max<Index>(chunk, 1);
  const Index chunks = (count + chunk - 1) / chunk;
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  const auto workers = static_cast<Index>(std::min<Index>(threads, chunks));
  if (workers <= 1) {
    for (Index c = 0; c < chunks; ++c) body(c * chunk, std::min(count, (c + 1) * chunk));
    return;
  }

  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  for (Index w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (Index c = w; c < chunks; c += workers) {
        try {
          body(c * chunk, std::min(count, (c + 1) * chunk));
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
          return;
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace kreach::detail
