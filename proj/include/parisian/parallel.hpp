#pragma once

// Fan-out of replication chunks over worker threads. Chunk boundaries depend
// only on the replication count, so per-chunk results reduced in chunk order
// are independent of the number of workers.

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace parisian {

inline constexpr std::size_t kReplicationChunk = 512;

struct ChunkRange {
  std::size_t index;
  std::size_t begin;
  std::size_t end;
};

inline std::size_t chunk_count(std::size_t n, std::size_t chunk = kReplicationChunk) {
  return (n + chunk - 1) / chunk;
}

// Calls fn(ChunkRange) for every chunk of [first, first + n). fn must only
// touch state owned by its chunk index.
template <class Fn>
void for_each_chunk(std::size_t first, std::size_t n, unsigned jobs, Fn&& fn,
                    std::size_t chunk = kReplicationChunk) {
  const std::size_t chunks = chunk_count(n, chunk);
  auto range = [&](std::size_t c) {
    const std::size_t b = first + c * chunk;
    return ChunkRange{c, b, std::min(first + n, b + chunk)};
  };
  const unsigned workers = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(chunks)));
  if (workers <= 1) {
    for (std::size_t c = 0; c < chunks; ++c) fn(range(c));
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t c = next++; c < chunks; c = next++) {
        try {
          fn(range(c));
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!error) error = std::current_exception();
          next = chunks;
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace parisian
