#pragma once

#include <atomic>
#include <cstddef>
#include <thread>
#include <vector>

namespace egocap {

inline int default_threads() {
  unsigned n = std::thread::hardware_concurrency();
  return n == 0 ? 1 : static_cast<int>(n);
}

// Splits [0, count) into fixed-size chunks and runs body(chunk_index, begin, end)
// over them. Workers steal chunks in any order; callers that reduce must keep one
// accumulator slot per chunk and fold the slots in chunk order afterwards, which
// makes the reduction independent of the thread schedule.
template <typename Body>
void parallel_chunks(std::size_t count, std::size_t chunk_size, int threads, Body&& body) {
  if (count == 0) return;
  if (chunk_size == 0) chunk_size = 1;
  std::size_t num_chunks = (count + chunk_size - 1) / chunk_size;
  if (threads <= 1 || num_chunks == 1) {
    for (std::size_t c = 0; c < num_chunks; ++c) {
      std::size_t b = c * chunk_size;
      std::size_t e = std::min(count, b + chunk_size);
      body(c, b, e);
    }
    return;
  }
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (;;) {
      std::size_t c = next.fetch_add(1, std::memory_order_relaxed);
      if (c >= num_chunks) return;
      std::size_t b = c * chunk_size;
      std::size_t e = std::min(count, b + chunk_size);
      body(c, b, e);
    }
  };
  std::size_t nworkers = std::min<std::size_t>(threads, num_chunks);
  std::vector<std::thread> pool;
  pool.reserve(nworkers - 1);
  for (std::size_t i = 1; i < nworkers; ++i) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
}

inline constexpr std::size_t kDefaultChunk = 256;

// Deterministic sum reduction: per-chunk partial accumulators of type Acc
// (value-initialized), folded in chunk-index order.
template <typename Acc, typename Body, typename Fold>
Acc parallel_reduce(std::size_t count, std::size_t chunk_size, int threads,
                    const Acc& init, Body&& body, Fold&& fold) {
  if (count == 0) return init;
  if (chunk_size == 0) chunk_size = 1;
  std::size_t num_chunks = (count + chunk_size - 1) / chunk_size;
  std::vector<Acc> parts(num_chunks, init);
  parallel_chunks(count, chunk_size, threads,
                  [&](std::size_t c, std::size_t b, std::size_t e) { body(parts[c], b, e); });
  Acc total = init;
  for (std::size_t c = 0; c < num_chunks; ++c) fold(total, parts[c]);
  return total;
}

}  // namespace egocap
