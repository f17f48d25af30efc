#pragma once

#include <algorithm>
#include <cstdint>
#include <exception>
#include <thread>
#include <vector>

namespace torus_resonance {

struct ScanOptions {
  unsigned threads = 1;
};

/// Splits [begin, end) into `chunks` contiguous pieces, in order.
struct ChunkRange {
  std::uint64_t begin;
  std::uint64_t end;
};

inline std::vector<ChunkRange> split_range(std::uint64_t begin, std::uint64_t end,
                                           unsigned chunks) {
  std::vector<ChunkRange> out;
  std::uint64_t const n = end > begin ? end - begin : 0;
  chunks = static_cast<unsigned>(std::clamp<std::uint64_t>(chunks, 1, std::max<std::uint64_t>(n, 1)));
  std::uint64_t const base = n / chunks;
  std::uint64_t const extra = n % chunks;
  std::uint64_t lo = begin;
  for (unsigned i = 0; i < chunks; ++i) {
    std::uint64_t const len = base + (i < extra ? 1 : 0);
    out.push_back({lo, lo + len});
    lo += len;
  }
  return out;
}

/// Runs fn(chunk_index, range) for every chunk, one thread per chunk.
/// Callers reduce per-chunk results in chunk order, which makes the result
/// independent of the thread count.
template <class Fn>
void for_each_chunk(std::vector<ChunkRange> const& chunks, Fn&& fn) {
  if (chunks.size() == 1) {
    fn(std::size_t{0}, chunks[0]);
    return;
  }
  std::vector<std::exception_ptr> errors(chunks.size());
  {
    std::vector<std::jthread> workers;
    workers.reserve(chunks.size() - 1);
    for (std::size_t i = 1; i < chunks.size(); ++i) {
      workers.emplace_back([&, i] {
        try {
          fn(i, chunks[i]);
        } catch (...) {
          errors[i] = std::current_exception();
        }
      });
    }
    try {
      fn(std::size_t{0}, chunks[0]);
    } catch (...) {
      errors[0] = std::current_exception();
    }
  }
  for (auto const& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace torus_resonance
