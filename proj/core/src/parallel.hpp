#pragma once

// Static partition of [0, n) into contiguous chunks, one per worker. Callers
// merge per-worker results in worker order, so outcomes depend only on the
// data, never on scheduling.

#include <algorithm>
#include <cstdint>
#include <exception>
#include <thread>
#include <vector>

namespace mutualcover::detail {

template <typename F>
void parallel_chunks(std::uint64_t n, unsigned workers, F&& body) {
  workers = std::max(1u, workers);
  if (workers == 1 || n < 2) {
    body(std::uint64_t{0}, n, 0u);
    return;
  }
  const std::uint64_t w = std::min<std::uint64_t>(workers, n);
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(w);
  for (std::uint64_t k = 0; k < w; ++k) {
    const std::uint64_t begin = n * k / w, end = n * (k + 1) / w;
    pool.emplace_back([&, begin, end, k] {
      try {
        body(begin, end, static_cast<unsigned>(k));
      } catch (...) {
        errors[k] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace mutualcover::detail
