#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace dlc {

inline unsigned default_workers() {
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

// Splits [0, items) into a fixed number of chunks that does not depend on
// `workers`, evaluates `work(begin, end)` for each chunk on a small pool and
// folds the partial results in chunk order with `+=`. With integer tallies
// the result is bitwise identical for any worker count.
template <typename Tally, typename Work>
Tally parallel_fold(std::size_t items, unsigned workers, Work&& work,
                    std::size_t chunks = 256) {
  if (items == 0) return Tally{};
  chunks = std::clamp<std::size_t>(chunks, 1, items);
  std::vector<Tally> partial(chunks);
  auto bounds = [&](std::size_t c) { return items * c / chunks; };

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto drain = [&] {
    for (std::size_t c; (c = next.fetch_add(1)) < chunks;) {
      try {
        partial[c] = work(bounds(c), bounds(c + 1));
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };

  workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(chunks)));
  if (workers == 1) {
    drain();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers - 1);
    for (unsigned w = 1; w < workers; ++w) pool.emplace_back(drain);
    drain();
  }
  if (failure) std::rethrow_exception(failure);

  Tally total{};
  for (auto& p : partial) total += p;
  return total;
}

}  // namespace dlc
