#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace coarse {

struct ExecPolicy {
  unsigned workers = 1;
};

// Splits [0, count) into at most `workers` contiguous chunks and runs
// fn(chunk, begin, end) on each. Chunk boundaries depend only on `count` and
// the worker count; callers that reduce per-chunk results in chunk order get
// the same answer for any worker count as long as the reduction is
// associative and exact (min with a total order, integer sums).
template <typename Fn>
void parallel_chunks(const ExecPolicy& exec, std::size_t count, Fn&& fn) {
  const std::size_t workers =
      std::max<std::size_t>(1, std::min<std::size_t>(exec.workers, count));
  if (workers <= 1) {
    fn(std::size_t{0}, std::size_t{0}, count);
    return;
  }
  std::vector<std::thread> threads;
  std::vector<std::exception_ptr> errors(workers);
  threads.reserve(workers);
  const std::size_t step = (count + workers - 1) / workers;
  for (std::size_t w = 0; w < workers; ++w) {
    const std::size_t begin = std::min(count, w * step);
    const std::size_t end = std::min(count, begin + step);
    threads.emplace_back([&, w, begin, end] {
      try {
        fn(w, begin, end);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : threads) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

inline std::size_t chunk_count(const ExecPolicy& exec, std::size_t count) {
  return std::max<std::size_t>(1, std::min<std::size_t>(exec.workers, count));
}

}  // namespace coarse
