#pragma once

// Index-range parallelism with results that never depend on the worker count.
// Workers only fill disjoint slices of preallocated output; every reduction
// goes through pairwise_sum, whose tree depends on the length alone.

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <span>
#include <thread>
#include <vector>

namespace rsp {

namespace detail {
inline std::atomic<unsigned>& thread_setting() {
  static std::atomic<unsigned> threads{0};
  return threads;
}
}  // namespace detail

/// Number of workers used by parallel_for; 0 means "one per hardware thread".
inline void set_thread_count(unsigned threads) { detail::thread_setting().store(threads); }

inline unsigned thread_count() {
  unsigned t = detail::thread_setting().load();
  if (t == 0) t = std::max(1u, std::thread::hardware_concurrency());
  return t;
}

/// Calls body(begin, end) on contiguous chunks covering [0, count).
template <class Body>
void parallel_for(std::size_t count, Body&& body) {
  constexpr std::size_t kMinChunk = 4096;
  std::size_t workers = std::min<std::size_t>(thread_count(), (count + kMinChunk - 1) / kMinChunk);
  if (workers <= 1) {
    if (count > 0) body(std::size_t{0}, count);
    return;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(workers);
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    std::size_t begin = count * w / workers;
    std::size_t end = count * (w + 1) / workers;
    pool.emplace_back([&, w, begin, end] {
      try {
        body(begin, end);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

/// Fixed-tree pairwise summation: splits at the midpoint down to blocks of 32.
inline double pairwise_sum(std::span<const double> values) {
  constexpr std::size_t kLeaf = 32;
  if (values.size() <= kLeaf) {
    double s = 0.0;
    for (double v : values) s += v;
    return s;
  }
  std::size_t half = values.size() / 2;
  return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

}  // namespace rsp
