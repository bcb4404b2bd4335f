#pragma once

#include <algorithm>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace ridg {

/// Worker count used by every element sweep. Defaults to the hardware
/// concurrency; values < 1 reset to the default.
void set_thread_count(int n);
int thread_count();

/// Runs body(i) for i in [begin, end), split into contiguous chunks.
/// Iterations must write disjoint data. The first exception thrown by any
/// worker is rethrown on the calling thread after all workers finish.
template <class Body>
void parallel_for(int begin, int end, Body&& body) {
  const int n = end - begin;
  if (n <= 0) return;
  const int workers = std::min(thread_count(), n);
  if (workers <= 1) {
    for (int i = begin; i < end; ++i) body(i);
    return;
  }
  std::exception_ptr error;
  std::mutex error_mutex;
  {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    const int chunk = (n + workers - 1) / workers;
    for (int w = 0; w < workers; ++w) {
      const int lo = begin + w * chunk;
      const int hi = std::min(end, lo + chunk);
      if (lo >= hi) break;
      pool.emplace_back([lo, hi, &body, &error, &error_mutex] {
        try {
          for (int i = lo; i < hi; ++i) body(i);
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!error) error = std::current_exception();
        }
      });
    }
  }
  if (error) std::rethrow_exception(error);
}

}  // namespace ridg
