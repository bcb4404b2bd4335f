#include "ridg/parallel.hpp"

#include <atomic>

namespace ridg {

namespace {

int hardware_default() {
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

std::atomic<int> g_threads{hardware_default()};

}  // namespace

void set_thread_count(int n) { g_threads = n < 1 ? hardware_default() : n; }

int thread_count() { return g_threads; }

}  // namespace ridg
