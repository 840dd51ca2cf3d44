#include "parallel.hpp"

#include <atomic>
#include <cstdlib>
#include <thread>
#include <vector>

namespace panogeo {

namespace {

std::atomic<int> g_threads{0};

int env_threads() {
  const char* s = std::getenv("PANOGEO_THREADS");
  if (!s || !*s) return 0;
  char* end = nullptr;
  long n = std::strtol(s, &end, 10);
  if (end == s || n < 1) return 0;
  return static_cast<int>(n);
}

}  // namespace

void set_thread_count(int n) { g_threads.store(n < 0 ? 0 : n); }

int thread_count() {
  int n = g_threads.load();
  if (n > 0) return n;
  n = env_threads();
  if (n > 0) return n;
  unsigned hw = std::thread::hardware_concurrency();
  return hw ? static_cast<int>(hw) : 1;
}

void parallel_rows(int rows, const std::function<void(int)>& fn) {
  if (rows <= 0) return;
  int workers = thread_count();
  if (workers > rows) workers = rows;
  if (workers <= 1) {
    for (int r = 0; r < rows; ++r) fn(r);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) {
    int lo = static_cast<int>(static_cast<long>(rows) * w / workers);
    int hi = static_cast<int>(static_cast<long>(rows) * (w + 1) / workers);
    pool.emplace_back([lo, hi, &fn] {
      for (int r = lo; r < hi; ++r) fn(r);
    });
  }
  for (auto& t : pool) t.join();
}

}  // namespace panogeo
