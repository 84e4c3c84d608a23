#include "bclab/parallel.hpp"

#include <atomic>
#include <thread>

namespace bclab {

namespace {
std::atomic<int> g_workers{0};  // 0 = not set yet
}

int worker_count() {
  int w = g_workers.load(std::memory_order_relaxed);
  if (w > 0) return w;
  unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

void set_worker_count(int n) { g_workers.store(n < 1 ? 1 : n, std::memory_order_relaxed); }

namespace detail {

void run_chunks(std::int64_t n_chunks, const std::function<void(std::int64_t)>& chunk_fn) {
  if (n_chunks <= 0) return;
  int workers = worker_count();
  if (workers <= 1 || n_chunks == 1) {
    for (std::int64_t c = 0; c < n_chunks; ++c) chunk_fn(c);
    return;
  }
  if (workers > n_chunks) workers = static_cast<int>(n_chunks);
  std::atomic<std::int64_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  for (int t = 0; t < workers; ++t) {
    pool.emplace_back([&]() {
      for (;;) {
        std::int64_t c = next.fetch_add(1, std::memory_order_relaxed);
        if (c >= n_chunks) return;
        chunk_fn(c);
      }
    });
  }
  for (auto& th : pool) th.join();
}

}  // namespace detail
}  // namespace bclab
