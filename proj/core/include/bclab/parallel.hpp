#pragma once

#include <cstdint>
#include <functional>
#include <vector>

namespace bclab {

// Global worker cap used by all internally parallel operations.
// Results are bit-identical for every worker count: work is split into a
// fixed set of chunks and partials are combined in chunk order.
int worker_count();
void set_worker_count(int n);

namespace detail {
void run_chunks(std::int64_t n_chunks, const std::function<void(std::int64_t)>& chunk_fn);
}

// Evaluates chunk_fn(c) for c = 0..n_chunks-1 on the worker pool, storing each
// result, then folds them left-to-right with combine. The fold order is fixed,
// so the result does not depend on thread scheduling.
template <class T, class ChunkFn, class Combine>
T chunked_reduce(std::int64_t n_chunks, T init, ChunkFn&& chunk_fn, Combine&& combine) {
  std::vector<T> partial(static_cast<std::size_t>(n_chunks));
  detail::run_chunks(n_chunks, [&](std::int64_t c) { partial[static_cast<std::size_t>(c)] = chunk_fn(c); });
  T acc = init;
  for (std::int64_t c = 0; c < n_chunks; ++c) acc = combine(acc, partial[static_cast<std::size_t>(c)]);
  return acc;
}

}  // namespace bclab
