#pragma once

#include <bit>
#include <cmath>
#include <cstdint>
#include <vector>

#include "bclab/parallel.hpp"

namespace bclab::detail {

// Exhaustive sweep over all 2^(depth-prefix_len) sign words extending a fixed
// prefix, in Gray order, maintaining the truncated series
//   x  = sum_m a_m lambda^{m-1}
//   x1 = sum_m (m-1) a_m lambda^{m-2}   (terms m >= 2)
//   x2 = sum_m (m-1)(m-2) a_m lambda^{m-3}  (terms m >= 3)
// incrementally (one fused update per word). Work is split into fixed 2^14
// word chunks; each chunk re-derives its state from scratch, which both
// bounds floating-point drift and makes the chunk partials independent of
// thread scheduling. Partials are combined in chunk order.
//
// Prefix bit k (0-based) carries sign a_{k+1}: set = +1, clear = -1.
// visit(acc, x, x1, x2); x1/x2 stay 0 unless ORDER >= 1 / >= 2.
template <int ORDER, class Acc, class Visit, class Combine>
Acc enumerate_reduce(double lambda, int depth, std::uint64_t prefix_bits, int prefix_len,
                     Acc init, Visit visit, Combine combine) {
  const int free_bits = depth - prefix_len;
  std::vector<double> dx(static_cast<std::size_t>(free_bits > 0 ? free_bits : 0));
  std::vector<double> dx1(dx.size(), 0.0), dx2(dx.size(), 0.0);
  for (int b = 0; b < free_bits; ++b) {
    int m = prefix_len + b + 1;
    dx[static_cast<std::size_t>(b)] = 2.0 * std::pow(lambda, m - 1);
    if (m >= 2) dx1[static_cast<std::size_t>(b)] = 2.0 * (m - 1) * std::pow(lambda, m - 2);
    if (m >= 3)
      dx2[static_cast<std::size_t>(b)] = 2.0 * (m - 1) * (m - 2.0) * std::pow(lambda, m - 3);
  }
  // Base state: prefix signs as given, all free signs at -1.
  double bx = 0.0, bx1 = 0.0, bx2 = 0.0;
  for (int m = 1; m <= depth; ++m) {
    double s = (m <= prefix_len) ? ((prefix_bits >> (m - 1)) & 1 ? 1.0 : -1.0) : -1.0;
    bx += s * std::pow(lambda, m - 1);
    if (m >= 2) bx1 += s * (m - 1) * std::pow(lambda, m - 2);
    if (m >= 3) bx2 += s * (m - 1) * (m - 2.0) * std::pow(lambda, m - 3);
  }

  const int chunk_bits = free_bits < 14 ? free_bits : 14;
  const std::int64_t n_chunks = std::int64_t(1) << (free_bits - chunk_bits);
  const std::uint64_t chunk_size = std::uint64_t(1) << chunk_bits;

  auto chunk_fn = [&](std::int64_t c) -> Acc {
    Acc acc = init;
    std::uint64_t i0 = static_cast<std::uint64_t>(c) << chunk_bits;
    std::uint64_t g = i0 ^ (i0 >> 1);
    double x = bx, x1 = bx1, x2 = bx2;
    for (int b = 0; b < free_bits; ++b) {
      if ((g >> b) & 1) {
        x += dx[static_cast<std::size_t>(b)];
        if constexpr (ORDER >= 1) x1 += dx1[static_cast<std::size_t>(b)];
        if constexpr (ORDER >= 2) x2 += dx2[static_cast<std::size_t>(b)];
      }
    }
    const std::uint64_t iend = i0 + chunk_size;
    for (std::uint64_t i = i0;;) {
      visit(acc, x, x1, x2);
      if (++i == iend) break;
      int b = std::countr_zero(i);
      std::uint64_t bit = std::uint64_t(1) << b;
      g ^= bit;
      double s = (g & bit) ? 1.0 : -1.0;
      x += s * dx[static_cast<std::size_t>(b)];
      if constexpr (ORDER >= 1) x1 += s * dx1[static_cast<std::size_t>(b)];
      if constexpr (ORDER >= 2) x2 += s * dx2[static_cast<std::size_t>(b)];
    }
    return acc;
  };
  return chunked_reduce<Acc>(n_chunks, init, chunk_fn, combine);
}

// Same sweep evaluated at two parameters simultaneously (common coding:
// identical word set at lambda_a and lambda_b). visit(acc, xa, x1a, xb, x1b).
// The small difference xb - xa is carried as its own state: its update terms
// are O(lambda_b - lambda_a), so the running difference keeps far more
// accurate digits than recomputing xb - xa from two O(1) states would.
template <int ORDER, class Acc, class Visit, class Combine>
Acc enumerate_reduce_pair(double lambda_a, double lambda_b, int depth, Acc init, Visit visit,
                          Combine combine) {
  const int free_bits = depth;
  std::vector<double> dxa(static_cast<std::size_t>(free_bits));
  std::vector<double> ddx(dxa.size());  // flip deltas of (xb - xa)
  std::vector<double> dx1a(dxa.size(), 0.0), ddx1(dxa.size(), 0.0);
  double bxa = 0.0, bdx = 0.0, bx1a = 0.0, bdx1 = 0.0;
  for (int b = 0; b < free_bits; ++b) {
    int m = b + 1;
    double pa = std::pow(lambda_a, m - 1);
    double pb = std::pow(lambda_b, m - 1);
    dxa[static_cast<std::size_t>(b)] = 2.0 * pa;
    ddx[static_cast<std::size_t>(b)] = 2.0 * (pb - pa);
    bxa -= pa;
    bdx -= pb - pa;
    if (m >= 2) {
      double qa = (m - 1) * std::pow(lambda_a, m - 2);
      double qb = (m - 1) * std::pow(lambda_b, m - 2);
      dx1a[static_cast<std::size_t>(b)] = 2.0 * qa;
      ddx1[static_cast<std::size_t>(b)] = 2.0 * (qb - qa);
      bx1a -= qa;
      bdx1 -= qb - qa;
    }
  }
  const int chunk_bits = free_bits < 14 ? free_bits : 14;
  const std::int64_t n_chunks = std::int64_t(1) << (free_bits - chunk_bits);
  const std::uint64_t chunk_size = std::uint64_t(1) << chunk_bits;

  auto chunk_fn = [&](std::int64_t c) -> Acc {
    Acc acc = init;
    std::uint64_t i0 = static_cast<std::uint64_t>(c) << chunk_bits;
    std::uint64_t g = i0 ^ (i0 >> 1);
    double xa = bxa, dx = bdx, x1a = bx1a, dx1 = bdx1;
    for (int b = 0; b < free_bits; ++b) {
      if ((g >> b) & 1) {
        xa += dxa[static_cast<std::size_t>(b)];
        dx += ddx[static_cast<std::size_t>(b)];
        if constexpr (ORDER >= 1) {
          x1a += dx1a[static_cast<std::size_t>(b)];
          dx1 += ddx1[static_cast<std::size_t>(b)];
        }
      }
    }
    const std::uint64_t iend = i0 + chunk_size;
    for (std::uint64_t i = i0;;) {
      visit(acc, xa, x1a, xa + dx, x1a + dx1);
      if (++i == iend) break;
      int b = std::countr_zero(i);
      std::uint64_t bit = std::uint64_t(1) << b;
      g ^= bit;
      double s = (g & bit) ? 1.0 : -1.0;
      xa += s * dxa[static_cast<std::size_t>(b)];
      dx += s * ddx[static_cast<std::size_t>(b)];
      if constexpr (ORDER >= 1) {
        x1a += s * dx1a[static_cast<std::size_t>(b)];
        dx1 += s * ddx1[static_cast<std::size_t>(b)];
      }
    }
    return acc;
  };
  return chunked_reduce<Acc>(n_chunks, init, chunk_fn, combine);
}

}  // namespace bclab::detail
