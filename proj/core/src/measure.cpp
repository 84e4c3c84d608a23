#include "bclab/measure.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "bclab/detail/enumeration.hpp"
#include "bclab/errors.hpp"
#include "bclab/rng.hpp"

namespace bclab {

namespace detail {

double truncation_error_bound(const Observable& phi, double lambda, int depth) {
  double tail = geometric_tail(lambda, depth + 1);  // lambda^depth / (1-lambda)
  if (phi.holder_exponent() && phi.holder_constant())
    return *phi.holder_constant() * std::pow(tail, *phi.holder_exponent());
  double r = support_radius(lambda) + tail;
  return phi.deriv_bound_on(Interval{-r, r}) * tail;
}

}  // namespace detail

namespace {

struct SumAcc {
  double sum = 0.0;
};

void require_depth(int depth) {
  if (depth < 1) throw argument_error("depth must be positive");
  if (depth > kMaxEnumerationDepth)
    throw resource_error("exact enumeration capped at depth 26 (2^26 words)");
}

}  // namespace

ExpectationResult exact_expectation(const Observable& phi, double lambda, int depth) {
  require_lambda(lambda);
  require_depth(depth);
  auto acc = detail::enumerate_reduce<0, SumAcc>(
      lambda, depth, 0, 0, SumAcc{},
      [&](SumAcc& a, double x, double, double) { a.sum += phi(x); },
      [](SumAcc a, SumAcc b) {
        if (!std::isfinite(b.sum)) throw numeric_error("non-finite observable values");
        return SumAcc{a.sum + b.sum};
      });
  ExpectationResult r;
  r.value = acc.sum / std::ldexp(1.0, depth);
  r.error_bound = detail::truncation_error_bound(phi, lambda, depth);
  r.method = Method::exact_enumeration;
  r.samples_or_depth = depth;
  return r;
}

namespace {

// One sign word of depth 64 per sample; x assembled from 8 byte tables.
struct ByteTables {
  double t[8][256];
};

ByteTables make_byte_tables(double lambda) {
  ByteTables bt;
  double pw[64];
  pw[0] = 1.0;
  for (int m = 1; m < 64; ++m) pw[m] = pw[m - 1] * lambda;
  for (int k = 0; k < 8; ++k) {
    for (int byte = 0; byte < 256; ++byte) {
      double v = 0.0;
      for (int b = 0; b < 8; ++b) v += ((byte >> b) & 1 ? 1.0 : -1.0) * pw[8 * k + b];
      bt.t[k][byte] = v;
    }
  }
  return bt;
}

}  // namespace

ExpectationResult mc_expectation(const Observable& phi, double lambda, std::int64_t n,
                                 std::uint64_t seed) {
  require_lambda(lambda);
  if (n < 100) throw argument_error("mc_expectation requires n >= 100");
  const ByteTables bt = make_byte_tables(lambda);

  struct McAcc {
    double sum = 0.0, sumsq = 0.0;
  };
  const std::int64_t chunk = 1 << 14;
  const std::int64_t n_chunks = (n + chunk - 1) / chunk;
  auto acc = chunked_reduce<McAcc>(
      n_chunks, McAcc{},
      [&](std::int64_t c) {
        McAcc a;
        std::int64_t lo = c * chunk, hi = std::min(n, lo + chunk);
        for (std::int64_t s = lo; s < hi; ++s) {
          std::uint64_t w = rng::at(seed, 1, static_cast<std::uint64_t>(s));
          double x = 0.0;
          for (int k = 0; k < 8; ++k) x += bt.t[k][(w >> (8 * k)) & 0xff];
          double v = phi(x);
          a.sum += v;
          a.sumsq += v * v;
        }
        return a;
      },
      [](McAcc a, McAcc b) {
        if (!std::isfinite(b.sum)) throw numeric_error("non-finite observable values");
        return McAcc{a.sum + b.sum, a.sumsq + b.sumsq};
      });

  double mean = acc.sum / static_cast<double>(n);
  double var = std::max(0.0, acc.sumsq / static_cast<double>(n) - mean * mean);
  ExpectationResult r;
  r.value = mean;
  r.error_bound = 4.0 * std::sqrt(var / static_cast<double>(n));
  r.method = Method::monte_carlo;
  r.samples_or_depth = n;
  r.seed = seed;
  return r;
}

namespace {

struct MassCounts {
  std::uint64_t contained = 0;
  std::uint64_t intersecting = 0;
};

// Recursive descent over the cylinder tree with subtree pruning. Cylinders at
// tree depth k have center c and half-width lambda^k * R.
void count_cylinders(double lambda, double R, double c, int k, int level, double lo, double hi,
                     MassCounts& out) {
  double half = std::pow(lambda, k) * R;
  bool overlap = (c - half < hi) && (c + half > lo);
  if (!overlap) return;
  bool contained = (lo <= c - half) && (c + half <= hi);
  std::uint64_t subtree = std::uint64_t(1) << (level - k);
  if (contained) {
    out.contained += subtree;
    out.intersecting += subtree;
    return;
  }
  if (k == level) {
    out.intersecting += 1;
    return;
  }
  double step = std::pow(lambda, k);
  count_cylinders(lambda, R, c - step, k + 1, level, lo, hi, out);
  count_cylinders(lambda, R, c + step, k + 1, level, lo, hi, out);
}

}  // namespace

IntervalMassBounds interval_mass_bounds(double lambda, const Interval& interval, int level) {
  require_lambda(lambda);
  if (level < 0) throw argument_error("level must be nonnegative");
  if (level > kMaxEnumerationDepth) throw resource_error("cylinder counting capped at level 26");
  if (!(interval.lo <= interval.hi)) throw argument_error("empty interval");
  MassCounts mc;
  count_cylinders(lambda, support_radius(lambda), 0.0, 0, level, interval.lo, interval.hi, mc);
  double scale = std::ldexp(1.0, -level);
  return IntervalMassBounds{static_cast<double>(mc.contained) * scale,
                            static_cast<double>(mc.intersecting) * scale, level};
}

SmallUnionReport small_union_check(double delta, double lambda, const Cylinder& base,
                                   const std::vector<Interval>& pieces) {
  if (!(delta > 0.0 && delta < 0.25)) throw domain_error("small union: delta must lie in (0,1/4)");
  if (!(lambda > delta && lambda < 0.5 - delta))
    throw domain_error("small union: lambda must lie in (delta, 1/2-delta)");

  SmallUnionReport rep;
  rep.L = static_cast<int>(std::floor(1.0 / (2.0 * delta))) + 1;
  rep.l = static_cast<int>(std::floor(std::log2(4.0 * rep.L))) + 1;
  rep.rho_prime = 0.5 * rep.L * std::pow(delta, rep.l);
  rep.threshold = 0.5 * std::ldexp(1.0, -base.level());

  if (static_cast<int>(pieces.size()) > rep.L) {
    rep.reason = "more than L pieces";
    return rep;
  }
  for (const auto& p : pieces) {
    if (!(p.lo <= p.hi)) {
      rep.reason = "malformed piece";
      return rep;
    }
    if (!base.interval.contains(p)) {
      rep.reason = "piece outside base cylinder";
      return rep;
    }
  }
  // union length (pieces may overlap)
  std::vector<Interval> merged = pieces;
  std::sort(merged.begin(), merged.end(), [](const Interval& a, const Interval& b) {
    return a.lo < b.lo;
  });
  std::vector<Interval> un;
  for (const auto& p : merged) {
    if (!un.empty() && p.lo <= un.back().hi)
      un.back().hi = std::max(un.back().hi, p.hi);
    else
      un.push_back(p);
  }
  double total = 0.0;
  for (const auto& p : un) total += p.length();
  if (!(total < rep.rho_prime * base.interval.length())) {
    rep.reason = "total piece length not below rho' * |C|";
    return rep;
  }
  rep.hypothesis_ok = true;

  rep.level_used = std::min(base.level() + rep.l + 12, kMaxEnumerationDepth);
  double upper = 0.0;
  for (const auto& p : un) upper += interval_mass_bounds(lambda, p, rep.level_used).upper;
  rep.upper_mass = upper;
  rep.verdict = upper <= rep.threshold;
  return rep;
}

}  // namespace bclab
