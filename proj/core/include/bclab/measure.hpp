#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "bclab/observable.hpp"
#include "bclab/symbolic.hpp"

namespace bclab {

inline constexpr int kMaxEnumerationDepth = 26;  // 2^26 word cap for exact mode

enum class Method { exact_enumeration, monte_carlo };

struct ExpectationResult {
  double value = 0.0;
  double error_bound = 0.0;
  Method method = Method::exact_enumeration;
  std::int64_t samples_or_depth = 0;
  std::optional<std::uint64_t> seed;
};

// Average of phi over all 2^depth truncated sign words (equal weight); the
// word's tail is assigned its midpoint value 0 and the error bound absorbs
// the truncation through the observable's declared modulus data.
ExpectationResult exact_expectation(const Observable& phi, double lambda, int depth);

// Monte Carlo with i.i.d. uniform sign words of depth 64; reproducible given
// (seed, n) and independent of the worker count.
ExpectationResult mc_expectation(const Observable& phi, double lambda, std::int64_t n,
                                 std::uint64_t seed);

struct IntervalMassBounds {
  double lower = 0.0;
  double upper = 0.0;
  int level = 0;
};

// Rigorous cylinder-counting bounds: lower counts level-`level` cylinders
// contained in the interval, upper counts those with open overlap; the true
// mass lies in [lower, upper] (mu_lambda is atomless, so boundary points do
// not matter).
IntervalMassBounds interval_mass_bounds(double lambda, const Interval& interval, int level);

struct SmallUnionReport {
  bool hypothesis_ok = false;
  std::string reason;
  int L = 0;            // max admissible piece count
  int l = 0;            // counting level offset from the lemma
  double rho_prime = 0.0;
  int level_used = 0;
  double upper_mass = 0.0;
  double threshold = 0.0;  // (1/2) mu(C)
  bool verdict = false;
};

// Audit of the small-union mass bound: pieces inside a base cylinder with
// total length below rho' * |C| must carry at most half of C's mass.
SmallUnionReport small_union_check(double delta, double lambda, const Cylinder& base,
                                   const std::vector<Interval>& pieces);

namespace detail {
// Truncation contribution to the exact-mode error bound for `phi`:
// declared Holder data gives C * tail^alpha, otherwise a Lipschitz bound on
// the (slightly widened) support is used.
double truncation_error_bound(const Observable& phi, double lambda, int depth);
}

}  // namespace bclab
