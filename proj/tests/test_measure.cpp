#include <doctest.h>

#include <cmath>
#include <vector>

#include "bclab/errors.hpp"
#include "bclab/measure.hpp"
#include "bclab/parallel.hpp"
#include "bclab/rng.hpp"
#include "bclab/symbolic.hpp"

using namespace bclab;

namespace {

// bump observable that agrees mu-a.e. with the indicator of a cylinder whose
// neighborhood is a gap (the ramps live where the measure has no mass)
Observable gap_safe_indicator_13_53() {
  // plateau exactly [1/3, 5/3], ramps of width ~0.11 inside the adjacent gaps
  return Observable::bump(0.8, 1.0, 2.0 / (3.0 * 0.8));
}

}  // namespace

TEST_SUITE("measure") {

TEST_CASE("exact expectation of constants and odd symmetry") {
  auto one = Observable::constant(1.0);
  auto r = exact_expectation(one, 0.37, 12);
  CHECK(r.value == 1.0);
  CHECK(r.error_bound == 0.0);
  CHECK(r.method == Method::exact_enumeration);

  auto x = Observable::coordinate();
  auto rx = exact_expectation(x, 0.52, 18);
  CHECK(std::abs(rx.value) <= 1e-12);
}

TEST_CASE("second moment closed form 1/(1-lambda^2)") {
  auto x2 = Observable::square();
  for (double lambda : {0.25, 0.4, 0.55}) {
    auto r = exact_expectation(x2, lambda, 18);
    double expect = 1.0 / (1.0 - lambda * lambda);
    CHECK(std::abs(r.value - expect) <= r.error_bound + 1e-12);
    // the truncated second moment is (1 - l^{2D})/(1 - l^2): far inside the bound
    CHECK(r.value == doctest::Approx(expect).epsilon(1e-8));
  }
}

TEST_CASE("exact expectation is deterministic and order independent") {
  auto x2 = Observable::square();
  const double lambda = 0.44;
  auto a = exact_expectation(x2, lambda, 12);
  auto b = exact_expectation(x2, lambda, 12);
  CHECK(a.value == b.value);

  int saved = worker_count();
  set_worker_count(1);
  auto c1 = exact_expectation(x2, lambda, 16);
  set_worker_count(2);
  auto c2 = exact_expectation(x2, lambda, 16);
  set_worker_count(saved);
  CHECK(c1.value == c2.value);

  // independent naive-order oracle at small depth
  double naive = 0.0;
  const int D = 12;
  for (std::uint64_t w = 0; w < (std::uint64_t(1) << D); ++w) {
    double x = 0.0, pw = 1.0;
    for (int m = 0; m < D; ++m) {
      x += ((w >> m) & 1 ? 1.0 : -1.0) * pw;
      pw *= lambda;
    }
    naive += x * x;
  }
  naive /= std::ldexp(1.0, D);
  CHECK(a.value == doctest::Approx(naive).epsilon(1e-13));
}

TEST_CASE("exact expectation rejects bad arguments") {
  auto x2 = Observable::square();
  CHECK_THROWS_AS(exact_expectation(x2, 0.4, 27), resource_error);
  CHECK_THROWS_AS(exact_expectation(x2, 0.4, 0), argument_error);
  // overflowing polynomial triggers the numeric check
  auto huge = Observable::polynomial({0.0, 0.0, 1e308});
  CHECK_THROWS_AS(exact_expectation(huge, 0.9, 10), numeric_error);
}

TEST_CASE("monte carlo hits the closed-form second moment") {
  auto x2 = Observable::square();
  auto r = mc_expectation(x2, 0.4, 1'000'000, 42);
  CHECK(std::abs(r.value - 1.0 / 0.84) <= r.error_bound);
  CHECK(r.method == Method::monte_carlo);
  CHECK(r.seed.has_value());

  // reproducibility and worker independence
  auto r2 = mc_expectation(x2, 0.4, 1'000'000, 42);
  CHECK(r.value == r2.value);
  int saved = worker_count();
  set_worker_count(1);
  auto r3 = mc_expectation(x2, 0.4, 1'000'000, 42);
  set_worker_count(saved);
  CHECK(r.value == r3.value);

  auto one = Observable::constant(1.0);
  for (std::uint64_t seed : {1u, 2u, 3u, 4u, 5u})
    CHECK(mc_expectation(one, 0.3, 1000, seed).value == 1.0);

  CHECK_THROWS_AS(mc_expectation(x2, 0.4, 99, 1), argument_error);
}

TEST_CASE("monte carlo mass of the level-1 cylinder is about one half") {
  auto ind = gap_safe_indicator_13_53();
  auto r = mc_expectation(ind, 0.4, 1'000'000, 7);
  CHECK(std::abs(r.value - 0.5) <= r.error_bound);
}

TEST_CASE("mc agrees with exact within joint error bounds across seeds") {
  auto x2 = Observable::square();
  auto exact = exact_expectation(x2, 0.4, 18);
  int good = 0;
  for (int s = 0; s < 100; ++s) {
    auto mc = mc_expectation(x2, 0.4, 10'000, 1000 + static_cast<std::uint64_t>(s));
    if (std::abs(mc.value - exact.value) <= mc.error_bound + exact.error_bound) ++good;
  }
  CHECK(good >= 99);
}

TEST_CASE("expectation is linear") {
  auto a = Observable::square();
  auto b = gap_safe_indicator_13_53();
  auto combo = a.scaled(2.5) + b.scaled(-1.25);
  const double lambda = 0.4;
  auto ra = exact_expectation(a, lambda, 14);
  auto rb = exact_expectation(b, lambda, 14);
  auto rc = exact_expectation(combo, lambda, 14);
  CHECK(rc.value == doctest::Approx(2.5 * ra.value - 1.25 * rb.value).epsilon(1e-12));
}

TEST_CASE("interval mass bounds: full support, one cylinder, central gap") {
  const double lambda = 0.4;
  double R = support_radius(lambda);
  for (int level : {0, 1, 4, 8}) {
    auto full = interval_mass_bounds(lambda, Interval{-R, R}, level);
    CHECK(full.lower == 1.0);
    CHECK(full.upper == 1.0);
  }
  // endpoints taken from the cylinder itself ([1/3, 5/3] up to representation)
  auto right = cylinder_of(lambda, SignWord{1}).interval;
  CHECK(right.lo == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
  for (int level = 1; level <= 10; ++level) {
    auto half = interval_mass_bounds(lambda, right, level);
    CHECK(half.lower == 0.5);
    CHECK(half.upper == 0.5);
  }
  // the central gap between the two level-1 cylinders carries no cylinder
  auto left = cylinder_of(lambda, SignWord{-1}).interval;
  for (int level = 1; level <= 10; ++level) {
    auto gap = interval_mass_bounds(lambda, Interval{left.hi, right.lo}, level);
    CHECK(gap.lower == 0.0);
    CHECK(gap.upper == 0.0);
  }
}

TEST_CASE("interval mass bounds tighten monotonically in the level") {
  rng::Stream st(99, 0);
  for (int trial = 0; trial < 40; ++trial) {
    double lambda = 0.1 + 0.45 * st.next_unit();
    double R = support_radius(lambda);
    double a = (2.0 * st.next_unit() - 1.0) * R;
    double b = (2.0 * st.next_unit() - 1.0) * R;
    if (a > b) std::swap(a, b);
    double prev_lo = -1.0, prev_hi = 2.0;
    for (int level = 0; level <= 14; ++level) {
      auto mb = interval_mass_bounds(lambda, Interval{a, b}, level);
      CHECK(mb.lower >= prev_lo - 1e-15);
      CHECK(mb.upper <= prev_hi + 1e-15);
      CHECK(mb.lower <= mb.upper);
      CHECK(mb.lower >= 0.0);
      CHECK(mb.upper <= 1.0);
      prev_lo = mb.lower;
      prev_hi = mb.upper;
    }
  }
}

TEST_CASE("small union check: gap piece, violated hypothesis, seeded ensemble") {
  const double delta = 0.1, lambda = 0.35;
  auto base = cylinder_of(lambda, SignWord{});  // level 0: the full support

  // a short piece inside the central gap carries no mass
  double rho_prime = 0.5 * 6.0 * std::pow(delta, 5);  // L = 6, l = 5 at delta = 0.1
  double len = 0.5 * rho_prime * base.interval.length();
  auto rep = small_union_check(delta, lambda, base, {Interval{-len / 2.0, len / 2.0}});
  CHECK(rep.rho_prime == doctest::Approx(rho_prime));
  CHECK(rep.hypothesis_ok);
  CHECK(rep.upper_mass == 0.0);
  CHECK(rep.verdict);

  // the base itself violates the length hypothesis
  auto bad = small_union_check(delta, lambda, base, {base.interval});
  CHECK_FALSE(bad.hypothesis_ok);
  CHECK_FALSE(bad.verdict);

  // seeded admissible ensembles always pass
  rng::Stream st(4242, 0);
  int trials = 0;
  while (trials < 100) {
    int m = static_cast<int>(st.next_u64() % 5);
    SignWord w = SignWord::from_bits(st.next_u64(), m);
    auto cyl = cylinder_of(lambda, w);
    int pieces = 1 + static_cast<int>(st.next_u64() % 6);
    double budget = 0.9 * rep.rho_prime * cyl.interval.length();
    std::vector<Interval> q;
    for (int i = 0; i < pieces; ++i) {
      double len = budget / pieces * st.next_unit();
      double lo = cyl.interval.lo + (cyl.interval.length() - len) * st.next_unit();
      q.push_back(Interval{lo, lo + len});
    }
    auto r = small_union_check(delta, lambda, cyl, q);
    REQUIRE(r.hypothesis_ok);
    CHECK(r.verdict);
    ++trials;
  }

  CHECK_THROWS_AS(small_union_check(0.3, 0.35, base, {}), domain_error);
  CHECK_THROWS_AS(small_union_check(0.1, 0.45, base, {}), domain_error);
}

}  // TEST_SUITE
