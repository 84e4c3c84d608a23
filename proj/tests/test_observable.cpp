#include <doctest.h>

#include <cmath>
#include <vector>

#include "bclab/errors.hpp"
#include "bclab/observable.hpp"
#include "bclab/rng.hpp"

using namespace bclab;

TEST_SUITE("observable") {

TEST_CASE("bump profile shape and C2 matching") {
  for (double rho : {0.2, 0.5, 0.9}) {
    auto bp = make_bump(rho);
    double lo = (1.0 - rho) / 3.0;
    CHECK(bp.g(1.0) == 1.0);
    CHECK(bp.g(1.0 - rho) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(bp.g(1.0 + rho) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(bp.g(lo) == 0.0);
    CHECK(bp.g.deriv(lo + 1e-13) == doctest::Approx(0.0).epsilon(1e-6));
    CHECK(bp.g.deriv2(lo + 1e-13) == doctest::Approx(0.0).epsilon(1e-3));
    CHECK(bp.g(lo - 0.01) == 0.0);
    CHECK(bp.g(2.0 - lo + 0.01) == 0.0);
    for (double x : {0.3, 0.7, 1.0, 1.5, 1.9}) CHECK(bp.g(x) >= 0.0);
    for (double x : {0.3, 0.7, 1.5}) CHECK(bp.g(x) <= 1.0);
    // integral closed form 2 rho + w
    CHECK(bp.integral == doctest::Approx(bp.g.integral_minus(0.0)).epsilon(1e-13));
    CHECK(bp.antiderivative(2.0) == doctest::Approx(bp.integral).epsilon(1e-13));
  }
  CHECK_THROWS_AS(make_bump(0.0), domain_error);
  CHECK_THROWS_AS(make_bump(1.0), domain_error);
}

TEST_CASE("bump second derivative matches finite differences") {
  auto bp = make_bump(0.4);
  double h = 1e-5;
  double worst = 0.0;
  int used = 0;
  for (int i = 1; i < 1100 && used < 1000; ++i) {
    double x = 0.2 + (1.6 * i) / 1100.0;
    // stay clear of the C2 knots, where one-sided third derivatives differ
    bool near_knot = false;
    for (double kx : bp.g.knots())
      if (std::abs(x - kx) < 4.0 * h) near_knot = true;
    if (near_knot) continue;
    ++used;
    double fd = (bp.g(x + h) - 2.0 * bp.g(x) + bp.g(x - h)) / (h * h);
    worst = std::max(worst, std::abs(fd - bp.g.deriv2(x)));
  }
  CHECK(used == 1000);
  CHECK(worst < 1e-4);
  // closed-form norm components
  double w = bp.ramp_width;
  CHECK(bp.c2_norm ==
        doctest::Approx(1.0 + 1.875 / w + (10.0 / std::sqrt(3.0)) / (w * w)).epsilon(1e-13));
  double measured_d1 = 0.0, measured_d2 = 0.0;
  for (int i = 0; i <= 4000; ++i) {
    double x = 0.0 + 2.0 * i / 4000.0;
    measured_d1 = std::max(measured_d1, std::abs(bp.g.deriv(x)));
    measured_d2 = std::max(measured_d2, std::abs(bp.g.deriv2(x)));
  }
  CHECK(measured_d1 <= 1.875 / w * (1.0 + 1e-9));
  CHECK(measured_d1 >= 1.875 / w * 0.999);
  CHECK(measured_d2 <= (10.0 / std::sqrt(3.0)) / (w * w) * (1.0 + 1e-9));
  CHECK(measured_d2 >= (10.0 / std::sqrt(3.0)) / (w * w) * 0.995);
}

TEST_CASE("gbm sampling: sign frequencies, support, exact identities") {
  const int N = 100000;
  const double theta1 = 0.1, theta2 = 0.4, rho = 0.5;
  auto g = sample_gbm(N, theta1, theta2, rho, 31);
  double p = std::pow(N, -theta2);
  int plus = 0, minus = 0;
  for (auto s : g.signs) {
    if (s == 1) ++plus;
    if (s == -1) ++minus;
  }
  double sigma = std::sqrt(N * p * (1.0 - p));
  CHECK(std::abs(plus - N * p) <= 3.0 * sigma);
  CHECK(std::abs(minus - N * p) <= 3.0 * sigma);

  CHECK(g.phi(0.0) == 0.0);
  CHECK(g.phi(-5.0) == 0.0);
  CHECK(g.phi(2.0) == g.phi(77.0));

  // phi at cell boundaries equals the running prefix, bit for bit
  for (int j = 0; j <= N; j += 997) {
    double x = 2.0 * j / N;
    CHECK(g.phi(x) == g.prefix_integrals[static_cast<std::size_t>(j)]);
  }
  // phi(2) identity: sum of signed cell integrals
  double expect = 0.0;
  for (auto s : g.signs) expect += s * g.cell_step;
  CHECK(g.phi(2.0) == doctest::Approx(expect).epsilon(1e-12));

  // |phi'| <= N^theta1 and the martingale increment bound
  double cap = std::pow(N, theta1);
  rng::Stream st(5, 0);
  for (int i = 0; i < 2000; ++i) {
    double x = 2.0 * st.next_unit();
    CHECK(std::abs(g.phi.deriv(x)) <= cap * (1.0 + 1e-9));
  }
  for (int j = 1; j <= N; ++j) {
    double inc = std::abs(g.prefix_integrals[static_cast<std::size_t>(j)] -
                          g.prefix_integrals[static_cast<std::size_t>(j - 1)]);
    CHECK(inc <= 2.0 * std::pow(N, theta1 - 1.0));
  }

  // all-zero draw gives the zero function
  auto z = make_gbm_from_signs(16, theta1, theta2, rho, std::vector<std::int8_t>(16, 0));
  CHECK(z.phi(0.7) == 0.0);
  CHECK(z.sup_abs() == 0.0);
  CHECK(z.sup_abs_deriv() == 0.0);

  CHECK_THROWS_AS(sample_gbm(2, 0.1, 0.1, 0.5, 1), argument_error);  // N^-t2 > 1/2
}

TEST_CASE("gbm reproducibility") {
  auto a = sample_gbm(512, 0.0625, 0.378, 0.9, 9001);
  auto b = sample_gbm(512, 0.0625, 0.378, 0.9, 9001);
  CHECK(a.signs == b.signs);
  auto c = sample_gbm(512, 0.0625, 0.378, 0.9, 9002);
  CHECK(a.signs != c.signs);
}

TEST_CASE("weierstrass partial sums") {
  auto w = weierstrass(3.0, 2.0, 30);
  CHECK(w(0.0) == 0.0);
  CHECK(w.smoothness() == Smoothness::C0);
  REQUIRE(w.holder_exponent().has_value());
  CHECK(*w.holder_exponent() == doctest::Approx(std::log(2.0) / std::log(3.0)));

  // pointwise geometric tail between truncation depths K and K+10
  auto wk = weierstrass(3.0, 2.0, 12);
  auto wk10 = weierstrass(3.0, 2.0, 22);
  double bound = std::pow(2.0, -12) / (2.0 - 1.0);
  rng::Stream st(3, 0);
  for (int i = 0; i < 500; ++i) {
    double x = 4.0 * st.next_unit() - 2.0;
    CHECK(std::abs(wk(x) - wk10(x)) <= bound * (1.0 + 1e-12));
  }
  CHECK_THROWS_AS(weierstrass(3.0, 1.0, 5), domain_error);
}

TEST_CASE("weierstrass grid exponent regression near log b / log a") {
  // two-point modulus at dyadic separations 2^-6 .. 2^-16 over random
  // anchors; the log-log slope estimates the Holder exponent
  auto w = weierstrass(3.0, 2.0, 30);
  double expect = std::log(2.0) / std::log(3.0);
  rng::Stream st(1, 0);
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int npts = 0;
  for (int j = 6; j <= 16; ++j) {
    double d = std::pow(2.0, -j);
    double sup = 0.0;
    for (int i = 0; i < 8000; ++i) {
      double x = 2.0 * st.next_unit();
      sup = std::max(sup, std::abs(w(x + d) - w(x)));
    }
    double lx = std::log(d), ly = std::log(sup);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    ++npts;
  }
  double slope = (npts * sxy - sx * sy) / (npts * sxx - sx * sx);
  CHECK(std::abs(slope - expect) < 0.05);
}

TEST_CASE("holder norm estimate: clamped identity, constants, C1 bound") {
  auto id01 = Observable::polynomial({0.0, 1.0}, Interval{0.0, 1.0});
  auto est = holder_norm_estimate(id01, 0.5, 1 << 12);
  CHECK(est.lower_estimate == doctest::Approx(1.0).epsilon(1e-9));

  auto c = Observable::constant(3.0);
  auto estc = holder_norm_estimate(c, 0.5, 1 << 12);
  CHECK(estc.lower_estimate == 0.0);

  auto b = Observable::bump(0.5);
  for (double alpha : {0.3, 0.5, 1.0}) {
    auto e = holder_norm_estimate(b, alpha, 1 << 12);
    REQUIRE(e.upper_bound.has_value());
    CHECK(e.lower_estimate <= *e.upper_bound);
  }
  CHECK_THROWS_AS(holder_norm_estimate(id01, 0.5, 100), argument_error);
  CHECK_THROWS_AS(holder_norm_estimate(Observable::square(), 0.5, 1 << 12), argument_error);
}

TEST_CASE("declared holder data dominates the measured modulus") {
  rng::Stream st(77, 0);
  std::vector<Observable> zoo;
  zoo.push_back(Observable::bump(0.4));
  zoo.push_back(Observable::gbm(sample_gbm(256, 0.0625, 0.378, 0.9, 5)));
  zoo.push_back(weierstrass(3.0, 2.0, 20));
  zoo.push_back(Observable::bump(0.7, -0.5, 0.8).scaled(2.0) + Observable::bump(0.3, 1.2, 0.4));
  for (const auto& phi : zoo) {
    REQUIRE(phi.holder_exponent().has_value());
    double alpha = *phi.holder_exponent();
    double cst = *phi.holder_constant();
    double domain_lo = -3.0, domain_hi = 3.0;
    for (int i = 0; i < 10000; ++i) {
      double x = domain_lo + (domain_hi - domain_lo) * st.next_unit();
      double y = domain_lo + (domain_hi - domain_lo) * st.next_unit();
      if (x == y) continue;
      double mod = std::abs(phi(x) - phi(y)) / std::pow(std::abs(x - y), alpha);
      CHECK(mod <= cst * (1.0 + 1e-9) + 1e-12);
    }
  }
}

TEST_CASE("observable algebra and capability errors") {
  auto x2 = Observable::square();
  CHECK(x2(3.0) == 9.0);
  CHECK(x2.deriv(3.0) == 6.0);
  CHECK(x2.deriv2(3.0) == 2.0);
  auto s = x2.scaled(-2.0);
  CHECK(s(3.0) == -18.0);
  auto w = weierstrass(3.0, 2.0, 5);
  CHECK_THROWS_AS(w.deriv(0.5), capability_error);
  auto combo = x2 + w;
  CHECK(combo.smoothness() == Smoothness::C0);
  CHECK(combo(1.0) == doctest::Approx(x2(1.0) + w(1.0)));
}

TEST_CASE("json round trip reproduces evaluations exactly") {
  std::vector<Observable> zoo;
  zoo.push_back(Observable::polynomial({1.0, -0.5, 2.0}, Interval{-1.0, 2.0}));
  zoo.push_back(Observable::bump(0.35, 0.4, 1.7).scaled(-1.5));
  zoo.push_back(Observable::gbm(sample_gbm(64, 0.0625, 0.378, 0.9, 123)));
  zoo.push_back(weierstrass(3.0, 2.0, 9));
  zoo.push_back(Observable::layer({Interval{0.2, 0.3}, Interval{0.5, 0.55}}, 0.01, 1, 4));
  zoo.push_back(zoo[1] + zoo[0].scaled(0.25));
  rng::Stream st(13, 0);
  for (const auto& phi : zoo) {
    auto text = observable_to_json(phi);
    auto back = observable_from_json(text);
    for (int i = 0; i < 300; ++i) {
      double x = 6.0 * st.next_unit() - 3.0;
      CHECK(phi(x) == back(x));
    }
    CHECK(phi.smoothness() == back.smoothness());
  }
}

}  // TEST_SUITE
