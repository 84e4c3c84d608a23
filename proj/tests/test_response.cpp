#include <doctest.h>

#include <cmath>
#include <vector>

#include "bclab/dimension_drop.hpp"
#include "bclab/errors.hpp"
#include "bclab/response.hpp"

using namespace bclab;

TEST_SUITE("response") {

TEST_CASE("response derivatives of the second moment match closed forms") {
  auto x2 = Observable::square();
  const double lambda = 0.4;
  auto pt = response(x2, lambda, {20, 2});
  double om = 1.0 - lambda * lambda;
  CHECK(pt.h.value == doctest::Approx(1.0 / om).epsilon(1e-9));
  REQUIRE(pt.h_prime.has_value());
  CHECK(pt.h_prime->value == doctest::Approx(2.0 * lambda / (om * om)).epsilon(1e-6));
  CHECK(pt.h_prime->value == doctest::Approx(1.1337868).epsilon(1e-6));
  REQUIRE(pt.h_second.has_value());
  double h2_closed = (2.0 + 6.0 * lambda * lambda) / (om * om * om);
  CHECK(pt.h_second->value == doctest::Approx(h2_closed).epsilon(1e-6));

  // second central difference of h
  double e = 1e-3;
  auto hp = response(x2, lambda + e, {20, 0});
  auto hm = response(x2, lambda - e, {20, 0});
  double fd2 = (hp.h.value - 2.0 * pt.h.value + hm.h.value) / (e * e);
  CHECK(std::abs(pt.h_second->value - fd2) / (1.0 + std::abs(fd2)) < 1e-3);

  // odd coordinate: h' vanishes termwise
  auto px = response(Observable::coordinate(), 0.52, {18, 1});
  CHECK(std::abs(px.h_prime->value) < 1e-12);
}

TEST_CASE("response rejects orders beyond the smoothness class") {
  auto w = weierstrass(3.0, 2.0, 8);
  CHECK_THROWS_AS(response(w, 0.4, ResponseOptions{14, 1}), capability_error);
  CHECK_NOTHROW(response(w, 0.4, ResponseOptions{14, 0}));
}

TEST_CASE("h' agrees with a finite difference of h for smooth bumps") {
  auto bump = Observable::bump(0.5, 0.0, 0.8);
  for (double lambda : {0.2, 0.45, 0.7}) {
    auto pt = response(bump, lambda, {18, 1});
    double e = 2e-4;
    double hp = response(bump, lambda + e, {18, 0}).h.value;
    double hm = response(bump, lambda - e, {18, 0}).h.value;
    double fd = (hp - hm) / (2.0 * e);
    CHECK(std::abs(pt.h_prime->value - fd) / (1.0 + std::abs(fd)) < 1e-4);
  }
}

TEST_CASE("diff_quotient converges to h' for smooth observables") {
  auto bump = Observable::bump(0.5, 0.0, 0.8);
  const double lambda = 0.42;
  auto pt = response(bump, lambda, {20, 1});
  double prev_err = 1e9;
  for (double e : {1e-2, 1e-3, 1e-4, 1e-5}) {
    double q = diff_quotient(bump, lambda, e, 20);
    double err = std::abs(q - pt.h_prime->value);
    CHECK(err < prev_err + 1e-9);
    CHECK(err < 10.0 * e);  // O(eps) as stated
    prev_err = err;
  }
  // the coordinate has zero quotient at every eps (sign symmetry)
  for (double e : {1e-2, 1e-4}) {
    CHECK(std::abs(diff_quotient(Observable::coordinate(), lambda, e, 16)) < 1e-12);
  }
  CHECK_THROWS_AS(diff_quotient(bump, lambda, 0.0, 10), argument_error);
}

TEST_CASE("dimension drop construction satisfies the per-layer bounds") {
  auto fam = dimension_drop_phi(0.35, 0.5, 3);
  CHECK(fam.m_lemma >= 10);
  CHECK(fam.m0 >= 1);
  CHECK(fam.beta > std::log(2.0) / (-std::log(0.35)));
  CHECK(fam.beta < 1.0);
  REQUIRE(fam.layers.size() == 3);
  double theta = fam.theta;
  for (std::size_t i = 0; i < fam.layers.size(); ++i) {
    int n = static_cast<int>(i) + 1;
    const auto& phi_n = fam.layers[i];
    // (a) sup norm bound 2 n^{-2theta/(1-theta)} n^{-2}
    double sup_bound = 2.0 * std::pow(n, -2.0 * theta / (1.0 - theta)) * std::pow(n, -2.0);
    CHECK(phi_n.sup_abs() < sup_bound);
    // (b) measured theta-Holder modulus <= 4 n^{-2}
    auto est = holder_norm_estimate(phi_n, theta, 1 << 12);
    CHECK(est.lower_estimate <= 4.0 * std::pow(n, -2.0));
    // layers are nonnegative and nondecreasing
    auto hint = *phi_n.support_hint();
    double prev = -1.0;
    for (int g = 0; g <= 200; ++g) {
      double x = hint.lo + (hint.hi - hint.lo) * g / 200.0;
      double v = phi_n(x);
      CHECK(v >= prev - 1e-15);
      CHECK(v >= 0.0);
      prev = v;
    }
    // integral of the derivative profile stays below twice the cover length
    double cover_len = 0.0;
    const auto& lp = std::get<Observable::LayerPart>(phi_n.components().front().part);
    for (const auto& iv : lp.intervals) cover_len += iv.length();
    CHECK(phi_n.sup_abs() < 2.0 * cover_len);
  }
  // strictly decreasing ladder inside the window
  CHECK(fam.eps_ladder.front() <= 0.7 * fam.eps0);
  for (std::size_t i = 0; i + 1 < fam.eps_ladder.size(); ++i)
    CHECK(fam.eps_ladder[i] > fam.eps_ladder[i + 1]);

  CHECK_THROWS_AS(dimension_drop_phi(0.55, 0.5, 2), domain_error);
  CHECK_THROWS_AS(dimension_drop_phi(0.35, 0.5, 40), resource_error);
}

TEST_CASE("dimension drop response derivatives are nonnegative and sizeable") {
  auto fam = dimension_drop_phi(0.35, 0.5, 2);
  double floor38 = 0.375 * std::ldexp(1.0, -fam.m0);
  for (const auto& layer : fam.layers) {
    auto pt = response(layer, 0.35, {18, 1});
    CHECK(pt.h_prime->value >= floor38);
  }
  // h'_n >= 0 at sampled lambdas inside the window
  for (int i = 0; i < 10; ++i) {
    double lambda = 0.35 - fam.eps0 + 2.0 * fam.eps0 * i / 9.0;
    auto pt = response(fam.layers[0], lambda, {18, 1});
    CHECK(pt.h_prime->value >= 0.0);
  }
}

TEST_CASE("blowup scan: decomposition identity and monotone ladder") {
  auto fam = dimension_drop_phi(0.35, 0.5, 3);
  LayerStack st;
  st.layers = fam.layers;
  for (int lvl : fam.levels) st.scales.push_back(std::ldexp(1.0, lvl));
  auto rows = blowup_scan(st, 0.35, fam.eps_ladder, 18);
  REQUIRE(rows.size() == 3);
  double prev = 0.0;
  for (const auto& r : rows) {
    CHECK(std::abs(r.S + r.T + r.R - r.quotient) < 1e-10);
    CHECK(r.quotient > prev);
    prev = r.quotient;
  }
  // ladder must be strictly decreasing
  CHECK_THROWS_AS(blowup_scan(st, 0.35, {1e-3, 1e-3}, 14), argument_error);
}

TEST_CASE("blowup scan on a GBM stack reports the section-4 bounds") {
  auto cfg = adapted_params(0.1, 0.5);
  LayerStack st;
  for (int n : {16, 64, 256}) {
    st.layers.push_back(Observable::gbm(sample_gbm(n, cfg.theta1, cfg.theta2, 0.9, 100 + n)));
    st.scales.push_back(n);
  }
  std::vector<double> eps{1e-3, 1e-4, 1e-5};
  auto rows = blowup_scan(st, 0.3, eps, 16, &cfg);
  for (const auto& r : rows) {
    CHECK(std::abs(r.S + r.T + r.R - r.quotient) < 1e-10);
    CHECK(std::abs(r.S) <= r.s_bound + 1e-12);
    CHECK(r.t_floor == doctest::Approx(0.99 * std::pow(r.scale, cfg.beta)));
    if (r.k < 3) CHECK(std::abs(r.R) <= r.r_bound + 1e-12);
  }
}

TEST_CASE("genericity perturbation: trivial cases and the quadratic floor") {
  auto fam = dimension_drop_phi(0.35, 0.5, 3);
  auto phi = fam.combined();
  auto f = Observable::bump(0.5, 0.0, 0.9);

  // kappa = 0 reproduces f's quotients bit for bit
  auto rep0 = genericity_perturbation(f, phi, 0.0, fam.eps_ladder, 0.35, 16);
  for (const auto& row : rep0.rows)
    CHECK(row.q_combined == diff_quotient(f, 0.35, row.eps, 16));

  // f = -phi with kappa = 1 collapses to the zero observable
  auto repz = genericity_perturbation(phi.scaled(-1.0), phi, 1.0, fam.eps_ladder, 0.35, 16);
  for (const auto& row : repz.rows) CHECK(row.q_combined == 0.0);

  // scale phi so its quotients certify the n^2 pattern, then check the floor
  std::vector<double> qs;
  for (double e : fam.eps_ladder) qs.push_back(diff_quotient(phi, 0.35, e, 16));
  double scale = 0.0;
  for (std::size_t i = 0; i < qs.size(); ++i) {
    double n = static_cast<double>(i) + 1.0;
    scale = std::max(scale, (n * n + 1.0) / std::abs(qs[i]));
  }
  auto big = phi.scaled(2.0 * scale);
  auto rep = genericity_perturbation(f, big, 0.1, fam.eps_ladder, 0.35, 16);
  CHECK(rep.verdict);
  for (const auto& row : rep.rows) {
    REQUIRE(row.certified);
    CHECK(std::abs(row.q_combined) >= row.lower_bound - 1e-9);
  }
}

TEST_CASE("adapted parameter arithmetic matches the displayed conditions") {
  CHECK(two_u(0.5, 0.1, 0.05) == doctest::Approx(0.4).epsilon(1e-12));
  CHECK(neg_tau(0.1, 0.5) == doctest::Approx(0.5 - 0.75647079).epsilon(1e-6));

  auto cfg = adapted_params(0.1, 0.5);
  CHECK(cfg.theta1 == doctest::Approx((1.0 - 0.5) / 8.0));
  CHECK(cfg.beta == doctest::Approx(cfg.theta1 / 2.0));
  CHECK(two_u(cfg.alpha, cfg.theta1, cfg.beta) > 0.0);
  CHECK(cfg.beta < cfg.theta1);
  CHECK(neg_tau(cfg.delta, cfg.theta2) < 0.0);
  CHECK(cfg.rho_prime == doctest::Approx(7.80e-6).epsilon(1e-2));
  CHECK(cfg.rho == doctest::Approx(1.0 - 3.90e-9).epsilon(1e-12));
  CHECK_THROWS_AS(adapted_params(0.3, 0.5), domain_error);
}

TEST_CASE("adapted pair build reaches k=3 and verifies exactly") {
  auto cfg = adapted_params(0.1, 0.5);
  auto built = adapted_pair_build(cfg, 3);
  REQUIRE(built.built() == 3);
  CHECK(built.N_at(1) == 10.0);
  // eps_k equals the Taylor-remainder rule at N_k by construction
  auto rep = adapted_pair_verify(built, {50, 0.3, 14, 1 << 12, {1 << 8, 1 << 10}, 3});
  CHECK(rep.cond2_ok);
  CHECK(rep.cond4_ok);
  CHECK(rep.eps_rule_ok);
  // growth rules hold with margin in log space
  CHECK(built.log10_N[1] > built.log10_N[0] + std::log10(2.0) - 1e-12);
  CHECK(built.log10_N[2] > built.log10_N[1] + std::log10(2.0) - 1e-12);

  CHECK_THROWS_AS(adapted_pair_build(cfg, 7), range_error);
  try {
    adapted_pair_build(cfg, 7);
  } catch (const range_error& e) {
    CHECK(e.largest_feasible == 6);
  }
}

TEST_CASE("derivative event statistics: centered means and scaling slope") {
  auto cfg = adapted_params(0.1, 0.5);
  auto st = derivative_event_stats(1024, cfg, 0.32, 200, 5, 18);
  CHECK(st.max_mean_over_se <= 4.0);
  CHECK(st.norm_event_frequency >= 0.9);
  CHECK(st.m >= 1);

  std::vector<double> Ns, Vs;
  for (int N : {256, 512, 1024, 2048}) {
    auto s = derivative_event_stats(N, cfg, 0.32, 400, 5, 18);
    Ns.push_back(N);
    Vs.push_back(s.avg_var_right_norm);
  }
  double slope = loglog_slope(Ns, Vs);
  double target = 2.0 * cfg.theta1 - cfg.theta2;
  CHECK(std::abs(slope - target) < 0.35 * std::abs(target));  // acceptance runs the pinned sweep

  CHECK_THROWS_AS(derivative_event_stats(1024, cfg, 0.45, 50, 1, 18), domain_error);
}

TEST_CASE("azuma audit: bounds, oracle, and the printed-bound regime") {
  // threshold 0: the bound is vacuous and every walk trips it
  auto z = azuma_audit({100, 0.0, 10'000}, 3);
  CHECK(z.printed_bound == 2.0);
  CHECK(z.empirical == 1.0);
  CHECK(z.printed_holds);

  // 1.5-sigma threshold: the printed (factor-2-free) bound genuinely holds
  auto mid = azuma_audit({100, 15.0, 200'000}, 4);
  CHECK(mid.printed_holds);
  CHECK(mid.classical_holds);
  CHECK(mid.exact_matches);

  // 3-sigma threshold: the classical bound holds and the binomial oracle
  // pins the empirical rate; the printed bound is surfaced as failing
  auto far = azuma_audit({100, 30.0, 1'000'000}, 5);
  CHECK(far.classical_holds);
  CHECK(far.exact_matches);
  CHECK_FALSE(far.printed_holds);
  CHECK(far.exact_two_sided > far.printed_bound);
}

TEST_CASE("berry-esseen audit with c = 1") {
  auto be = berry_esseen_audit({100, 1'000'000, 1000, 1.0}, 17);
  CHECK(be.bound == doctest::Approx(0.1));
  CHECK(be.holds);
  CHECK(be.sup_discrepancy > 0.0);
}

}  // TEST_SUITE
