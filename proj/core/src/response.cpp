#include "bclab/response.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>

#include "bclab/detail/enumeration.hpp"
#include "bclab/errors.hpp"
#include "bclab/rng.hpp"

namespace bclab {

namespace {

void require_depth(int depth) {
  if (depth < 1) throw argument_error("depth must be positive");
  if (depth > kMaxEnumerationDepth)
    throw resource_error("exact enumeration capped at depth 26 (2^26 words)");
}

}  // namespace

// --- response ---------------------------------------------------------------------

ResponsePoint response(const Observable& phi, double lambda, const ResponseOptions& opt) {
  require_lambda(lambda);
  require_depth(opt.depth);
  if (opt.max_order < 0 || opt.max_order > 2)
    throw argument_error("response: max_order must be 0, 1 or 2");
  if (opt.max_order >= 1 && phi.smoothness() < Smoothness::C1)
    throw capability_error("response: h' requested on a C0 observable");
  if (opt.max_order >= 2 && phi.smoothness() < Smoothness::C2)
    throw capability_error("response: h'' requested on a sub-C2 observable");

  struct Acc {
    double h = 0.0, h1 = 0.0, h2 = 0.0;
  };
  auto combine = [](Acc a, Acc b) {
    if (!std::isfinite(b.h + b.h1 + b.h2)) throw numeric_error("non-finite observable values");
    return Acc{a.h + b.h, a.h1 + b.h1, a.h2 + b.h2};
  };
  Acc acc;
  if (opt.max_order == 0) {
    acc = detail::enumerate_reduce<0, Acc>(
        lambda, opt.depth, 0, 0, Acc{},
        [&](Acc& a, double x, double, double) { a.h += phi(x); }, combine);
  } else if (opt.max_order == 1) {
    acc = detail::enumerate_reduce<1, Acc>(
        lambda, opt.depth, 0, 0, Acc{},
        [&](Acc& a, double x, double x1, double) {
          a.h += phi(x);
          a.h1 += phi.deriv(x) * x1;
        },
        combine);
  } else {
    acc = detail::enumerate_reduce<2, Acc>(
        lambda, opt.depth, 0, 0, Acc{},
        [&](Acc& a, double x, double x1, double x2) {
          a.h += phi(x);
          double d1 = phi.deriv(x);
          a.h1 += d1 * x1;
          a.h2 += phi.deriv2(x) * x1 * x1 + d1 * x2;
        },
        combine);
  }

  const double scale = std::ldexp(1.0, -opt.depth);
  const int D = opt.depth;
  const double tail_x = geometric_tail(lambda, D + 1);
  const double tail_x1 = geometric_tail_d1(lambda, D);
  const double tail_x2 = geometric_tail_d2(lambda, D);
  const double B1 = geometric_tail_d1(lambda, 1);  // sup |X'| <= 1/(1-lambda)^2
  const double B2 = geometric_tail_d2(lambda, 2);  // sup |X''|
  const double r = support_radius(lambda) + tail_x;
  const Interval K{-r, r};

  ResponsePoint pt;
  pt.lambda = lambda;
  pt.h.value = acc.h * scale;
  pt.h.error_bound = detail::truncation_error_bound(phi, lambda, D);
  pt.h.method = Method::exact_enumeration;
  pt.h.samples_or_depth = D;
  if (opt.max_order >= 1) {
    ExpectationResult h1;
    h1.value = acc.h1 * scale;
    h1.error_bound =
        phi.deriv2_bound_on(K) * tail_x * B1 + phi.deriv_bound_on(K) * tail_x1;
    h1.method = Method::exact_enumeration;
    h1.samples_or_depth = D;
    pt.h_prime = h1;
  }
  if (opt.max_order >= 2) {
    ExpectationResult h2;
    h2.value = acc.h2 * scale;
    h2.error_bound = phi.deriv3_bound_on(K) * tail_x * B1 * B1 +
                     phi.deriv2_bound_on(K) * (tail_x1 * (2.0 * B1 + tail_x1) + tail_x * B2) +
                     phi.deriv_bound_on(K) * tail_x2;
    h2.method = Method::exact_enumeration;
    h2.samples_or_depth = D;
    pt.h_second = h2;
  }
  return pt;
}

// --- difference quotients ----------------------------------------------------------

double diff_quotient(const Observable& phi, double lambda, double eps, int depth) {
  if (eps == 0.0) throw argument_error("diff_quotient: eps must be nonzero");
  require_lambda(lambda);
  require_lambda(lambda + eps);
  require_depth(depth);
  struct Acc {
    double d = 0.0;
  };
  Acc acc = detail::enumerate_reduce_pair<0, Acc>(
      lambda, lambda + eps, depth, Acc{},
      [&](Acc& a, double xa, double, double xb, double) { a.d += phi(xb) - phi(xa); },
      [](Acc a, Acc b) {
        if (!std::isfinite(b.d)) throw numeric_error("non-finite observable values");
        return Acc{a.d + b.d};
      });
  return acc.d * std::ldexp(1.0, -depth) / eps;
}

Observable LayerStack::combined() const {
  std::vector<Observable::Component> cs;
  for (const auto& l : layers)
    for (const auto& c : l.components()) cs.push_back(c);
  return Observable(std::move(cs));
}

std::vector<ScanRow> blowup_scan(const LayerStack& stack, double lambda0,
                                 const std::vector<double>& eps_seq, int depth,
                                 const AdaptedPairConfig* cfg) {
  require_lambda(lambda0);
  require_depth(depth);
  const std::size_t L = stack.layers.size();
  if (L == 0) throw argument_error("blowup_scan: empty layer stack");
  if (eps_seq.empty() || eps_seq.size() > L)
    throw argument_error("blowup_scan: eps ladder must have between 1 and #layers entries");
  for (std::size_t i = 0; i + 1 < eps_seq.size(); ++i)
    if (!(eps_seq[i] > eps_seq[i + 1] && eps_seq[i + 1] > 0.0))
      throw argument_error("blowup_scan: eps ladder must be strictly decreasing and positive");

  Observable combined = stack.combined();
  std::vector<ScanRow> rows;
  for (std::size_t ki = 0; ki < eps_seq.size(); ++ki) {
    double eps = eps_seq[ki];
    require_lambda(lambda0 + eps);
    struct Acc {
      std::vector<double> d;  // per layer + combined at the end
    };
    Acc init;
    init.d.assign(L + 1, 0.0);
    Acc acc = detail::enumerate_reduce_pair<0, Acc>(
        lambda0, lambda0 + eps, depth, init,
        [&](Acc& a, double xa, double, double xb, double) {
          for (std::size_t l = 0; l < L; ++l)
            a.d[l] += stack.layers[l](xb) - stack.layers[l](xa);
          a.d[L] += combined(xb) - combined(xa);
        },
        [](Acc a, Acc b) {
          for (std::size_t i = 0; i < a.d.size(); ++i) a.d[i] += b.d[i];
          return a;
        });
    const double scale = std::ldexp(1.0, -depth) / eps;
    ScanRow row;
    row.k = static_cast<int>(ki) + 1;
    row.scale = ki < stack.scales.size() ? stack.scales[ki] : 0.0;
    row.eps = eps;
    for (std::size_t l = 0; l < L; ++l) {
      double q = acc.d[l] * scale;
      if (l + 1 < static_cast<std::size_t>(row.k)) row.S += q;
      else if (l + 1 == static_cast<std::size_t>(row.k)) row.T += q;
      else row.R += q;
    }
    row.quotient = acc.d[L] * scale;
    if (cfg != nullptr) {
      double lam_hi = lambda0 + eps_seq.front();
      double C = geometric_tail_d1(lam_hi, 1);  // sup |X'| on the scan window
      double sb = 0.0, rb = 0.0;
      for (std::size_t l = 0; l < stack.scales.size(); ++l) {
        double N = stack.scales[l];
        if (l + 1 < static_cast<std::size_t>(row.k)) sb += std::pow(N, cfg->theta1);
        if (l + 1 > static_cast<std::size_t>(row.k)) rb += std::pow(N, -cfg->beta);
      }
      row.s_bound = C * sb;
      row.t_floor = 0.99 * std::pow(stack.scales[static_cast<std::size_t>(row.k - 1)], cfg->beta);
      row.r_bound = 2.0 / eps * rb;
    }
    rows.push_back(row);
  }
  return rows;
}

PerturbReport genericity_perturbation(const Observable& f, const Observable& phi, double kappa,
                                      const std::vector<double>& eps_seq, double lambda0,
                                      int depth) {
  if (kappa < 0.0) throw argument_error("genericity_perturbation: kappa must be >= 0");
  Observable combined = f + phi.scaled(kappa);
  PerturbReport rep;
  int last_certified = -1;
  for (std::size_t i = 0; i < eps_seq.size(); ++i) {
    PerturbRow row;
    row.n = static_cast<int>(i) + 1;
    row.eps = eps_seq[i];
    row.q_phi = diff_quotient(phi, lambda0, row.eps, depth);
    row.q_combined = diff_quotient(combined, lambda0, row.eps, depth);
    row.certified = std::abs(row.q_phi) > static_cast<double>(row.n) * row.n;
    row.lower_bound = kappa * row.n * row.n - row.n;
    if (row.certified) last_certified = static_cast<int>(i);
    rep.rows.push_back(row);
  }
  if (last_certified >= 0) {
    const auto& r = rep.rows[static_cast<std::size_t>(last_certified)];
    rep.verdict = std::abs(r.q_combined) > r.n;
  }
  return rep;
}

// --- adapted pairs ------------------------------------------------------------------

double two_u(double alpha, double theta1, double beta) {
  return 1.0 - 2.0 * theta1 - 2.0 * (alpha * theta1 + beta) / (1.0 - alpha);
}

double neg_tau(double delta, double theta2) {
  return theta2 + std::log(2.0) / std::log(0.5 - delta);
}

double AdaptedPairConfig::N_at(int k) const {
  if (k < 1 || k > built()) throw argument_error("adapted pair: index out of range");
  return std::pow(10.0, log10_N[static_cast<std::size_t>(k - 1)]);
}

double AdaptedPairConfig::eps_at(int k) const {
  if (k < 1 || k > built()) throw argument_error("adapted pair: index out of range");
  return std::pow(10.0, log10_eps[static_cast<std::size_t>(k - 1)]);
}

AdaptedPairConfig adapted_params(double delta, double alpha) {
  if (!(delta > 0.0 && delta < 0.25)) throw domain_error("adapted_params: delta in (0,1/4)");
  if (!(alpha > 0.0 && alpha < 1.0)) throw domain_error("adapted_params: alpha in (0,1)");
  AdaptedPairConfig cfg;
  cfg.delta = delta;
  cfg.alpha = alpha;
  cfg.theta1 = (1.0 - alpha) / 8.0;
  cfg.beta = cfg.theta1 / 2.0;
  double log_base = std::log(2.0) / std::log(0.5 - delta);  // log_{1/2-delta} 2, negative
  cfg.theta2 = -log_base / 2.0;
  cfg.tau = -neg_tau(delta, cfg.theta2);
  cfg.u = 0.5 * two_u(alpha, cfg.theta1, cfg.beta);
  cfg.rho_prime = 0.5 * (1.0 / (2.0 * delta) + 1.0) *
                  std::pow(delta, std::log2(2.0 / delta + 4.0) + 1.0);
  cfg.rho = 1.0 - 0.01 * delta * cfg.rho_prime / (2.0 - cfg.rho_prime);
  cfg.g_c2_norm = make_bump(cfg.rho).c2_norm;
  return cfg;
}

namespace {

double logsumexp10(const std::vector<double>& xs) {
  double m = -std::numeric_limits<double>::infinity();
  for (double x : xs) m = std::max(m, x);
  if (!std::isfinite(m)) return m;
  double s = 0.0;
  for (double x : xs) s += std::pow(10.0, x - m);
  return m + std::log10(s);
}

double log10_eps_rule(const AdaptedPairConfig& cfg, double log10_n) {
  return std::log10(1.0 / 500.0) + (cfg.beta - 2.0 - cfg.theta1) * log10_n -
         std::log10(cfg.g_c2_norm);
}

}  // namespace

AdaptedPairConfig adapted_pair_build(AdaptedPairConfig cfg, int k_max) {
  if (k_max < 1) throw argument_error("adapted_pair_build: k_max must be >= 1");
  if (k_max > 6)
    throw range_error("adapted_pair_build: k beyond 6 exceeds the log-scale dynamic range", 6);
  cfg.log10_N.clear();
  cfg.log10_eps.clear();
  cfg.log10_N.push_back(1.0);  // N_1 = 10
  cfg.log10_eps.push_back(log10_eps_rule(cfg, 1.0));
  const double log10_2 = std::log10(2.0);
  const double gtail = 1.0 / (1.0 - std::pow(2.0, -cfg.beta));
  for (int k = 2; k <= k_max; ++k) {
    std::vector<double> terms;
    for (double ln : cfg.log10_N) terms.push_back(cfg.theta1 * ln);
    double b1 = logsumexp10(terms) * 2.0 / cfg.beta;            // sum N_l^t1 < N_k^{b/2}
    double b2 = log10_2 + cfg.log10_N.back();                   // N_k > 2 N_{k-1}
    double b3 = (2.0 + std::log10(gtail) - cfg.log10_eps.back()) / cfg.beta;
    double L = std::max({b1, b2, b3}) + log10_2;                // doubling margin
    cfg.log10_N.push_back(L);
    cfg.log10_eps.push_back(log10_eps_rule(cfg, L));
  }
  return cfg;
}

VerifyReport adapted_pair_verify(const AdaptedPairConfig& cfg, const VerifyOptions& opts) {
  if (cfg.built() < 1) throw argument_error("adapted_pair_verify: empty sequences");
  VerifyReport rep;
  const int K = cfg.built();

  rep.cond2_ok = true;
  for (int n = 2; n <= K; ++n) {
    std::vector<double> terms;
    for (int l = 1; l < n; ++l)
      terms.push_back(cfg.theta1 * cfg.log10_N[static_cast<std::size_t>(l - 1)]);
    if (!(logsumexp10(terms) <
          0.5 * cfg.beta * cfg.log10_N[static_cast<std::size_t>(n - 1)]))
      rep.cond2_ok = false;
  }
  const double gtail_log = std::log10(1.0 / (1.0 - std::pow(2.0, -cfg.beta)));
  rep.cond4_ok = true;
  for (int n = 1; n < K; ++n) {
    double lhs = -cfg.beta * cfg.log10_N[static_cast<std::size_t>(n)] + gtail_log;
    double rhs = cfg.log10_eps[static_cast<std::size_t>(n - 1)] - 2.0;
    if (!(lhs <= rhs)) rep.cond4_ok = false;
  }
  rep.eps_rule_ok = true;
  for (int k = 1; k <= K; ++k) {
    double want = log10_eps_rule(cfg, cfg.log10_N[static_cast<std::size_t>(k - 1)]);
    if (std::abs(cfg.log10_eps[static_cast<std::size_t>(k - 1)] - want) > 1e-9)
      rep.eps_rule_ok = false;
  }

  double lambda = opts.lambda > 0.0 ? opts.lambda : 0.5 * (cfg.delta + (0.5 - cfg.delta));
  for (int k = 1; k <= K; ++k) {
    double nk = cfg.N_at(k);
    if (!(nk <= static_cast<double>(opts.feasible_N_cap))) continue;
    auto st = derivative_event_stats(static_cast<int>(std::llround(nk)), cfg, lambda, opts.seeds,
                                     opts.seed + static_cast<std::uint64_t>(k), opts.depth);
    rep.checked_k.push_back(k);
    rep.event_frequency.push_back(st.joint_event_frequency);
  }
  rep.surrogate_N = opts.surrogate_N;
  bool trend = true;
  double prev = -1.0;
  for (std::size_t i = 0; i < opts.surrogate_N.size(); ++i) {
    auto st = derivative_event_stats(opts.surrogate_N[i], cfg, lambda, opts.seeds,
                                     opts.seed + 100 + static_cast<std::uint64_t>(i), opts.depth);
    rep.surrogate_norm_freq.push_back(st.norm_event_frequency);
    rep.surrogate_event_freq.push_back(st.event_frequency);
    if (st.norm_event_frequency + 0.02 < prev) trend = false;
    prev = st.norm_event_frequency;
  }
  rep.surrogate_trend_ok = trend && !rep.surrogate_norm_freq.empty() &&
                           rep.surrogate_norm_freq.back() >= 0.9;
  return rep;
}

// --- D_l statistics -------------------------------------------------------------------

namespace {

// smallest n0 >= 10 with sum_{n>=n0}(1/2-d)^n < 1/(4(1-d)) and
// sum_{n>=n0} n (1/2-d)^{n-1} < 1/2
int n0_of_delta(double delta) {
  double t = 0.5 - delta;
  int n0 = 10;
  for (;; ++n0) {
    double s0 = std::pow(t, n0) / (1.0 - t);
    double s1 = geometric_tail_d1(t, n0);
    if (s0 < 1.0 / (4.0 * (1.0 - delta)) && s1 < 0.5) return n0;
    if (n0 > 100000) throw numeric_error("n0 search failed");
  }
}

}  // namespace

DerivativeEventStats derivative_event_stats(int N, const AdaptedPairConfig& cfg, double lambda,
                                            int n_seeds, std::uint64_t seed, int depth) {
  if (N < 2) throw argument_error("derivative_event_stats: N must be >= 2");
  if (n_seeds < 2) throw argument_error("derivative_event_stats: need at least 2 seeds");
  require_depth(depth);
  if (!(lambda > cfg.delta && lambda < 0.5 - cfg.delta))
    throw domain_error("derivative_event_stats: lambda must lie in (delta, 1/2-delta)");

  // cylinder level m: 2 lambda^m (1-2l)/(1-l) < 2/N <= 2 lambda^{m-1} (1-2l)/(1-l)
  double T = (1.0 - lambda) / (static_cast<double>(N) * (1.0 - 2.0 * lambda));
  double r = std::log(T) / std::log(lambda);
  int m = static_cast<int>(std::floor(r)) + 1;
  if (m < 1) m = 1;
  if (m >= depth)
    throw resource_error("derivative_event_stats: cylinder level exceeds the enumeration depth");

  const double h_abs = std::pow(static_cast<double>(N), cfg.theta1);
  const double cell = 2.0 / N;
  const BumpProfile bump = make_bump(cfg.rho);

  // Deterministic coefficients c[l][j] = 2^{-depth} sum_{X in C_l cap I_j} g(u) X';
  // D_l is then linear in the cell signs, so the per-seed statistics cost
  // O(L) per cylinder instead of a fresh enumeration.
  const std::int64_t n_cyl = std::int64_t(1) << m;
  std::vector<std::vector<double>> coef(static_cast<std::size_t>(n_cyl));
  std::vector<int> jbase(static_cast<std::size_t>(n_cyl), 0);
  const double scale = std::ldexp(1.0, -depth);

  detail::run_chunks(n_cyl, [&](std::int64_t l) {
    Cylinder cyl = cylinder_of(lambda, SignWord::from_bits(static_cast<std::uint64_t>(l), m));
    int j0 = std::max(0, static_cast<int>(std::floor(cyl.interval.lo / cell)));
    int j1 = std::min(N - 1, static_cast<int>(std::floor(cyl.interval.hi / cell)) + 1);
    if (j1 < j0) return;  // cylinder entirely outside [0,2]
    int width = j1 - j0 + 1;
    struct Acc {
      std::vector<double> c;
    };
    Acc init;
    init.c.assign(static_cast<std::size_t>(width), 0.0);
    Acc acc = detail::enumerate_reduce<1, Acc>(
        lambda, depth, static_cast<std::uint64_t>(l), m, init,
        [&](Acc& a, double x, double x1, double) {
          if (x < 0.0 || x >= 2.0) return;
          int j = static_cast<int>(x / cell);
          double u = x * N - 2.0 * j;  // cell mapped onto [0,2]
          double g = bump.g(u);
          if (g != 0.0 && j >= j0 && j <= j1)
            a.c[static_cast<std::size_t>(j - j0)] += g * x1;
        },
        [](Acc a, Acc b) {
          for (std::size_t i = 0; i < a.c.size(); ++i) a.c[i] += b.c[i];
          return a;
        });
    bool nonzero = false;
    for (double v : acc.c)
      if (v != 0.0) nonzero = true;
    if (!nonzero) return;
    for (auto& v : acc.c) v *= scale;
    coef[static_cast<std::size_t>(l)] = std::move(acc.c);
    jbase[static_cast<std::size_t>(l)] = j0;
  });

  const double p = std::pow(static_cast<double>(N), -cfg.theta2);
  const double n_beta = std::pow(static_cast<double>(N), cfg.beta);
  const double n_beta_inv = std::pow(static_cast<double>(N), -cfg.beta);
  const double ig = 2.0 * cfg.rho + 2.0 * (1.0 - cfg.rho) / 3.0;
  const double cell_step = std::pow(static_cast<double>(N), cfg.theta1 - 1.0) * ig;

  std::vector<double> sum_d(static_cast<std::size_t>(n_cyl), 0.0);
  std::vector<double> sum_d2(static_cast<std::size_t>(n_cyl), 0.0);
  std::vector<double> sum_abs3(static_cast<std::size_t>(n_cyl), 0.0);
  std::vector<double> totals(static_cast<std::size_t>(n_seeds), 0.0);
  int event_count = 0, norm_count = 0, joint_count = 0;
  std::vector<std::int8_t> signs(static_cast<std::size_t>(N));

  for (int s = 0; s < n_seeds; ++s) {
    for (int j = 0; j < N; ++j) {
      double u = rng::uniform(seed, static_cast<std::uint64_t>(s) + 1,
                              static_cast<std::uint64_t>(j));
      signs[static_cast<std::size_t>(j)] = u < p ? 1 : (u < 2.0 * p ? -1 : 0);
    }
    double total = 0.0;
    for (std::int64_t l = 0; l < n_cyl; ++l) {
      const auto& c = coef[static_cast<std::size_t>(l)];
      if (c.empty()) continue;
      double d = 0.0;
      for (std::size_t o = 0; o < c.size(); ++o) {
        int j = jbase[static_cast<std::size_t>(l)] + static_cast<int>(o);
        d += signs[static_cast<std::size_t>(j)] * c[o];
      }
      d *= h_abs;
      sum_d[static_cast<std::size_t>(l)] += d;
      sum_d2[static_cast<std::size_t>(l)] += d * d;
      sum_abs3[static_cast<std::size_t>(l)] += std::abs(d) * d * d;
      total += d;
    }
    totals[static_cast<std::size_t>(s)] = total;
    bool deriv_ok = std::abs(total) >= n_beta;
    // exact norm data from the boundary prefix walk
    double prefix = 0.0, supphi = 0.0;
    bool any = false;
    for (int j = 0; j < N; ++j) {
      std::int8_t sj = signs[static_cast<std::size_t>(j)];
      if (sj != 0) any = true;
      prefix += sj * cell_step;
      supphi = std::max(supphi, std::abs(prefix));
    }
    double supd = any ? h_abs : 0.0;
    double norm_upper =
        2.0 * std::pow(supd, cfg.alpha) * std::pow(supphi, 1.0 - cfg.alpha) + supphi;
    bool norm_ok = norm_upper <= n_beta_inv;
    if (deriv_ok) ++event_count;
    if (norm_ok) ++norm_count;
    if (deriv_ok && norm_ok) ++joint_count;
  }

  DerivativeEventStats st;
  st.N = N;
  st.m = m;
  st.n0 = n0_of_delta(cfg.delta);
  // variance-bearing group: all-plus prefixes keep X > 0 and X' > 1/2; a
  // length-5 prefix already guarantees that for lambda < 2^{-1/3}, and gives
  // 2^{m-5} cylinders to average over
  st.right_prefix = std::min(m, std::min(st.n0, 5));
  st.seeds = n_seeds;

  const double inv_s = 1.0 / n_seeds;
  const std::uint64_t right_mask = (std::uint64_t(1) << st.right_prefix) - 1;
  double max_t = 0.0, var_right = 0.0, third_right = 0.0, sum_third_all = 0.0;
  double max_var_right = 0.0;
  std::int64_t right_count = 0;
  for (std::int64_t l = 0; l < n_cyl; ++l) {
    if (coef[static_cast<std::size_t>(l)].empty()) continue;
    double mean = sum_d[static_cast<std::size_t>(l)] * inv_s;
    double var = std::max(0.0, sum_d2[static_cast<std::size_t>(l)] * inv_s - mean * mean);
    double third = sum_abs3[static_cast<std::size_t>(l)] * inv_s;
    double se = std::sqrt(var * inv_s);
    if (se > 0.0) max_t = std::max(max_t, std::abs(mean) / se);
    sum_third_all += third;
    if ((static_cast<std::uint64_t>(l) & right_mask) == right_mask) {
      var_right += var;
      third_right += third;
      max_var_right = std::max(max_var_right, var);
      ++right_count;
    }
  }
  if (right_count > 0) {
    st.avg_var_right = var_right / static_cast<double>(right_count);
    st.avg_third_right = third_right / static_cast<double>(right_count);
  }
  st.avg_var_right_norm = st.avg_var_right * std::ldexp(1.0, 2 * m);
  st.max_var_right_norm = max_var_right * std::ldexp(1.0, 2 * m);
  st.max_mean_over_se = max_t;

  double tmean = 0.0, tvar = 0.0;
  for (double t : totals) tmean += t;
  tmean *= inv_s;
  for (double t : totals) tvar += (t - tmean) * (t - tmean);
  tvar *= inv_s;
  st.be_ratio = tvar > 0.0 ? sum_third_all / std::pow(tvar, 1.5) : 0.0;
  st.event_frequency = static_cast<double>(event_count) * inv_s;
  st.norm_event_frequency = static_cast<double>(norm_count) * inv_s;
  st.joint_event_frequency = static_cast<double>(joint_count) * inv_s;
  return st;
}

double loglog_slope(const std::vector<double>& xs, const std::vector<double>& ys) {
  if (xs.size() != ys.size() || xs.size() < 2) throw argument_error("loglog_slope: bad input");
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  double n = static_cast<double>(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    double lx = std::log(xs[i]), ly = std::log(ys[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

// --- concentration audits ----------------------------------------------------------

namespace {

// log of C(n,k) via lgamma
double log_choose(int n, int k) {
  return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

// P(Bin(n,1/2) >= k0)
double binom_upper_tail(int n, int k0) {
  if (k0 <= 0) return 1.0;
  if (k0 > n) return 0.0;
  double s = 0.0;
  for (int k = k0; k <= n; ++k) s += std::exp(log_choose(n, k) - n * std::log(2.0));
  return s;
}

}  // namespace

AzumaReport azuma_audit(const AzumaParams& p, std::uint64_t seed) {
  if (p.steps < 1 || p.steps > 4096) throw argument_error("azuma_audit: steps in [1,4096]");
  if (p.trials < 1000) throw argument_error("azuma_audit: need at least 1000 trials");
  const int words = (p.steps + 63) / 64;
  const int rem = p.steps - 64 * (words - 1);
  const std::uint64_t last_mask = rem == 64 ? ~std::uint64_t(0) : ((std::uint64_t(1) << rem) - 1);

  const std::int64_t chunk = 1 << 14;
  const std::int64_t n_chunks = (p.trials + chunk - 1) / chunk;
  std::int64_t hits = chunked_reduce<std::int64_t>(
      n_chunks, 0,
      [&](std::int64_t c) {
        std::int64_t lo = c * chunk, hi = std::min(p.trials, lo + chunk);
        std::int64_t h = 0;
        for (std::int64_t t = lo; t < hi; ++t) {
          int plus = 0;
          for (int w = 0; w < words; ++w) {
            std::uint64_t bits = rng::at(seed, 3, static_cast<std::uint64_t>(t * words + w));
            if (w == words - 1) bits &= last_mask;
            plus += std::popcount(bits);
          }
          int s = 2 * plus - p.steps;
          if (std::abs(s) >= p.threshold) ++h;
        }
        return h;
      },
      [](std::int64_t a, std::int64_t b) { return a + b; });

  AzumaReport rep;
  double e2 = p.threshold * p.threshold;
  rep.printed_bound = 2.0 * std::exp(-e2 / p.steps);
  rep.classical_bound = 2.0 * std::exp(-e2 / (2.0 * p.steps));
  rep.empirical = static_cast<double>(hits) / static_cast<double>(p.trials);
  int k0 = static_cast<int>(std::ceil((p.steps + p.threshold) / 2.0));
  double one_sided = binom_upper_tail(p.steps, k0);
  // |S| >= eps is two symmetric tails (disjoint for eps > 0)
  rep.exact_two_sided = p.threshold > 0.0 ? std::min(1.0, 2.0 * one_sided) : 1.0;
  rep.binom_sigma = std::sqrt(rep.exact_two_sided * (1.0 - rep.exact_two_sided) /
                              static_cast<double>(p.trials));
  rep.printed_holds = rep.empirical <= rep.printed_bound;
  rep.classical_holds = rep.empirical <= rep.classical_bound;
  rep.exact_matches = std::abs(rep.empirical - rep.exact_two_sided) <= 3.0 * rep.binom_sigma +
                                                                           1e-12;
  return rep;
}

BerryEsseenReport berry_esseen_audit(const BerryEsseenParams& p, std::uint64_t seed) {
  if (p.summands < 1 || p.summands > 4096)
    throw argument_error("berry_esseen_audit: summands in [1,4096]");
  if (p.trials < 1000) throw argument_error("berry_esseen_audit: need at least 1000 trials");
  const int n = p.summands;
  const int words = (n + 63) / 64;
  const int rem = n - 64 * (words - 1);
  const std::uint64_t last_mask = rem == 64 ? ~std::uint64_t(0) : ((std::uint64_t(1) << rem) - 1);

  // S in {-n, -n+2, ..., n}: histogram over (S+n)/2 in [0, n]
  std::vector<std::int64_t> hist(static_cast<std::size_t>(n) + 1, 0);
  for (std::int64_t t = 0; t < p.trials; ++t) {
    int plus = 0;
    for (int w = 0; w < words; ++w) {
      std::uint64_t bits = rng::at(seed, 4, static_cast<std::uint64_t>(t * words + w));
      if (w == words - 1) bits &= last_mask;
      plus += std::popcount(bits);
    }
    ++hist[static_cast<std::size_t>(plus)];
  }
  std::vector<double> prefix(hist.size() + 1, 0.0);
  for (std::size_t i = 0; i < hist.size(); ++i)
    prefix[i + 1] = prefix[i] + static_cast<double>(hist[i]) / static_cast<double>(p.trials);

  auto empirical_interval = [&](double a, double b) {
    // P(a <= S <= b) over the lattice S = 2k - n
    int klo = static_cast<int>(std::ceil((a + n) / 2.0));
    int khi = static_cast<int>(std::floor((b + n) / 2.0));
    klo = std::max(klo, 0);
    khi = std::min(khi, n);
    if (khi < klo) return 0.0;
    return prefix[static_cast<std::size_t>(khi) + 1] - prefix[static_cast<std::size_t>(klo)];
  };
  double sigma = std::sqrt(static_cast<double>(n));
  auto gauss_interval = [&](double a, double b) {
    auto cdf = [&](double x) { return 0.5 * std::erfc(-x / (sigma * std::sqrt(2.0))); };
    return cdf(b) - cdf(a);
  };

  double sup = 0.0;
  for (int i = 0; i < p.intervals; ++i) {
    double u = (rng::uniform(seed, 5, static_cast<std::uint64_t>(2 * i)) * 2.0 - 1.0) * 4.0 *
               sigma;
    double v = (rng::uniform(seed, 5, static_cast<std::uint64_t>(2 * i + 1)) * 2.0 - 1.0) * 4.0 *
               sigma;
    if (u > v) std::swap(u, v);
    sup = std::max(sup, std::abs(empirical_interval(u, v) - gauss_interval(u, v)));
  }
  BerryEsseenReport rep;
  rep.bound = p.c * static_cast<double>(n) / std::pow(static_cast<double>(n), 1.5);
  rep.sup_discrepancy = sup;
  rep.holds = sup <= rep.bound;
  return rep;
}

}  // namespace bclab
