#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "bclab/measure.hpp"
#include "bclab/observable.hpp"

namespace bclab {

struct ResponsePoint {
  double lambda = 0.0;
  ExpectationResult h;
  std::optional<ExpectationResult> h_prime;   // E[phi'(X) X']
  std::optional<ExpectationResult> h_second;  // E[phi''(X) X'^2 + phi'(X) X'']
};

struct ResponseOptions {
  int depth = 20;
  int max_order = 0;  // 0: h only, 1: + h', 2: + h''
};

// Exact-enumeration response point; requesting a derivative order above the
// observable's smoothness class is a capability error.
ResponsePoint response(const Observable& phi, double lambda, const ResponseOptions& opt = {});

// (h(lambda+eps) - h(lambda)) / eps with both endpoints evaluated on the same
// truncated word set (common coding), so the small difference is formed per
// word before averaging.
double diff_quotient(const Observable& phi, double lambda, double eps, int depth);

// An observable presented layer by layer, so difference quotients can be
// decomposed into earlier / matched / later contributions.
struct LayerStack {
  std::vector<Observable> layers;
  std::vector<double> scales;  // N_k for GBM stacks, 2^level for dimension-drop
  Observable combined() const;
};

struct AdaptedPairConfig;

struct ScanRow {
  int k = 0;
  double scale = 0.0;
  double eps = 0.0;
  double S = 0.0;         // layers below k
  double T = 0.0;         // layer k
  double R = 0.0;         // layers above k
  double quotient = 0.0;  // direct quotient of the combined observable
  // reported bounds when an adapted-pair config is supplied
  double s_bound = 0.0;
  double t_floor = 0.0;
  double r_bound = 0.0;
};

std::vector<ScanRow> blowup_scan(const LayerStack& stack, double lambda0,
                                 const std::vector<double>& eps_seq, int depth,
                                 const AdaptedPairConfig* cfg = nullptr);

struct PerturbRow {
  int n = 0;
  double eps = 0.0;
  double q_phi = 0.0;       // quotient of the blow-up observable
  bool certified = false;   // |q_phi| > n^2
  double q_combined = 0.0;  // quotient of f + kappa * phi
  double lower_bound = 0.0; // kappa n^2 - n
};

struct PerturbReport {
  std::vector<PerturbRow> rows;
  bool verdict = false;  // |q_combined| > n at the last certified step
};

PerturbReport genericity_perturbation(const Observable& f, const Observable& phi, double kappa,
                                      const std::vector<double>& eps_seq, double lambda0,
                                      int depth);

// --- adapted pairs ---------------------------------------------------------------

// Scale/step sequences are kept in log10: a conforming N_2 already has
// hundreds of decimal digits, so the raw values cannot live in a double.
struct AdaptedPairConfig {
  double delta = 0.0, alpha = 0.0;
  double theta1 = 0.0, theta2 = 0.0, beta = 0.0;
  double rho = 0.0, rho_prime = 0.0;
  double u = 0.0, tau = 0.0;
  double g_c2_norm = 0.0;
  std::vector<double> log10_N;
  std::vector<double> log10_eps;

  int built() const { return static_cast<int>(log10_N.size()); }
  double N_at(int k) const;    // 1-based; +inf when out of double range
  double eps_at(int k) const;  // 1-based; 0 when below double range
};

// Displayed feasibility quantities: 2u = 1 - 2 theta1 - 2 (alpha theta1 + beta)/(1-alpha)
// and -tau = theta2 + log_{1/2-delta} 2.
double two_u(double alpha, double theta1, double beta);
double neg_tau(double delta, double theta2);

AdaptedPairConfig adapted_params(double delta, double alpha);

// N_1 = 10, then alternately the smallest admissible N_k (three growth rules,
// doubling margin) and eps_k pinned to the Taylor-remainder bound
// (1/500) N_k^{beta-2-theta1} / ||g_rho||_{C2}.
AdaptedPairConfig adapted_pair_build(AdaptedPairConfig cfg, int k_max);

struct VerifyOptions {
  int seeds = 200;
  double lambda = 0.0;  // 0: midpoint of (delta, 1/2-delta)
  int depth = 18;
  int feasible_N_cap = 1 << 14;
  std::vector<int> surrogate_N = {1 << 8, 1 << 9, 1 << 10, 1 << 11, 1 << 12};
  std::uint64_t seed = 11;
};

struct VerifyReport {
  bool cond2_ok = false;      // sum_{l<n} N_l^theta1 < N_n^{beta/2}, exactly in logs
  bool cond4_ok = false;      // geometric-tail majorant of sum_{l>n} N_l^{-beta} <= eps_n/100
  bool eps_rule_ok = false;   // eps_k equals the Prop-4.8 bound at N_k
  std::vector<int> checked_k;            // ks with N_k small enough to sample
  std::vector<double> event_frequency;   // per checked k
  std::vector<int> surrogate_N;
  std::vector<double> surrogate_norm_freq;   // ||phi_N||_{C alpha} <= N^{-beta}
  std::vector<double> surrogate_event_freq;  // conjunction with the derivative event
  bool surrogate_trend_ok = false;  // norm frequency nondecreasing and >= 0.9 at the top
};

VerifyReport adapted_pair_verify(const AdaptedPairConfig& cfg, const VerifyOptions& opts = {});

// --- per-cylinder derivative statistics (the D_l machinery) ----------------------

struct DerivativeEventStats {
  int N = 0;
  int m = 0;             // cylinder level matched to the cell width
  int n0 = 0;            // rightmost-prefix length parameter
  int right_prefix = 0;  // actual prefix length used, min(m, n0)
  int seeds = 0;
  double max_mean_over_se = 0.0;  // max over cylinders of |mean D_l| / SE
  double avg_var_right = 0.0;     // average Var(D_l), rightmost group
  double avg_var_right_norm = 0.0;  // 2^{2m} * avg_var_right
  // 2^{2m} * max Var(D_l) over the rightmost group: the pigeonhole cylinder
  // whose mass concentrates in one cell, free of the cell-bracket sawtooth
  double max_var_right_norm = 0.0;
  double avg_third_right = 0.0;     // average E|D_l|^3, rightmost group
  double be_ratio = 0.0;            // sum_l E|D_l|^3 / Var(sum D_l)^{3/2}
  double event_frequency = 0.0;        // |sum_l D_l| >= N^beta
  double norm_event_frequency = 0.0;   // ||phi_N||_{C alpha} <= N^{-beta}
  double joint_event_frequency = 0.0;  // conjunction of the two
};

DerivativeEventStats derivative_event_stats(int N, const AdaptedPairConfig& cfg, double lambda,
                                            int n_seeds, std::uint64_t seed, int depth);

// least-squares slope of log(y) against log(x)
double loglog_slope(const std::vector<double>& xs, const std::vector<double>& ys);

// --- concentration audits ---------------------------------------------------------

struct AzumaParams {
  int steps = 100;
  double threshold = 30.0;
  std::int64_t trials = 1'000'000;
};

struct AzumaReport {
  double printed_bound = 0.0;    // 2 exp(-eps^2 / sum c_k^2), as printed
  double classical_bound = 0.0;  // 2 exp(-eps^2 / (2 sum c_k^2))
  double empirical = 0.0;
  double exact_two_sided = 0.0;  // binomial tail oracle
  double binom_sigma = 0.0;      // sampling sigma of the empirical frequency
  bool printed_holds = false;
  bool classical_holds = false;
  bool exact_matches = false;  // |empirical - exact| <= 3 sigma
};

AzumaReport azuma_audit(const AzumaParams& p, std::uint64_t seed);

struct BerryEsseenParams {
  int summands = 100;
  std::int64_t trials = 1'000'000;
  int intervals = 1000;
  double c = 1.0;  // the unspecified absolute constant; default 1
};

struct BerryEsseenReport {
  double bound = 0.0;  // c * sum gamma_i / Var^{3/2}
  double sup_discrepancy = 0.0;
  bool holds = false;
};

BerryEsseenReport berry_esseen_audit(const BerryEsseenParams& p, std::uint64_t seed);

}  // namespace bclab
