#pragma once

#include <complex>
#include <optional>
#include <vector>

#include "bclab/measure.hpp"
#include "bclab/observable.hpp"
#include "bclab/symbolic.hpp"

namespace bclab {

// One sample of the transform mu_hat_lambda(xi) = prod_{n>=0} cos(lambda^n xi)
// or of its lambda-derivative series.
struct SpectralValue {
  double xi = 0.0;
  double value = 0.0;
  std::optional<double> dvalue_dlambda;
  double truncation_error = 0.0;
  int depth = 0;
  // The log-cosine tail model needs lambda^depth * |xi| <= 1; outside that the
  // value is reported with this flag cleared instead of a bound.
  bool tail_reliable = true;
};

SpectralValue mu_hat(double lambda, double xi, int depth);
SpectralValue mu_hat_dlambda(double lambda, double xi, int depth);

struct DerivBoundAudit {
  double lhs = 0.0;   // prod_{k != n} |cos(lambda^k xi)|
  double rhs = 0.0;   // sum of three squared transforms at lambda^3
  double margin = 0.0;
  bool holds = false;
};

// Checks prod_{k != n} |cos(lambda^k xi)| <= |mu_hat_{l^3}(xi)|^2 +
// |mu_hat_{l^3}(l xi)|^2 + |mu_hat_{l^3}(l^2 xi)|^2 up to 1e-12; the working
// depth is raised internally until both sides' tails are negligible.
DerivBoundAudit derivative_bound_audit(double lambda, double xi, int n, int depth);

struct SobolevEstimate {
  double gamma = 0.0;
  double xi_cutoff = 0.0;
  double lambda_a = 0.0, lambda_b = 0.0;
  double value = 0.0;
  double refinement_ratio = 0.0;  // value at cutoff over value at cutoff/2
};

// Tensor quadrature of  int_lambda int_|xi|<=cutoff |xi|^{2 gamma}
// |mu_hat_lambda(xi)|^2 dxi dlambda: trapezoid in xi, 64-point Gauss-Legendre
// in lambda (or a single lambda when a0 == b0). depth <= 0 picks the
// per-point depth rule automatically.
SobolevEstimate sobolev_integral(double gamma, double a0, double b0, double xi_cutoff,
                                 int depth = 0);

struct PhiHatValue {
  std::complex<double> value;
  double quad_error = 0.0;
  double subtracted_constant = 0.0;  // plateau value removed before transforming
};

// hat(phi)(xi) = int (phi(x) - c) e^{-i xi x} dx with c the common plateau
// value; exact for the piecewise-polynomial composites. Errors if the
// observable is not constant (with equal values) outside a bounded set.
PhiHatValue phi_hat(const Observable& phi, double xi);

// Independent quadrature route for the same transform: composite Simpson with
// step <= pi / (8 |xi|), refined once for an error estimate.
PhiHatValue phi_hat_quadrature(const Observable& phi, double xi);

// rho(t) = (1/2pi) int hat(phi)(xi) (d mu_hat/d lambda)|_{lambda=t} dxi,
// truncated at |xi| <= cutoff.
double rho_eval(double t, const Observable& phi, double xi_cutoff);

struct RhoCheckReport {
  double integral_rho = 0.0;   // int_a^b rho(t) dt
  double delta_h = 0.0;        // h(b) - h(a) from the measure engine
  double delta_h_error = 0.0;  // its error bound
  double discrepancy = 0.0;
  bool cutoff_ok = true;       // cleared when the cutoff tail bound exceeds the budget
};

// Reconstructs h(b) - h(a) from the spectral side and compares against the
// measure engine (paired Monte Carlo differencing at depth 128).
RhoCheckReport rho_integral_check(double a, double b, const Observable& phi, double xi_cutoff,
                                  std::int64_t mc_samples = 20'000'000, std::uint64_t seed = 7);

// h(b) - h(a) by common-random-words Monte Carlo at depth 128; the per-word
// difference is formed before averaging, so the estimator variance scales
// with |b - a| instead of with h itself.
ExpectationResult mc_delta_expectation(const Observable& phi, double lambda_a, double lambda_b,
                                       std::int64_t n, std::uint64_t seed);

// 64-point Gauss-Legendre nodes/weights on [-1, 1].
const std::vector<double>& gauss_legendre_nodes_64();
const std::vector<double>& gauss_legendre_weights_64();

}  // namespace bclab
