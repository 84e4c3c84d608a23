#include "bclab/fourier.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "bclab/errors.hpp"
#include "bclab/parallel.hpp"
#include "bclab/rng.hpp"

namespace bclab {

namespace {

constexpr double kPi = std::numbers::pi;

// Per-point truncation depth: lambda^D * (100 (|xi|+1)) <= 1 so the log-cosine
// tail bound is far below the quantities compared against it.
int auto_depth(double lambda, double xi) {
  double need = std::log(100.0 * (std::abs(xi) + 1.0)) / std::log(1.0 / lambda);
  int d = static_cast<int>(std::ceil(need)) + 4;
  return std::clamp(d, 16, 4000);
}

// exp(sum_{n>=depth} (lambda^n xi)^2 / 2) - 1, the |1 - tail product| bound.
double product_tail_bound(double lambda, double xi, int depth) {
  double lam_d = std::pow(lambda, depth);
  double s = xi * xi * lam_d * lam_d / (2.0 * (1.0 - lambda * lambda));
  return std::expm1(s);
}

bool tail_ok(double lambda, double xi, int depth) {
  return std::pow(lambda, depth) * std::abs(xi) <= 1.0;
}

}  // namespace

SpectralValue mu_hat(double lambda, double xi, int depth) {
  require_lambda(lambda);
  if (depth < 1) throw argument_error("mu_hat: depth must be >= 1");
  double prod = 1.0;
  double arg = xi;
  for (int n = 0; n < depth; ++n) {
    prod *= std::cos(arg);
    arg *= lambda;
  }
  SpectralValue sv;
  sv.xi = xi;
  sv.value = prod;
  sv.depth = depth;
  sv.tail_reliable = tail_ok(lambda, xi, depth);
  sv.truncation_error = sv.tail_reliable ? product_tail_bound(lambda, xi, depth) : 0.0;
  return sv;
}

namespace {

// Truncated derivative series via prefix/suffix cosine products:
//   -xi sum_{n=1}^{depth-1} n lambda^{n-1} sin(lambda^n xi) prod_{k != n} cos(lambda^k xi).
double dmu_core(double lambda, double xi, int depth, std::vector<double>& cosbuf,
                std::vector<double>& sufbuf) {
  cosbuf.resize(static_cast<std::size_t>(depth));
  sufbuf.resize(static_cast<std::size_t>(depth) + 1);
  double arg = xi;
  for (int n = 0; n < depth; ++n) {
    cosbuf[static_cast<std::size_t>(n)] = std::cos(arg);
    arg *= lambda;
  }
  sufbuf[static_cast<std::size_t>(depth)] = 1.0;
  for (int n = depth - 1; n >= 0; --n)
    sufbuf[static_cast<std::size_t>(n)] =
        sufbuf[static_cast<std::size_t>(n) + 1] * cosbuf[static_cast<std::size_t>(n)];
  double prefix = cosbuf[0];  // prod_{k<n} cos, starting at n=1
  double sum = 0.0;
  double lam_pow = 1.0;   // lambda^{n-1}
  double lam_n = lambda;  // lambda^n
  for (int n = 1; n < depth; ++n) {
    double others = prefix * sufbuf[static_cast<std::size_t>(n) + 1];
    sum += n * lam_pow * std::sin(lam_n * xi) * others;
    prefix *= cosbuf[static_cast<std::size_t>(n)];
    lam_pow *= lambda;
    lam_n *= lambda;
  }
  return -xi * sum;
}

}  // namespace

SpectralValue mu_hat_dlambda(double lambda, double xi, int depth) {
  require_lambda(lambda);
  if (depth < 2) throw argument_error("mu_hat_dlambda: depth must be >= 2");
  std::vector<double> cosbuf, sufbuf;
  SpectralValue sv;
  sv.xi = xi;
  sv.depth = depth;
  sv.value = mu_hat(lambda, xi, depth).value;
  sv.dvalue_dlambda = dmu_core(lambda, xi, depth, cosbuf, sufbuf);
  sv.tail_reliable = tail_ok(lambda, xi, depth);
  // omitted series terms  |xi| sum_{n>=depth} n lambda^{n-1}, plus the kept
  // terms' missing cosine factors
  double series_tail = std::abs(xi) * geometric_tail_d1(lambda, depth);
  double prod_tail = sv.tail_reliable ? product_tail_bound(lambda, xi, depth) : 0.0;
  sv.truncation_error = series_tail + prod_tail * std::abs(*sv.dvalue_dlambda);
  return sv;
}

DerivBoundAudit derivative_bound_audit(double lambda, double xi, int n, int depth) {
  require_lambda(lambda);
  if (n < 0) throw argument_error("derivative_bound_audit: n must be >= 0");
  if (n >= depth) throw argument_error("derivative_bound_audit: requires n < depth");
  // Raise the working depth until tails cannot affect the 1e-12 comparison;
  // keep it a multiple of 3 so both sides cover identical cosine factors.
  int d = std::max(depth, auto_depth(lambda, xi));
  d = std::max(d, n + 1);
  d += (3 - d % 3) % 3;

  double lhs = 1.0;
  double arg = xi;
  for (int k = 0; k < d; ++k) {
    if (k != n) lhs *= std::abs(std::cos(arg));
    arg *= lambda;
  }
  double l3 = lambda * lambda * lambda;
  int d3 = d / 3;
  double rhs = 0.0;
  double scale = 1.0;
  for (int i = 0; i < 3; ++i) {
    double v = mu_hat(l3, scale * xi, d3).value;
    rhs += v * v;
    scale *= lambda;
  }
  DerivBoundAudit a;
  a.lhs = lhs;
  a.rhs = rhs;
  a.margin = rhs - lhs;
  a.holds = lhs <= rhs + 1e-12;
  return a;
}

// --- Gauss-Legendre ------------------------------------------------------------

namespace {

void legendre_eval(int n, double x, double& p, double& dp) {
  double p0 = 1.0, p1 = x;
  for (int k = 2; k <= n; ++k) {
    double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
    p0 = p1;
    p1 = pk;
  }
  p = p1;
  dp = n * (x * p1 - p0) / (x * x - 1.0);
}

struct GlTable {
  std::vector<double> nodes, weights;
};

GlTable make_gl64() {
  const int n = 64;
  GlTable t;
  t.nodes.resize(n);
  t.weights.resize(n);
  for (int i = 0; i < n / 2; ++i) {
    double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double p, dp;
    for (int it = 0; it < 100; ++it) {
      legendre_eval(n, x, p, dp);
      double dx = -p / dp;
      x += dx;
      if (std::abs(dx) < 1e-15) break;
    }
    legendre_eval(n, x, p, dp);
    t.nodes[static_cast<std::size_t>(i)] = -x;
    t.nodes[static_cast<std::size_t>(n - 1 - i)] = x;
    double w = 2.0 / ((1.0 - x * x) * dp * dp);
    t.weights[static_cast<std::size_t>(i)] = w;
    t.weights[static_cast<std::size_t>(n - 1 - i)] = w;
  }
  return t;
}

const GlTable& gl64() {
  static const GlTable t = make_gl64();
  return t;
}

}  // namespace

const std::vector<double>& gauss_legendre_nodes_64() { return gl64().nodes; }
const std::vector<double>& gauss_legendre_weights_64() { return gl64().weights; }

// --- Sobolev norm quadrature ----------------------------------------------------

SobolevEstimate sobolev_integral(double gamma, double a0, double b0, double xi_cutoff,
                                 int depth) {
  if (!(gamma >= 0.0)) throw argument_error("sobolev_integral: gamma must be >= 0");
  if (!(a0 <= b0)) throw argument_error("sobolev_integral: need a0 <= b0");
  if (!(a0 >= 0.5 && b0 < 1.0))
    throw domain_error("sobolev_integral: lambda range must lie in [1/2, 1)");
  if (!(xi_cutoff >= 10.0)) throw argument_error("sobolev_integral: cutoff must be >= 10");

  // lambda nodes: GL-64 on [a0,b0], or the single point when degenerate
  std::vector<double> lam, lamw;
  if (a0 == b0) {
    lam = {a0};
    lamw = {1.0};
  } else {
    const auto& t = gl64();
    lam.resize(t.nodes.size());
    lamw.resize(t.nodes.size());
    for (std::size_t i = 0; i < t.nodes.size(); ++i) {
      lam[i] = 0.5 * (a0 + b0) + 0.5 * (b0 - a0) * t.nodes[i];
      lamw[i] = 0.5 * (b0 - a0) * t.weights[i];
    }
  }
  // xi grid: resolve the fastest oscillation 2/(1-b0) of |mu_hat|^2
  double osc = 2.0 * support_radius(b0);
  double step = std::min(0.01, kPi / (8.0 * osc));
  std::int64_t m_half = static_cast<std::int64_t>(std::ceil(0.5 * xi_cutoff / step));
  step = 0.5 * xi_cutoff / static_cast<double>(m_half);
  std::int64_t m_full = 2 * m_half;

  // per-lambda power tables up to the maximal depth used
  std::vector<std::vector<double>> pows(lam.size());
  std::vector<int> depths(lam.size());
  for (std::size_t i = 0; i < lam.size(); ++i) {
    int d = depth > 0 ? depth : auto_depth(lam[i], xi_cutoff);
    depths[i] = d;
    pows[i].resize(static_cast<std::size_t>(d));
    double p = 1.0;
    for (int k = 0; k < d; ++k) {
      pows[i][static_cast<std::size_t>(k)] = p;
      p *= lam[i];
    }
  }

  struct Part {
    double half = 0.0, full = 0.0;
  };
  const std::int64_t chunk = 4096;
  const std::int64_t n_chunks = (m_full + 1 + chunk - 1) / chunk;
  Part total = chunked_reduce<Part>(
      n_chunks, Part{},
      [&](std::int64_t c) {
        Part part;
        std::int64_t klo = c * chunk, khi = std::min(m_full + 1, klo + chunk);
        for (std::int64_t k = klo; k < khi; ++k) {
          double xi = static_cast<double>(k) * step;
          double trapw = (k == 0 || k == m_full) ? 0.5 : 1.0;
          bool at_half = (k == m_half);
          double wgt = std::pow(std::abs(xi), 2.0 * gamma);
          if (k == 0 && gamma == 0.0) wgt = 1.0;
          double row = 0.0;
          for (std::size_t i = 0; i < lam.size(); ++i) {
            double prod = 1.0;
            const auto& pw = pows[i];
            for (std::size_t n = 0; n < pw.size(); ++n) prod *= std::cos(pw[n] * xi);
            row += lamw[i] * prod * prod;
          }
          double v = wgt * row;
          // grid point k contributes to the half-cutoff integral iff k <= m_half
          if (k < m_half) part.half += v;
          else if (at_half) part.half += 0.5 * v;
          part.full += trapw * v;
        }
        return part;
      },
      [](Part a, Part b) { return Part{a.half + b.half, a.full + b.full}; });

  // half-integral needs its own left endpoint halving
  double v0 = 0.0;
  {
    double wgt0 = (gamma == 0.0) ? 1.0 : 0.0;
    double row = 0.0;
    for (std::size_t i = 0; i < lam.size(); ++i) row += lamw[i];
    v0 = wgt0 * row;
  }
  double half_integral = (total.half - 0.5 * v0) * step * 2.0;  // symmetric doubling
  double full_integral = total.full * step * 2.0;

  SobolevEstimate est;
  est.gamma = gamma;
  est.xi_cutoff = xi_cutoff;
  est.lambda_a = a0;
  est.lambda_b = b0;
  est.value = full_integral;
  est.refinement_ratio = half_integral > 0.0 ? full_integral / half_integral : 1.0;
  return est;
}

// --- phi_hat ---------------------------------------------------------------------

namespace {

// int_a^b e^{-i xi x} dx
std::complex<double> segment_transform(double a, double b, double xi) {
  if (xi == 0.0) return {b - a, 0.0};
  std::complex<double> ia = std::polar(1.0, -xi * a);
  std::complex<double> ib = std::polar(1.0, -xi * b);
  return (ia - ib) / std::complex<double>(0.0, xi);
}

Poly rebased_polynomial(const std::vector<double>& coeffs, double lo, double hi) {
  // q(t) = p(lo + (hi-lo) t)
  double L = hi - lo;
  std::size_t n = coeffs.size();
  std::vector<double> q(n, 0.0);
  // expand via repeated synthetic accumulation: p(lo + L t) = sum_i c_i (lo + L t)^i
  std::vector<double> base{1.0};  // (lo + L t)^0
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < base.size(); ++j) q[j] += coeffs[i] * base[j];
    if (i + 1 < n) {
      std::vector<double> next(base.size() + 1, 0.0);
      for (std::size_t j = 0; j < base.size(); ++j) {
        next[j] += base[j] * lo;
        next[j + 1] += base[j] * L;
      }
      base = std::move(next);
    }
  }
  Poly p;
  p.c = std::move(q);
  return p;
}

struct CompactPart {
  const PiecewisePoly* pp = nullptr;
  PiecewisePoly owned;  // for clamped polynomials
  double coeff = 0.0;
  double baseline = 0.0;  // left plateau of the part
  double delta = 0.0;     // right minus left plateau
  double span_hi = 0.0;
  bool trivial = false;   // constant part: transforms to zero
};

// Decomposes a composite observable into exactly-transformable parts.
// Requires a bounded support hint and equal outer plateaus.
std::vector<CompactPart> compact_parts(const Observable& phi, double& c_out, double& hull_hi) {
  auto hint = phi.support_hint();
  auto plat = phi.plateau();
  if (!hint || !plat)
    throw argument_error("phi_hat: observable is not constant outside a bounded set");
  if (plat->first != plat->second)
    throw argument_error("phi_hat: left and right plateau values differ");
  c_out = plat->first;
  hull_hi = hint->hi;
  std::vector<CompactPart> parts;
  for (const auto& comp : phi.components()) {
    CompactPart cp;
    cp.coeff = comp.coeff;
    if (const auto* p = std::get_if<Observable::PolynomialPart>(&comp.part)) {
      bool is_const = p->coeffs.size() <= 1;
      if (is_const) {
        cp.trivial = true;
      } else {
        // clamped polynomial: single piece over the clamp interval
        const auto& cl = *p->clamp;
        std::vector<double> knots{cl.lo, cl.hi};
        std::vector<Poly> pieces{rebased_polynomial(p->coeffs, cl.lo, cl.hi)};
        double lv = pieces[0].eval(0.0), rv = pieces[0].eval(1.0);
        cp.owned = PiecewisePoly(std::move(knots), std::move(pieces), lv, rv);
        cp.pp = &cp.owned;
        cp.baseline = lv;
        cp.delta = rv - lv;
        cp.span_hi = cl.hi;
      }
    } else if (const auto* bp = std::get_if<Observable::BumpPart>(&comp.part)) {
      cp.pp = &bp->f;
      cp.baseline = 0.0;
      cp.delta = 0.0;
      cp.span_hi = bp->f.span_hi();
    } else if (const auto* gp = std::get_if<Observable::GbmPart>(&comp.part)) {
      cp.pp = &gp->inst.phi;
      cp.baseline = 0.0;
      cp.delta = gp->inst.phi.right_value();
      cp.span_hi = gp->inst.phi.span_hi();
    } else if (const auto* lp = std::get_if<Observable::LayerPart>(&comp.part)) {
      cp.pp = &lp->f;
      cp.baseline = 0.0;
      cp.delta = lp->f.right_value();
      cp.span_hi = lp->f.span_hi();
    } else {
      throw argument_error("phi_hat: Weierstrass sums are not compactly supported");
    }
    parts.push_back(std::move(cp));
  }
  // re-point owned piecewise polys after vector moves
  for (auto& cp : parts)
    if (!cp.trivial && cp.pp != nullptr && !cp.owned.knots().empty()) cp.pp = &cp.owned;
  return parts;
}

}  // namespace

PhiHatValue phi_hat(const Observable& phi, double xi) {
  double c = 0.0, hull_hi = 0.0;
  auto parts = compact_parts(phi, c, hull_hi);
  std::complex<double> total = 0.0;
  double scale = 0.0;
  for (const auto& cp : parts) {
    if (cp.trivial) continue;
    // (part - left) transforms over its span, then continues as the constant
    // delta up to the hull end
    std::complex<double> v = cp.pp->fourier_span(cp.baseline, xi);
    if (cp.delta != 0.0) v += cp.delta * segment_transform(cp.span_hi, hull_hi, xi);
    total += cp.coeff * v;
    scale += std::abs(cp.coeff) * (cp.pp->span_hi() - cp.pp->span_lo() + 1.0);
  }
  PhiHatValue out;
  out.value = total;
  out.quad_error = 1e-13 * (1.0 + scale);  // closed-form route: rounding only
  out.subtracted_constant = c;
  return out;
}

PhiHatValue phi_hat_quadrature(const Observable& phi, double xi) {
  auto hint = phi.support_hint();
  auto plat = phi.plateau();
  if (!hint || !plat || plat->first != plat->second)
    throw argument_error("phi_hat: observable is not constant outside a bounded set");
  double c = plat->first;
  double lo = hint->lo, hi = hint->hi;
  auto simpson = [&](std::int64_t n) {
    // composite Simpson with n panels (n even)
    double h = (hi - lo) / static_cast<double>(n);
    std::complex<double> s = 0.0;
    for (std::int64_t k = 0; k <= n; ++k) {
      double x = lo + h * static_cast<double>(k);
      double w = (k == 0 || k == n) ? 1.0 : (k % 2 == 1 ? 4.0 : 2.0);
      s += w * (phi(x) - c) * std::polar(1.0, -xi * x);
    }
    return s * (h / 3.0);
  };
  double max_step = std::min((hi - lo) / 64.0, kPi / (8.0 * std::max(1.0, std::abs(xi))));
  std::int64_t n = 2;
  while ((hi - lo) / static_cast<double>(n) > max_step) n *= 2;
  std::complex<double> coarse = simpson(n);
  std::complex<double> fine = simpson(2 * n);
  PhiHatValue out;
  out.value = fine;
  out.quad_error = std::abs(fine - coarse) / 15.0 + 1e-15;
  out.subtracted_constant = c;
  return out;
}

// --- rho -------------------------------------------------------------------------

namespace {

struct PhiHatGrid {
  double step = 0.0;
  std::int64_t points = 0;  // grid indices 0..points
  std::vector<double> re;   // Re phi_hat at k*step
};

PhiHatGrid build_phi_hat_grid(const Observable& phi, double cutoff) {
  auto hint = phi.support_hint();
  if (!hint) throw argument_error("rho: observable is not compactly supported");
  double xmax = std::max(std::abs(hint->lo), std::abs(hint->hi)) + 1.0;
  PhiHatGrid g;
  g.step = std::min(0.01, kPi / (8.0 * xmax));
  g.points = static_cast<std::int64_t>(std::ceil(cutoff / g.step));
  g.step = cutoff / static_cast<double>(g.points);
  g.re.assign(static_cast<std::size_t>(g.points) + 1, 0.0);
  const std::int64_t chunk = 2048;
  const std::int64_t n_chunks = (g.points + 1 + chunk - 1) / chunk;
  detail::run_chunks(n_chunks, [&](std::int64_t c) {
    std::int64_t klo = c * chunk, khi = std::min(g.points + 1, klo + chunk);
    for (std::int64_t k = klo; k < khi; ++k)
      g.re[static_cast<std::size_t>(k)] = phi_hat(phi, static_cast<double>(k) * g.step).value.real();
  });
  return g;
}

void require_rho_param(double t) {
  double lo = std::pow(2.0, -1.0 / 3.0) + 0.01;
  if (!(t > lo && t < 0.99))
    throw domain_error("rho: parameter must lie in (2^{-1/3}+0.01, 0.99)");
}

// (1/pi) * trapezoid_k Re(phi_hat)(xi_k) * dmu/dlambda(t, xi_k); grid points
// with negligible |phi_hat| are skipped against the |dmu| <= |xi|/(1-t)^2 bound.
double rho_from_grid(const PhiHatGrid& grid, double t, double* last_decade = nullptr) {
  double inv = 1.0 / ((1.0 - t) * (1.0 - t));
  struct Acc {
    double sum = 0.0, tail = 0.0;
  };
  const std::int64_t chunk = 2048;
  const std::int64_t n_chunks = (grid.points + 1 + chunk - 1) / chunk;
  double cutoff = static_cast<double>(grid.points) * grid.step;
  Acc acc = chunked_reduce<Acc>(
      n_chunks, Acc{},
      [&](std::int64_t c) {
        Acc a;
        std::vector<double> cosbuf, sufbuf;
        std::int64_t klo = c * chunk, khi = std::min(grid.points + 1, klo + chunk);
        for (std::int64_t k = klo; k < khi; ++k) {
          double xi = static_cast<double>(k) * grid.step;
          double re = grid.re[static_cast<std::size_t>(k)];
          if (std::abs(re) * (xi + 1.0) * inv < 1e-16) continue;
          double trapw = (k == 0 || k == grid.points) ? 0.5 : 1.0;
          int d = auto_depth(t, xi);
          double dmu = dmu_core(t, xi, d, cosbuf, sufbuf);
          double v = trapw * re * dmu;
          a.sum += v;
          if (xi >= 0.5 * cutoff) a.tail += v;
        }
        return a;
      },
      [](Acc a, Acc b) { return Acc{a.sum + b.sum, a.tail + b.tail}; });
  if (last_decade) *last_decade = acc.tail * grid.step / kPi;
  return acc.sum * grid.step / kPi;
}

}  // namespace

double rho_eval(double t, const Observable& phi, double xi_cutoff) {
  require_rho_param(t);
  if (!(xi_cutoff > 0.0)) throw argument_error("rho: cutoff must be positive");
  PhiHatGrid grid = build_phi_hat_grid(phi, xi_cutoff);
  return rho_from_grid(grid, t);
}

ExpectationResult mc_delta_expectation(const Observable& phi, double lambda_a, double lambda_b,
                                       std::int64_t n, std::uint64_t seed) {
  require_lambda(lambda_a);
  require_lambda(lambda_b);
  if (n < 100) throw argument_error("mc_delta_expectation requires n >= 100");
  // depth-128 byte tables for both parameters
  auto tables = [](double lambda) {
    std::vector<double> t(16 * 256);
    double pw[128];
    pw[0] = 1.0;
    for (int m = 1; m < 128; ++m) pw[m] = pw[m - 1] * lambda;
    for (int k = 0; k < 16; ++k)
      for (int byte = 0; byte < 256; ++byte) {
        double v = 0.0;
        for (int b = 0; b < 8; ++b) v += ((byte >> b) & 1 ? 1.0 : -1.0) * pw[8 * k + b];
        t[static_cast<std::size_t>(k * 256 + byte)] = v;
      }
    return t;
  };
  std::vector<double> ta = tables(lambda_a), tb = tables(lambda_b);

  struct Acc {
    double sum = 0.0, sumsq = 0.0;
  };
  const std::int64_t chunk = 1 << 14;
  const std::int64_t n_chunks = (n + chunk - 1) / chunk;
  Acc acc = chunked_reduce<Acc>(
      n_chunks, Acc{},
      [&](std::int64_t c) {
        Acc a;
        std::int64_t lo = c * chunk, hi = std::min(n, lo + chunk);
        for (std::int64_t s = lo; s < hi; ++s) {
          std::uint64_t w0 = rng::at(seed, 2, static_cast<std::uint64_t>(2 * s));
          std::uint64_t w1 = rng::at(seed, 2, static_cast<std::uint64_t>(2 * s + 1));
          double xa = 0.0, xb = 0.0;
          for (int k = 0; k < 8; ++k) {
            std::size_t idx = static_cast<std::size_t>(k * 256 + ((w0 >> (8 * k)) & 0xff));
            xa += ta[idx];
            xb += tb[idx];
          }
          for (int k = 0; k < 8; ++k) {
            std::size_t idx = static_cast<std::size_t>((k + 8) * 256 + ((w1 >> (8 * k)) & 0xff));
            xa += ta[idx];
            xb += tb[idx];
          }
          double d = phi(xb) - phi(xa);
          a.sum += d;
          a.sumsq += d * d;
        }
        return a;
      },
      [](Acc a, Acc b) {
        if (!std::isfinite(b.sum)) throw numeric_error("non-finite observable values");
        return Acc{a.sum + b.sum, a.sumsq + b.sumsq};
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

RhoCheckReport rho_integral_check(double a, double b, const Observable& phi, double xi_cutoff,
                                  std::int64_t mc_samples, std::uint64_t seed) {
  require_rho_param(a);
  require_rho_param(b);
  if (!(a < b)) throw argument_error("rho_integral_check: need a < b");

  PhiHatGrid grid = build_phi_hat_grid(phi, xi_cutoff);
  const auto& nodes = gauss_legendre_nodes_64();
  const auto& weights = gauss_legendre_weights_64();

  double integral = 0.0;
  double worst_tail = 0.0;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    double t = 0.5 * (a + b) + 0.5 * (b - a) * nodes[i];
    double tail = 0.0;
    double r = rho_from_grid(grid, t, &tail);
    integral += 0.5 * (b - a) * weights[i] * r;
    worst_tail = std::max(worst_tail, std::abs(tail));
  }

  auto dh = mc_delta_expectation(phi, a, b, mc_samples, seed);

  RhoCheckReport rep;
  rep.integral_rho = integral;
  rep.delta_h = dh.value;
  rep.delta_h_error = dh.error_bound;
  rep.discrepancy = std::abs(integral - dh.value);
  // if the outer half of the xi range still contributes noticeably, the
  // cutoff was too small for the requested comparison
  rep.cutoff_ok = worst_tail * (b - a) < 2.5e-4;
  return rep;
}

}  // namespace bclab
