#include "bclab/observable.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "bclab/errors.hpp"
#include "bclab/rng.hpp"

namespace bclab {

namespace {

double horner(const std::vector<double>& c, double x) {
  double v = 0.0;
  for (std::size_t i = c.size(); i-- > 0;) v = v * x + c[i];
  return v;
}

std::vector<double> poly_derivative(const std::vector<double>& c) {
  if (c.size() <= 1) return {0.0};
  std::vector<double> d(c.size() - 1);
  for (std::size_t i = 1; i < c.size(); ++i) d[i - 1] = c[i] * static_cast<double>(i);
  return d;
}

// sup bound via |p|(x) <= sum |c_i| R^i on [-R, R]-type intervals
double poly_bound(const std::vector<double>& c, const Interval& iv) {
  double R = std::max(std::abs(iv.lo), std::abs(iv.hi));
  double b = 0.0, pw = 1.0;
  for (std::size_t i = 0; i < c.size(); ++i) {
    b += std::abs(c[i]) * pw;
    pw *= R;
  }
  return b;
}

// phi-ramp piece where the derivative rises 0 -> h over length L:
//   phi(t) = v0 + h*L*(2.5 t^4 - 3 t^5 + t^6)
Poly integral_ramp_up(double v0, double h, double L) {
  return Poly{{v0, 0.0, 0.0, 0.0, 2.5 * h * L, -3.0 * h * L, h * L}};
}
// derivative falls h -> 0: phi(t) = v0 + h*L*(t - S(t))
Poly integral_ramp_down(double v0, double h, double L) {
  return Poly{{v0, h * L, 0.0, 0.0, -2.5 * h * L, 3.0 * h * L, -h * L}};
}

}  // namespace

BumpProfile make_bump(double rho) {
  if (!(rho > 0.0 && rho < 1.0)) throw domain_error("bump rho must lie in (0,1)");
  BumpProfile bp;
  bp.rho = rho;
  bp.ramp_width = 2.0 * (1.0 - rho) / 3.0;
  double lo = (1.0 - rho) / 3.0;
  double hi = 2.0 - lo;
  bp.g = plateau_profile(lo, hi, bp.ramp_width, 1.0);
  bp.antiderivative = bp.g.antiderivative(0.0);
  double w = bp.ramp_width;
  bp.c2_norm = 1.0 + kSmoothstepMaxD1 / w + kSmoothstepMaxD2 / (w * w);
  bp.integral = 2.0 * rho + w;
  return bp;
}

// --- generalized Brownian motion -------------------------------------------

namespace {

// phi built cell by cell; margin and plateau constants are pinned to the
// exact running prefix so cell-boundary values match prefix_integrals bitwise.
PiecewisePoly build_gbm_phi(int N, double theta1, double rho,
                            const std::vector<std::int8_t>& signs,
                            std::vector<double>& prefix_out, double cell_step) {
  const double h_abs = std::pow(static_cast<double>(N), theta1);
  const double cell_len = 2.0 / N;
  const double margin = (1.0 - rho) / 3.0 / N;
  const double ramp = 2.0 * (1.0 - rho) / 3.0 / N;
  const double plateau = 2.0 * rho / N;

  prefix_out.assign(static_cast<std::size_t>(N) + 1, 0.0);
  std::vector<double> knots;
  std::vector<Poly> pieces;
  knots.push_back(0.0);

  double acc = 0.0;
  bool open_const = false;  // a trailing constant piece is open and extendable
  auto extend_const_to = [&](double x_end) {
    if (open_const && !knots.empty() && knots.back() < x_end) {
      knots.push_back(x_end);
      // piece value was already emitted
      return;
    }
  };
  for (int j = 1; j <= N; ++j) {
    double cell_lo = cell_len * (j - 1);
    double cell_hi = cell_len * j;
    int s = signs[static_cast<std::size_t>(j - 1)];
    if (s == 0) {
      if (open_const) {
        knots.back() = cell_hi;  // stretch the running constant
      } else {
        pieces.push_back(Poly{{acc}});
        knots.push_back(cell_hi);
        open_const = true;
      }
    } else {
      double h = s * h_abs;
      double x0 = cell_lo + margin;
      if (open_const) {
        knots.back() = x0;  // constant runs up to the ramp start
      } else {
        pieces.push_back(Poly{{acc}});
        knots.push_back(x0);
      }
      pieces.push_back(integral_ramp_up(acc, h, ramp));
      knots.push_back(x0 + ramp);
      double v1 = acc + h * ramp * 0.5;
      pieces.push_back(Poly{{v1, h * plateau}});
      knots.push_back(x0 + ramp + plateau);
      double v2 = v1 + h * plateau;
      pieces.push_back(integral_ramp_down(v2, h, ramp));
      knots.push_back(x0 + 2.0 * ramp + plateau);
      acc += s * cell_step;  // exact cell increment
      pieces.push_back(Poly{{acc}});
      knots.push_back(cell_hi);
      open_const = true;
    }
    prefix_out[static_cast<std::size_t>(j)] = acc;
  }
  (void)extend_const_to;
  return PiecewisePoly(std::move(knots), std::move(pieces), 0.0, acc);
}

}  // namespace

GbmInstance make_gbm_from_signs(int N, double theta1, double theta2, double rho,
                                std::vector<std::int8_t> signs, std::uint64_t seed) {
  if (N < 1) throw argument_error("gbm: N must be positive");
  if (!(rho > 0.0 && rho < 1.0)) throw domain_error("gbm: rho must lie in (0,1)");
  if (static_cast<int>(signs.size()) != N) throw argument_error("gbm: signs size != N");
  if (std::pow(static_cast<double>(N), -theta2) > 0.5)
    throw argument_error("gbm: N^{-theta2} must be <= 1/2");
  for (auto s : signs)
    if (s < -1 || s > 1) throw argument_error("gbm: signs must be in {-1,0,+1}");

  GbmInstance g;
  g.N = N;
  g.theta1 = theta1;
  g.theta2 = theta2;
  g.rho = rho;
  g.seed = seed;
  g.signs = std::move(signs);
  double ig = 2.0 * rho + 2.0 * (1.0 - rho) / 3.0;  // int_0^2 g_rho
  g.cell_step = std::pow(static_cast<double>(N), theta1 - 1.0) * ig;
  g.phi = build_gbm_phi(N, theta1, rho, g.signs, g.prefix_integrals, g.cell_step);
  return g;
}

GbmInstance sample_gbm(int N, double theta1, double theta2, double rho, std::uint64_t seed) {
  if (N < 1) throw argument_error("gbm: N must be positive");
  double p = std::pow(static_cast<double>(N), -theta2);
  if (p > 0.5) throw argument_error("gbm: N^{-theta2} must be <= 1/2");
  std::vector<std::int8_t> signs(static_cast<std::size_t>(N), 0);
  for (int j = 0; j < N; ++j) {
    double u = rng::uniform(seed, 0, static_cast<std::uint64_t>(j));
    signs[static_cast<std::size_t>(j)] = u < p ? 1 : (u < 2.0 * p ? -1 : 0);
  }
  return make_gbm_from_signs(N, theta1, theta2, rho, std::move(signs), seed);
}

double GbmInstance::sup_abs() const {
  double m = 0.0;
  for (double v : prefix_integrals) m = std::max(m, std::abs(v));
  return m;
}

double GbmInstance::sup_abs_deriv() const {
  for (auto s : signs)
    if (s != 0) return std::pow(static_cast<double>(N), theta1);
  return 0.0;
}

// --- layer construction ------------------------------------------------------

namespace {

PiecewisePoly integral_of_plateau_union(const std::vector<Interval>& intervals, double ramp) {
  if (intervals.empty()) throw argument_error("layer: empty interval list");
  std::vector<double> knots;
  std::vector<Poly> pieces;
  double acc = 0.0;
  knots.push_back(intervals.front().lo - ramp);
  for (std::size_t j = 0; j < intervals.size(); ++j) {
    const auto& iv = intervals[j];
    if (!(iv.lo < iv.hi)) throw argument_error("layer: empty interval");
    if (j > 0) {
      if (!(iv.lo - intervals[j - 1].hi > 2.0 * ramp))
        throw argument_error("layer: intervals closer than 2*ramp");
      pieces.push_back(Poly{{acc}});  // gap
      knots.push_back(iv.lo - ramp);
    }
    pieces.push_back(integral_ramp_up(acc, 1.0, ramp));
    knots.push_back(iv.lo);
    double v1 = acc + ramp * 0.5;
    pieces.push_back(Poly{{v1, iv.hi - iv.lo}});
    knots.push_back(iv.hi);
    double v2 = v1 + (iv.hi - iv.lo);
    pieces.push_back(integral_ramp_down(v2, 1.0, ramp));
    knots.push_back(iv.hi + ramp);
    acc = v2 + ramp * 0.5;
  }
  return PiecewisePoly(std::move(knots), std::move(pieces), 0.0, acc);
}

}  // namespace

// --- Observable ---------------------------------------------------------------

Observable::Observable(std::vector<Component> components) : components_(std::move(components)) {
  finalize();
}

Observable Observable::constant(double c) { return polynomial({c}); }

Observable Observable::polynomial(std::vector<double> coeffs, std::optional<Interval> clamp) {
  if (coeffs.empty()) coeffs = {0.0};
  if (clamp && !(clamp->lo < clamp->hi)) throw argument_error("polynomial: empty clamp interval");
  Component c;
  c.part = PolynomialPart{std::move(coeffs), clamp};
  return Observable({std::move(c)});
}

Observable Observable::bump(double rho, double center, double radius) {
  if (!(rho > 0.0 && rho < 1.0)) throw domain_error("bump rho must lie in (0,1)");
  if (!(radius > 0.0)) throw argument_error("bump radius must be positive");
  BumpPart bp;
  bp.rho = rho;
  bp.center = center;
  bp.radius = radius;
  double margin = radius * (1.0 - rho) / 3.0;
  double lo = center - radius + margin;
  double hi = center + radius - margin;
  double ramp = radius * 2.0 * (1.0 - rho) / 3.0;
  bp.f = plateau_profile(lo, hi, ramp, 1.0);
  Component c;
  c.part = std::move(bp);
  return Observable({std::move(c)});
}

Observable Observable::gbm(GbmInstance inst) {
  Component c;
  c.part = GbmPart{std::move(inst)};
  return Observable({std::move(c)});
}

Observable Observable::layer(std::vector<Interval> intervals, double ramp, int index, int level) {
  LayerPart lp;
  lp.f = integral_of_plateau_union(intervals, ramp);
  lp.intervals = std::move(intervals);
  lp.ramp = ramp;
  lp.index = index;
  lp.level = level;
  Component c;
  c.part = std::move(lp);
  return Observable({std::move(c)});
}

Observable weierstrass(double a, double b, int terms) {
  if (!(b > 1.0)) throw domain_error("weierstrass: b must exceed 1 (series diverges)");
  if (!(a > 1.0)) throw domain_error("weierstrass: a must exceed 1");
  if (terms < 1) throw argument_error("weierstrass: terms must be >= 1");
  Observable::Component c;
  c.part = Observable::WeierstrassPart{a, b, terms};
  return Observable({std::move(c)});
}

namespace {

struct PartTraits {
  Smoothness smooth = Smoothness::C2;
  std::optional<Interval> hint;
  std::optional<double> alpha;   // declared Holder exponent
  double holder_c = 0.0;         // seminorm bound at alpha
  double sup = 0.0;              // sup |part|
  double left = 0.0, right = 0.0;
  double dbound = 0.0;           // sup |part'|
  double d2bound = 0.0;          // sup |part''|
  double d3bound = 0.0;          // sup |part'''| (piecewise)
};

PartTraits traits_of(const Observable::Part& part) {
  PartTraits t;
  if (const auto* p = std::get_if<Observable::PolynomialPart>(&part)) {
    bool is_const = p->coeffs.size() <= 1;
    if (p->clamp) {
      t.smooth = is_const ? Smoothness::C2 : Smoothness::C0;
      t.hint = p->clamp;
      t.sup = poly_bound(p->coeffs, *p->clamp);
      t.alpha = 1.0;
      t.holder_c = poly_bound(poly_derivative(p->coeffs), *p->clamp);
      t.dbound = t.holder_c;
      t.d2bound = poly_bound(poly_derivative(poly_derivative(p->coeffs)), *p->clamp);
      t.d3bound =
          poly_bound(poly_derivative(poly_derivative(poly_derivative(p->coeffs))), *p->clamp);
      t.left = horner(p->coeffs, p->clamp->lo);
      t.right = horner(p->coeffs, p->clamp->hi);
    } else if (is_const) {
      t.smooth = Smoothness::C2;
      t.hint = Interval{0.0, 0.0};
      double v = p->coeffs.empty() ? 0.0 : p->coeffs[0];
      t.sup = std::abs(v);
      t.alpha = 1.0;
      t.holder_c = 0.0;
      t.left = t.right = v;
    } else {
      t.smooth = Smoothness::C2;  // entire function; no compact data
      t.hint = std::nullopt;
      t.alpha = std::nullopt;
      t.sup = std::numeric_limits<double>::infinity();
      t.dbound = std::numeric_limits<double>::infinity();
      t.d2bound = std::numeric_limits<double>::infinity();
      t.d3bound = std::numeric_limits<double>::infinity();
    }
  } else if (const auto* bp = std::get_if<Observable::BumpPart>(&part)) {
    t.smooth = Smoothness::C2;
    t.hint = Interval{bp->f.span_lo(), bp->f.span_hi()};
    t.sup = 1.0;
    double ramp = bp->radius * 2.0 * (1.0 - bp->rho) / 3.0;
    t.alpha = 1.0;
    t.holder_c = kSmoothstepMaxD1 / ramp;
    t.dbound = t.holder_c;
    t.d2bound = kSmoothstepMaxD2 / (ramp * ramp);
    t.d3bound = 60.0 / (ramp * ramp * ramp);  // sup |s'''| = 60 on the unit ramp
    t.left = t.right = 0.0;
  } else if (const auto* gp = std::get_if<Observable::GbmPart>(&part)) {
    t.smooth = Smoothness::C2;
    t.hint = Interval{0.0, 2.0};
    t.sup = gp->inst.sup_abs();
    t.alpha = 1.0;
    t.holder_c = gp->inst.sup_abs_deriv();
    t.dbound = t.holder_c;
    double ramp = 2.0 * (1.0 - gp->inst.rho) / 3.0 / gp->inst.N;
    t.d2bound = t.dbound * kSmoothstepMaxD1 / ramp;
    t.d3bound = t.dbound * kSmoothstepMaxD2 / (ramp * ramp);
    t.left = 0.0;
    t.right = gp->inst.prefix_integrals.back();
  } else if (const auto* lp = std::get_if<Observable::LayerPart>(&part)) {
    t.smooth = Smoothness::C2;
    t.hint = Interval{lp->f.span_lo(), lp->f.span_hi()};
    t.sup = std::abs(lp->f.right_value());
    t.alpha = 1.0;
    t.holder_c = 1.0;  // 0 <= phi' <= 1
    t.dbound = 1.0;
    t.d2bound = kSmoothstepMaxD1 / lp->ramp;
    t.d3bound = kSmoothstepMaxD2 / (lp->ramp * lp->ramp);
    t.left = 0.0;
    t.right = lp->f.right_value();
  } else {
    const auto& wp = std::get<Observable::WeierstrassPart>(part);
    t.smooth = Smoothness::C0;
    t.hint = std::nullopt;
    t.sup = 1.0 / (wp.b - 1.0);
    if (wp.b < wp.a) {
      t.alpha = std::log(wp.b) / std::log(wp.a);
      t.holder_c = wp.a / (wp.a - wp.b) + 2.0 / (wp.b - 1.0);
    } else {
      t.alpha = 1.0;
      double r = wp.a / wp.b;
      t.holder_c = (wp.a == wp.b) ? static_cast<double>(wp.terms) : r / (1.0 - r);
    }
    t.dbound = std::numeric_limits<double>::infinity();
    t.d2bound = std::numeric_limits<double>::infinity();
    t.d3bound = std::numeric_limits<double>::infinity();
  }
  return t;
}

}  // namespace

void Observable::finalize() {
  smoothness_ = Smoothness::C2;
  bool have_hint = true;
  bool have_holder = true;
  double lo = 0.0, hi = 0.0;
  bool first = true;
  double alpha_min = 1.0;
  std::vector<PartTraits> traits;
  traits.reserve(components_.size());
  for (const auto& c : components_) {
    traits.push_back(traits_of(c.part));
    const auto& t = traits.back();
    if (static_cast<int>(t.smooth) < static_cast<int>(smoothness_)) smoothness_ = t.smooth;
    if (!t.hint) have_hint = false;
    if (!t.alpha) have_holder = false;
    else alpha_min = std::min(alpha_min, *t.alpha);
    if (t.hint) {
      if (first) {
        lo = t.hint->lo;
        hi = t.hint->hi;
        first = false;
      } else {
        lo = std::min(lo, t.hint->lo);
        hi = std::max(hi, t.hint->hi);
      }
    }
  }
  if (have_hint && !components_.empty()) {
    if (lo == hi) hi = lo + 1e-30;  // pure constants: degenerate hull
    support_hint_ = Interval{lo, hi};
  } else {
    support_hint_ = std::nullopt;
  }
  if (have_holder && !components_.empty()) {
    double cst = 0.0;
    for (std::size_t i = 0; i < components_.size(); ++i) {
      const auto& t = traits[i];
      double ci = (*t.alpha == alpha_min) ? t.holder_c : std::max(t.holder_c, 2.0 * t.sup);
      cst += std::abs(components_[i].coeff) * ci;
    }
    holder_exponent_ = alpha_min;
    holder_constant_ = cst;
  } else {
    holder_exponent_ = holder_constant_ = std::nullopt;
  }
}

double Observable::operator()(double x) const {
  double v = 0.0;
  for (const auto& c : components_) {
    double pv;
    if (const auto* p = std::get_if<PolynomialPart>(&c.part)) {
      double xc = x;
      if (p->clamp) xc = std::clamp(x, p->clamp->lo, p->clamp->hi);
      pv = horner(p->coeffs, xc);
    } else if (const auto* bp = std::get_if<BumpPart>(&c.part)) {
      pv = bp->f(x);
    } else if (const auto* gp = std::get_if<GbmPart>(&c.part)) {
      pv = gp->inst.phi(x);
    } else if (const auto* lp = std::get_if<LayerPart>(&c.part)) {
      pv = lp->f(x);
    } else {
      const auto& wp = std::get<WeierstrassPart>(c.part);
      double s = 0.0, an = 1.0, bn = 1.0;
      for (int n = 1; n <= wp.terms; ++n) {
        an *= wp.a;
        bn *= wp.b;
        s += std::sin(an * x) / bn;
      }
      pv = s;
    }
    v += c.coeff * pv;
  }
  return v;
}

double Observable::deriv(double x) const {
  if (smoothness_ < Smoothness::C1)
    throw capability_error("derivative requested on a C0 observable");
  double v = 0.0;
  for (const auto& c : components_) {
    double pv = 0.0;
    if (const auto* p = std::get_if<PolynomialPart>(&c.part)) {
      if (p->clamp && (x < p->clamp->lo || x > p->clamp->hi)) pv = 0.0;
      else pv = horner(poly_derivative(p->coeffs), x);
    } else if (const auto* bp = std::get_if<BumpPart>(&c.part)) {
      pv = bp->f.deriv(x);
    } else if (const auto* gp = std::get_if<GbmPart>(&c.part)) {
      pv = gp->inst.phi.deriv(x);
    } else if (const auto* lp = std::get_if<LayerPart>(&c.part)) {
      pv = lp->f.deriv(x);
    } else {
      throw capability_error("derivative requested on a C0 observable");
    }
    v += c.coeff * pv;
  }
  return v;
}

double Observable::deriv2(double x) const {
  if (smoothness_ < Smoothness::C2)
    throw capability_error("second derivative requested on a sub-C2 observable");
  double v = 0.0;
  for (const auto& c : components_) {
    double pv = 0.0;
    if (const auto* p = std::get_if<PolynomialPart>(&c.part)) {
      if (p->clamp && (x < p->clamp->lo || x > p->clamp->hi)) pv = 0.0;
      else pv = horner(poly_derivative(poly_derivative(p->coeffs)), x);
    } else if (const auto* bp = std::get_if<BumpPart>(&c.part)) {
      pv = bp->f.deriv2(x);
    } else if (const auto* gp = std::get_if<GbmPart>(&c.part)) {
      pv = gp->inst.phi.deriv2(x);
    } else if (const auto* lp = std::get_if<LayerPart>(&c.part)) {
      pv = lp->f.deriv2(x);
    } else {
      throw capability_error("second derivative requested on a C0 observable");
    }
    v += c.coeff * pv;
  }
  return v;
}

std::optional<std::pair<double, double>> Observable::plateau() const {
  if (!support_hint_) return std::nullopt;
  double l = 0.0, r = 0.0;
  for (const auto& c : components_) {
    auto t = traits_of(c.part);
    l += c.coeff * t.left;
    r += c.coeff * t.right;
  }
  return std::make_pair(l, r);
}

double Observable::sup_abs() const {
  double s = 0.0;
  for (const auto& c : components_) s += std::abs(c.coeff) * traits_of(c.part).sup;
  return s;
}

double Observable::sup_abs_deriv() const {
  double s = 0.0;
  for (const auto& c : components_) s += std::abs(c.coeff) * traits_of(c.part).dbound;
  return s;
}

double Observable::sup_abs_deriv2() const {
  double s = 0.0;
  for (const auto& c : components_) s += std::abs(c.coeff) * traits_of(c.part).d2bound;
  return s;
}

double Observable::deriv_bound_on(const Interval& iv) const {
  double s = 0.0;
  for (const auto& c : components_) {
    double b;
    if (const auto* p = std::get_if<PolynomialPart>(&c.part)) {
      b = poly_bound(poly_derivative(p->coeffs), p->clamp ? *p->clamp : iv);
    } else if (const auto* wp = std::get_if<WeierstrassPart>(&c.part)) {
      b = 0.0;
      double r = 1.0;
      for (int n = 1; n <= wp->terms; ++n) {
        r *= wp->a / wp->b;
        b += r;
      }
    } else {
      b = traits_of(c.part).dbound;
    }
    s += std::abs(c.coeff) * b;
  }
  return s;
}

double Observable::deriv2_bound_on(const Interval& iv) const {
  double s = 0.0;
  for (const auto& c : components_) {
    double b;
    if (const auto* p = std::get_if<PolynomialPart>(&c.part)) {
      b = poly_bound(poly_derivative(poly_derivative(p->coeffs)), p->clamp ? *p->clamp : iv);
    } else {
      b = traits_of(c.part).d2bound;
    }
    s += std::abs(c.coeff) * b;
  }
  return s;
}

double Observable::deriv3_bound_on(const Interval& iv) const {
  double s = 0.0;
  for (const auto& c : components_) {
    double b;
    if (const auto* p = std::get_if<PolynomialPart>(&c.part)) {
      b = poly_bound(poly_derivative(poly_derivative(poly_derivative(p->coeffs))),
                     p->clamp ? *p->clamp : iv);
    } else {
      b = traits_of(c.part).d3bound;
    }
    s += std::abs(c.coeff) * b;
  }
  return s;
}

Observable Observable::scaled(double k) const {
  std::vector<Component> cs = components_;
  for (auto& c : cs) c.coeff *= k;
  return Observable(std::move(cs));
}

Observable operator+(const Observable& a, const Observable& b) {
  std::vector<Observable::Component> cs = a.components_;
  cs.insert(cs.end(), b.components_.begin(), b.components_.end());
  return Observable(std::move(cs));
}

Observable operator-(const Observable& a, const Observable& b) { return a + b.scaled(-1.0); }

HolderEstimate holder_norm_estimate(const Observable& phi, double alpha, int grid_size) {
  if (grid_size < (1 << 10)) throw argument_error("holder estimate: grid_size must be >= 2^10");
  if (!(alpha > 0.0 && alpha <= 1.0)) throw argument_error("holder estimate: alpha in (0,1]");
  auto hint = phi.support_hint();
  if (!hint) throw argument_error("holder estimate: observable has no bounded support hint");
  double lo = hint->lo, hi = hint->hi;
  if (!(hi > lo)) {
    return HolderEstimate{0.0, 0.0};  // constant
  }
  std::vector<double> vals(static_cast<std::size_t>(grid_size));
  double step = (hi - lo) / (grid_size - 1);
  for (int i = 0; i < grid_size; ++i) vals[static_cast<std::size_t>(i)] = phi(lo + step * i);

  double lower = 0.0;
  for (int gap = grid_size - 1; gap >= 1; gap /= 2) {
    double dx = gap * step;
    double scale = std::pow(dx, alpha);
    for (int i = 0; i + gap < grid_size; ++i) {
      double d = std::abs(vals[static_cast<std::size_t>(i + gap)] - vals[static_cast<std::size_t>(i)]);
      lower = std::max(lower, d / scale);
    }
  }
  HolderEstimate est;
  est.lower_estimate = lower;
  if (phi.smoothness() >= Smoothness::C1) {
    double sup = phi.sup_abs();
    double dsup = phi.sup_abs_deriv();
    if (std::isfinite(sup) && std::isfinite(dsup))
      est.upper_bound = 2.0 * std::pow(dsup, alpha) * std::pow(sup, 1.0 - alpha) + sup;
  }
  return est;
}

}  // namespace bclab
