#include "bclab/piecewise.hpp"

#include <algorithm>
#include <cmath>

namespace bclab {

Poly Poly::derivative_t() const {
  Poly d;
  if (c.size() <= 1) {
    d.c = {0.0};
    return d;
  }
  d.c.resize(c.size() - 1);
  for (std::size_t i = 1; i < c.size(); ++i) d.c[i - 1] = c[i] * static_cast<double>(i);
  return d;
}

PiecewisePoly::PiecewisePoly(std::vector<double> knots, std::vector<Poly> pieces,
                             double left_value, double right_value)
    : knots_(std::move(knots)), pieces_(std::move(pieces)), left_(left_value), right_(right_value) {
  if (knots_.size() != pieces_.size() + 1) throw argument_error("knots/pieces size mismatch");
  for (std::size_t i = 0; i + 1 < knots_.size(); ++i)
    if (!(knots_[i] < knots_[i + 1])) throw argument_error("knots must be strictly increasing");
}

std::size_t PiecewisePoly::piece_index(double x) const {
  auto it = std::upper_bound(knots_.begin(), knots_.end(), x);
  std::size_t i = static_cast<std::size_t>(it - knots_.begin());
  return i - 1;  // caller guarantees knots_.front() <= x <= knots_.back()
}

double PiecewisePoly::operator()(double x) const {
  if (knots_.empty() || x <= knots_.front()) return left_;
  if (x >= knots_.back()) return right_;
  std::size_t i = piece_index(x);
  double len = knots_[i + 1] - knots_[i];
  return pieces_[i].eval((x - knots_[i]) / len);
}

double PiecewisePoly::deriv(double x) const {
  if (knots_.empty() || x <= knots_.front() || x >= knots_.back()) return 0.0;
  std::size_t i = piece_index(x);
  double len = knots_[i + 1] - knots_[i];
  return pieces_[i].derivative_t().eval((x - knots_[i]) / len) / len;
}

double PiecewisePoly::deriv2(double x) const {
  if (knots_.empty() || x <= knots_.front() || x >= knots_.back()) return 0.0;
  std::size_t i = piece_index(x);
  double len = knots_[i + 1] - knots_[i];
  return pieces_[i].derivative_t().derivative_t().eval((x - knots_[i]) / len) / (len * len);
}

PiecewisePoly PiecewisePoly::derivative() const {
  std::vector<Poly> d(pieces_.size());
  for (std::size_t i = 0; i < pieces_.size(); ++i) {
    double len = knots_[i + 1] - knots_[i];
    d[i] = pieces_[i].derivative_t();
    for (auto& coef : d[i].c) coef /= len;
  }
  return PiecewisePoly(knots_, std::move(d), 0.0, 0.0);
}

PiecewisePoly PiecewisePoly::antiderivative(double start_value) const {
  if (left_ != 0.0 || right_ != 0.0)
    throw argument_error("antiderivative requires zero plateaus");
  std::vector<Poly> anti(pieces_.size());
  double acc = start_value;
  for (std::size_t i = 0; i < pieces_.size(); ++i) {
    double len = knots_[i + 1] - knots_[i];
    const auto& p = pieces_[i].c;
    Poly q;
    q.c.assign(p.size() + 1, 0.0);
    q.c[0] = acc;
    for (std::size_t j = 0; j < p.size(); ++j)
      q.c[j + 1] = p[j] * len / static_cast<double>(j + 1);
    acc = q.eval(1.0);
    anti[i] = std::move(q);
  }
  return PiecewisePoly(knots_, std::move(anti), start_value, acc);
}

double PiecewisePoly::integral_minus(double baseline) const {
  double total = 0.0;
  for (std::size_t i = 0; i < pieces_.size(); ++i) {
    double len = knots_[i + 1] - knots_[i];
    const auto& p = pieces_[i].c;
    double piece = -baseline;
    for (std::size_t j = 0; j < p.size(); ++j) piece += p[j] / static_cast<double>(j + 1);
    total += piece * len;
  }
  return total;
}

namespace {

// int_0^1 p(t) e^{-z t} dt for z = i*xi*len, via endpoint evaluation of
// q(t) = -sum_k p^(k)(t) / z^{k+1} when |z| is large enough, else the
// moment series sum_j (-z)^j/j! int_0^1 p t^j dt.
std::complex<double> unit_oscillatory_integral(const Poly& p, std::complex<double> z) {
  double az = std::abs(z);
  // The endpoint form loses ~|p^(k)|/|z|^k digits to cancellation for small
  // |z|, so below |z| = 4 the moment series is both cheaper and accurate.
  if (az > 4.0) {
    std::complex<double> q0 = 0.0, q1 = 0.0;
    Poly d = p;
    std::complex<double> zk = z;
    for (;;) {
      q0 -= d.eval(0.0) / zk;
      q1 -= d.eval(1.0) / zk;
      if (d.c.size() <= 1) break;
      d = d.derivative_t();
      zk *= z;
    }
    return std::exp(-z) * q1 - q0;
  }
  // moments: int_0^1 p(t) t^j dt = sum_i c_i / (i + j + 1)
  std::complex<double> sum = 0.0, term = 1.0;  // term = (-z)^j / j!
  for (int j = 0; j < 60; ++j) {
    double mj = 0.0;
    for (std::size_t i = 0; i < p.c.size(); ++i)
      mj += p.c[i] / static_cast<double>(i + j + 1);
    sum += term * mj;
    term *= -z / static_cast<double>(j + 1);
    if (std::abs(term) < 1e-22) break;
  }
  return sum;
}

}  // namespace

std::complex<double> PiecewisePoly::fourier_compact(double xi) const {
  if (left_ != right_) throw argument_error("fourier_compact requires equal plateaus");
  return fourier_span(left_, xi);
}

std::complex<double> PiecewisePoly::fourier_span(double baseline, double xi) const {
  const double c = baseline;
  std::complex<double> total = 0.0;
  for (std::size_t i = 0; i < pieces_.size(); ++i) {
    double x0 = knots_[i];
    double len = knots_[i + 1] - x0;
    Poly shifted = pieces_[i];
    if (shifted.c.empty()) shifted.c = {0.0};
    shifted.c[0] -= c;
    std::complex<double> z(0.0, xi * len);
    std::complex<double> unit = unit_oscillatory_integral(shifted, z);
    // e^{-i xi x0} * len * int_0^1 (p - c) e^{-i xi len t} dt
    total += std::polar(len, -xi * x0) * unit;
  }
  return total;
}

double PiecewisePoly::sup_abs(int samples_per_piece) const {
  double m = std::max(std::abs(left_), std::abs(right_));
  for (std::size_t i = 0; i < pieces_.size(); ++i) {
    for (int s = 0; s <= samples_per_piece; ++s) {
      double t = static_cast<double>(s) / samples_per_piece;
      m = std::max(m, std::abs(pieces_[i].eval(t)));
    }
  }
  return m;
}

double PiecewisePoly::sup_abs_on(double a, double b, int samples_per_piece) const {
  double m = 0.0;
  if (knots_.empty() || a < knots_.front()) m = std::max(m, std::abs(left_));
  if (knots_.empty() || b > knots_.back()) m = std::max(m, std::abs(right_));
  for (std::size_t i = 0; i < pieces_.size(); ++i) {
    double lo = std::max(a, knots_[i]), hi = std::min(b, knots_[i + 1]);
    if (lo > hi) continue;
    double len = knots_[i + 1] - knots_[i];
    double t0 = (lo - knots_[i]) / len, t1 = (hi - knots_[i]) / len;
    for (int s = 0; s <= samples_per_piece; ++s) {
      double t = t0 + (t1 - t0) * static_cast<double>(s) / samples_per_piece;
      m = std::max(m, std::abs(pieces_[i].eval(t)));
    }
  }
  return m;
}

std::vector<double> PiecewisePoly::knot_values() const {
  std::vector<double> v(knots_.size());
  if (pieces_.empty()) return v;
  v[0] = pieces_[0].eval(0.0);
  for (std::size_t i = 0; i < pieces_.size(); ++i) v[i + 1] = pieces_[i].eval(1.0);
  return v;
}

Poly smoothstep_poly(double from, double to) {
  double d = to - from;
  Poly p;
  p.c = {from, 0.0, 0.0, 10.0 * d, -15.0 * d, 6.0 * d};
  return p;
}

PiecewisePoly plateau_profile(double lo, double hi, double ramp, double height) {
  if (!(ramp > 0.0) || !(hi - lo > 2.0 * ramp))
    throw argument_error("plateau_profile: need 0 < 2*ramp < hi-lo");
  std::vector<double> knots{lo, lo + ramp, hi - ramp, hi};
  std::vector<Poly> pieces{smoothstep_poly(0.0, height), Poly{{height}},
                           smoothstep_poly(height, 0.0)};
  return PiecewisePoly(std::move(knots), std::move(pieces), 0.0, 0.0);
}

PiecewisePoly plateau_union_profile(const std::vector<Interval>& intervals, double ramp) {
  if (intervals.empty()) throw argument_error("plateau_union_profile: empty interval list");
  std::vector<double> knots;
  std::vector<Poly> pieces;
  for (std::size_t j = 0; j < intervals.size(); ++j) {
    const auto& iv = intervals[j];
    if (!(iv.lo < iv.hi)) throw argument_error("plateau_union_profile: empty interval");
    if (j > 0 && !(intervals[j].lo - intervals[j - 1].hi > 2.0 * ramp))
      throw argument_error("plateau_union_profile: intervals closer than 2*ramp");
    if (j > 0) {
      knots.push_back(intervals[j - 1].hi + ramp);  // gap piece up to next ramp
      pieces.push_back(Poly{{0.0}});
    }
    knots.push_back(iv.lo - ramp);
    pieces.push_back(smoothstep_poly(0.0, 1.0));
    knots.push_back(iv.lo);
    pieces.push_back(Poly{{1.0}});
    knots.push_back(iv.hi);
    pieces.push_back(smoothstep_poly(1.0, 0.0));
  }
  knots.push_back(intervals.back().hi + ramp);
  return PiecewisePoly(std::move(knots), std::move(pieces), 0.0, 0.0);
}

}  // namespace bclab
