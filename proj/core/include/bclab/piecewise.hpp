#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "bclab/errors.hpp"
#include "bclab/symbolic.hpp"

namespace bclab {

// Polynomial in a normalized local coordinate t in [0,1].
struct Poly {
  std::vector<double> c;  // c[0] + c[1] t + c[2] t^2 + ...

  double eval(double t) const {
    double v = 0.0;
    for (std::size_t i = c.size(); i-- > 0;) v = v * t + c[i];
    return v;
  }
  Poly derivative_t() const;  // d/dt
  int degree() const { return c.empty() ? 0 : static_cast<int>(c.size()) - 1; }
};

// Piecewise polynomial on contiguous knots, constant outside [knots.front(),
// knots.back()]. Piece i lives on [knots[i], knots[i+1]] and stores its
// coefficients in t = (x - knots[i]) / (knots[i+1] - knots[i]).
class PiecewisePoly {
 public:
  PiecewisePoly() = default;
  PiecewisePoly(std::vector<double> knots, std::vector<Poly> pieces,
                double left_value, double right_value);

  double operator()(double x) const;
  // First and second derivative in x (zero outside the knot span).
  double deriv(double x) const;
  double deriv2(double x) const;

  PiecewisePoly derivative() const;
  // Integral of this function from knots.front(), plus start_value; requires
  // zero plateaus on both sides so the result is constant outside the span.
  PiecewisePoly antiderivative(double start_value) const;

  // integral over the span of (f - baseline)
  double integral_minus(double baseline) const;

  // Exact transform int (f(x) - c) e^{-i xi x} dx with c the common plateau
  // value; requires left_value == right_value == c.
  std::complex<double> fourier_compact(double xi) const;
  // Same integral restricted to the knot span, against an arbitrary baseline.
  std::complex<double> fourier_span(double baseline, double xi) const;

  // Conservative bound on sup |f| / sup over [a,b]; samples each piece
  // densely and includes all knots (exact for monotone pieces).
  double sup_abs(int samples_per_piece = 16) const;
  double sup_abs_on(double a, double b, int samples_per_piece = 16) const;

  const std::vector<double>& knots() const { return knots_; }
  const std::vector<Poly>& pieces() const { return pieces_; }
  double left_value() const { return left_; }
  double right_value() const { return right_; }
  double span_lo() const { return knots_.empty() ? 0.0 : knots_.front(); }
  double span_hi() const { return knots_.empty() ? 0.0 : knots_.back(); }

  // value at every knot (continuity is the builder's responsibility)
  std::vector<double> knot_values() const;

 private:
  std::size_t piece_index(double x) const;

  std::vector<double> knots_;
  std::vector<Poly> pieces_;
  double left_ = 0.0;
  double right_ = 0.0;
};

// Quintic smoothstep s(t) = 6t^5 - 15t^4 + 10t^3: C^2 ramp with s(0)=0, s(1)=1
// and vanishing first and second derivatives at both ends.
Poly smoothstep_poly(double from, double to);
inline constexpr double kSmoothstepMaxD1 = 15.0 / 8.0;      // sup |s'|
inline const double kSmoothstepMaxD2 = 10.0 / std::sqrt(3.0);  // sup |s''|
inline constexpr double kSmoothstepIntegral = 0.5;          // int_0^1 s(t) dt

// Profile that is 0 outside [lo, hi], `height` on [lo+ramp, hi-ramp], with
// smoothstep ramps of width `ramp` on both sides.
PiecewisePoly plateau_profile(double lo, double hi, double ramp, double height);

// Union-of-plateaus profile: height 1 on each [a_j, b_j], smoothstep ramps of
// width `ramp` outside them, zero elsewhere. Intervals must be sorted and
// separated by more than 2*ramp.
PiecewisePoly plateau_union_profile(const std::vector<Interval>& intervals, double ramp);

}  // namespace bclab
