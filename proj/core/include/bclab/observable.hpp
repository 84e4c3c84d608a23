#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "bclab/piecewise.hpp"
#include "bclab/symbolic.hpp"

namespace bclab {

enum class Smoothness { C0 = 0, C1 = 1, C2 = 2 };

// The paper's C^2 bump family g_rho on [0,2]: zero outside
// [(1-rho)/3, 2-(1-rho)/3], identically 1 on [1-rho, 1+rho], quintic
// smoothstep ramps of width w = 2(1-rho)/3 in between.
struct BumpProfile {
  double rho = 0.0;
  double ramp_width = 0.0;           // w
  PiecewisePoly g;                   // the bump
  PiecewisePoly antiderivative;      // int_0^x g, constant right of the support
  double c2_norm = 0.0;              // sup|g| + sup|g'| + sup|g''|
  double integral = 0.0;             // int_0^2 g = 2 rho + w
};

BumpProfile make_bump(double rho);

// One sampled generalized-Brownian-motion path phi_{N,rho}: derivative on
// cell j = [2(j-1)/N, 2j/N] is s_j * N^theta1 * g_rho mapped onto the cell,
// with s_j in {-1,0,+1}.
struct GbmInstance {
  int N = 0;
  double theta1 = 0.0, theta2 = 0.0, rho = 0.0;
  std::uint64_t seed = 0;
  std::vector<std::int8_t> signs;        // length N
  std::vector<double> prefix_integrals;  // phi at cell boundaries, length N+1
  PiecewisePoly phi;
  double cell_step = 0.0;  // N^{theta1-1} * int_0^2 g_rho (one full cell's integral)

  double sup_abs() const;        // exact: cell boundaries are the extrema
  double sup_abs_deriv() const;  // N^theta1 if any cell is active, else 0
};

GbmInstance sample_gbm(int N, double theta1, double theta2, double rho, std::uint64_t seed);
GbmInstance make_gbm_from_signs(int N, double theta1, double theta2, double rho,
                                std::vector<std::int8_t> signs, std::uint64_t seed = 0);

// Composite observable: a linear combination of closed-form parts. Evaluation
// is total on R; derivative evaluation is exact (piecewise polynomial) for
// smoothness >= C1.
class Observable {
 public:
  struct PolynomialPart {
    std::vector<double> coeffs;  // global monomial coefficients in x
    std::optional<Interval> clamp;  // evaluate at clamp(x): constant extension
  };
  struct BumpPart {
    double rho = 0.0, center = 1.0, radius = 1.0;
    PiecewisePoly f;
  };
  struct GbmPart {
    GbmInstance inst;
  };
  // One dimension-drop layer: derivative profile is 1 on each interval with
  // smoothstep ramps of width `ramp`; f is its integral from the left.
  struct LayerPart {
    std::vector<Interval> intervals;
    double ramp = 0.0;
    int index = 0;  // n
    int level = 0;  // cylinder level of the cover
    PiecewisePoly f;
  };
  struct WeierstrassPart {
    double a = 0.0, b = 0.0;
    int terms = 0;
  };
  using Part = std::variant<PolynomialPart, BumpPart, GbmPart, LayerPart, WeierstrassPart>;
  struct Component {
    double coeff = 1.0;
    Part part;
  };

  Observable() = default;
  explicit Observable(std::vector<Component> components);

  static Observable constant(double c);
  static Observable polynomial(std::vector<double> coeffs,
                               std::optional<Interval> clamp = std::nullopt);
  static Observable coordinate() { return polynomial({0.0, 1.0}); }
  static Observable square() { return polynomial({0.0, 0.0, 1.0}); }
  // Bump with plateau [center - rho*radius, center + rho*radius]; the
  // canonical g_rho of the paper is bump(rho) with center 1, radius 1.
  static Observable bump(double rho, double center = 1.0, double radius = 1.0);
  static Observable gbm(GbmInstance inst);
  static Observable layer(std::vector<Interval> intervals, double ramp, int index, int level);

  double operator()(double x) const;
  double deriv(double x) const;
  double deriv2(double x) const;

  Smoothness smoothness() const { return smoothness_; }
  std::optional<double> holder_exponent() const { return holder_exponent_; }
  std::optional<double> holder_constant() const { return holder_constant_; }
  std::optional<Interval> support_hint() const { return support_hint_; }
  // (left, right) constant values outside the support hint, when it exists.
  std::optional<std::pair<double, double>> plateau() const;

  // Conservative sup bounds used for error estimates (exact for monotone parts).
  double sup_abs() const;
  double sup_abs_deriv() const;   // requires smoothness >= C1
  double sup_abs_deriv2() const;  // requires smoothness >= C2
  // Rigorous sup|phi'| over an interval; finite even for global polynomials
  // and Weierstrass partial sums (coefficient bounds).
  double deriv_bound_on(const Interval& iv) const;
  double deriv2_bound_on(const Interval& iv) const;
  double deriv3_bound_on(const Interval& iv) const;

  const std::vector<Component>& components() const { return components_; }

  Observable scaled(double c) const;
  friend Observable operator+(const Observable& a, const Observable& b);
  friend Observable operator-(const Observable& a, const Observable& b);

 private:
  void finalize();

  std::vector<Component> components_;
  Smoothness smoothness_ = Smoothness::C2;
  std::optional<double> holder_exponent_, holder_constant_;
  std::optional<Interval> support_hint_;
};

// W_{a,b} partial sum: sum_{n=1}^{terms} sin(a^n x)/b^n, with the geometric
// tail bound b^{-terms}/(b-1) recorded as part of the declared data.
Observable weierstrass(double a, double b, int terms);

struct HolderEstimate {
  double lower_estimate = 0.0;           // max two-point modulus over dyadic grid pairs
  std::optional<double> upper_bound;     // 2 sup|f'|^a sup|f|^{1-a} + sup|f| when C1 data exists
};

HolderEstimate holder_norm_estimate(const Observable& phi, double alpha, int grid_size);

// JSON round trip for replayable experiments; schema is one
// {"type","params",...,"signs"} object per component.
std::string observable_to_json(const Observable& phi);
Observable observable_from_json(const std::string& json_text);

}  // namespace bclab
