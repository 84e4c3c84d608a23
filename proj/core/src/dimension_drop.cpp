#include "bclab/dimension_drop.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "bclab/errors.hpp"
#include "bclab/measure.hpp"

namespace bclab {

Observable DimensionDropFamily::combined() const {
  std::vector<Observable::Component> cs;
  for (const auto& l : layers)
    for (const auto& c : l.components()) cs.push_back(c);
  return Observable(std::move(cs));
}

DimensionDropFamily dimension_drop_phi(double lambda0, double theta, int n_max) {
  require_lambda(lambda0);
  if (!(lambda0 < 0.5))
    throw domain_error(
        "dimension drop requires lambda0 < 1/2; no constructive full-measure "
        "small-dimension set is available above 1/2");
  if (!(theta > 0.0 && theta < 1.0)) throw domain_error("theta must lie in (0,1)");
  if (n_max < 1) throw argument_error("n_max must be >= 1");

  DimensionDropFamily fam;
  fam.lambda0 = lambda0;
  fam.theta = theta;

  const double dim = std::log(2.0) / (-std::log(lambda0));
  fam.beta = dim + 0.25 * (1.0 - dim);  // in (dim,1), so 2*lambda0^beta < 1

  // X' > 1/2 margin on a pre-window around lambda0, then shrink eps0 until the
  // rightmost level-m0 cylinder stays inside the margin across the window.
  double lo0 = 0.99 * lambda0;
  double hi0 = std::min(1.01 * lambda0, 0.5 * (lambda0 + 0.5));
  auto lb = x1_lower_bound_params(lo0, hi0);
  fam.m_lemma = lb.m;
  fam.delta_prime = lb.delta_prime;

  const double R = support_radius(lambda0);
  int m0 = 1;
  while (2.0 * std::pow(lambda0, m0) * R >= 0.5 * fam.delta_prime) {
    ++m0;
    if (m0 > kMaxEnumerationDepth)
      throw resource_error("dimension drop: rightmost depth m0 exceeds the level-26 cap");
  }
  fam.m0 = m0;
  double slack = fam.delta_prime - 2.0 * std::pow(lambda0, m0) * R;
  double om = 1.0 - lambda0;
  fam.eps0 = std::min(0.5 * slack * om * om, lambda0 * 0.009);
  // window check: 1/(1-l0-eps0) - 1/(1-l0) must stay below the slack
  if (!(1.0 / (1.0 - lambda0 - fam.eps0) - 1.0 / om < slack))
    throw numeric_error("dimension drop: window construction failed");

  // covers: all level-l cylinders extending the all-plus prefix of length m0
  const double theta_exp = 1.0 + 2.0 * theta / (1.0 - theta);
  double prev_eps = std::numeric_limits<double>::infinity();
  for (int n = 1; n <= n_max; ++n) {
    auto diam = [&](int level) { return 2.0 * std::pow(lambda0, level) * R; };
    int lmin = m0 + 1;
    for (;; ++lmin) {
      if (lmin > kMaxEnumerationDepth)
        throw resource_error("dimension drop: required cover level exceeds 26");
      double d = diam(lmin);
      double sum_beta = std::ldexp(1.0, lmin - m0) * std::pow(d, fam.beta);
      bool a = sum_beta < 1.0 / n;
      bool b = std::pow(d, 1.0 - fam.beta) < std::pow(n, -theta_exp);
      if (a && b) break;
    }
    // strictly increasing levels with a two-level gap so the eps ladder
    // separates adjacent layers' lambda scales
    int level = std::max(lmin, m0 + 2 * n);
    if (level > kMaxEnumerationDepth)
      throw resource_error("dimension drop: required cover level exceeds 26");
    fam.levels.push_back(level);

    int suffix_bits = level - m0;
    std::int64_t count = std::int64_t(1) << suffix_bits;
    std::vector<Interval> cover(static_cast<std::size_t>(count));
    double half = std::pow(lambda0, level) * R;
    // prefix center: all-plus word of length m0
    double prefix_center = 0.0;
    for (int i = 0; i < m0; ++i) prefix_center += std::pow(lambda0, i);
    for (std::int64_t w = 0; w < count; ++w) {
      double ctr = prefix_center;
      for (int i = 0; i < suffix_bits; ++i) {
        double s = (w >> i) & 1 ? 1.0 : -1.0;
        ctr += s * std::pow(lambda0, m0 + i);
      }
      cover[static_cast<std::size_t>(w)] = Interval{ctr - half, ctr + half};
    }
    std::sort(cover.begin(), cover.end(),
              [](const Interval& a, const Interval& b) { return a.lo < b.lo; });

    double gap = cylinder_gap(lambda0, level);
    double ramp = std::min({fam.delta_prime, gap / 3.0, half});
    fam.layers.push_back(Observable::layer(std::move(cover), ramp, n, level));

    // layer-matched eps: twice the cover interval width, kept strictly
    // decreasing and inside the window
    double eps = std::min({2.0 * diam(level), 0.7 * fam.eps0, 0.45 * prev_eps});
    fam.eps_ladder.push_back(eps);
    prev_eps = eps;
  }
  return fam;
}

}  // namespace bclab
