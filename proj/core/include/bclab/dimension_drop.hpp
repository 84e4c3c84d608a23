#pragma once

#include <vector>

#include "bclab/observable.hpp"

namespace bclab {

// The adversarial family phi_n for a sub-unit-dimension parameter: layer n's
// derivative is 1 on a union of deep rightmost cylinders (a delta-cover of
// the right edge of the attractor) and 0 outside a delta'-neighborhood,
// giving nonnegative response derivatives that sum without decay.
struct DimensionDropFamily {
  double lambda0 = 0.0;
  double theta = 0.0;
  double beta = 0.0;         // chosen in (dim, 1) with 2*lambda0^beta < 1
  int m_lemma = 0;           // forced all-ones prefix length
  double delta_prime = 0.0;  // X' > 1/2 margin
  int m0 = 0;                // rightmost-cylinder depth
  double eps0 = 0.0;         // half-width of the valid lambda window
  std::vector<int> levels;          // cover level per layer
  std::vector<Observable> layers;   // phi_1 .. phi_{n_max}
  std::vector<double> eps_ladder;   // layer-matched eps_k, strictly decreasing

  Observable combined() const;
};

DimensionDropFamily dimension_drop_phi(double lambda0, double theta, int n_max);

}  // namespace bclab
