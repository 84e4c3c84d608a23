#pragma once

#include <cstdint>
#include <functional>
#include <initializer_list>
#include <vector>

#include "bclab/errors.hpp"

namespace bclab {

// Finite prefix of a sign sequence a in {-1,+1}^N. The IFS alphabet {1,2} is
// identified with {-1,+1}: -1 <-> f1(x) = lambda*x - 1, +1 <-> f2(x) = lambda*x + 1.
class SignWord {
 public:
  SignWord() = default;
  explicit SignWord(std::vector<std::int8_t> signs);
  SignWord(std::initializer_list<int> signs);

  static SignWord repeated(int sign, int count);
  // Low bit of `bits` is a_1; set bit = +1, clear bit = -1.
  static SignWord from_bits(std::uint64_t bits, int length);

  int size() const { return static_cast<int>(signs_.size()); }
  int at(int i) const { return signs_[static_cast<std::size_t>(i)]; }  // 0-based
  const std::vector<std::int8_t>& signs() const { return signs_; }

  SignWord extended(int sign) const;

  bool operator==(const SignWord&) const = default;

 private:
  std::vector<std::int8_t> signs_;
};

// Rule for continuing a finite word to the evaluation depth.
class Extension {
 public:
  static Extension plus() { return Extension(+1); }
  static Extension minus() { return Extension(-1); }
  static Extension alternating();  // +1, -1, +1, ... starting at the first extended slot
  // fn(i) must return +1 or -1 for the i-th extended position (i = 0,1,...).
  static Extension with(std::function<int(int)> fn);

  int sign_at(int extended_index) const;

 private:
  explicit Extension(int fill) : fill_(fill) {}
  explicit Extension(std::function<int(int)> fn) : fill_(0), fn_(std::move(fn)) {}
  int fill_;
  std::function<int(int)> fn_;
};

// Partial sums of X, X' and X'' in lambda together with rigorous tail bounds
// for the omitted terms.
struct SeriesEval {
  double x = 0.0;
  double x1 = 0.0;
  double x2 = 0.0;
  double tail_x = 0.0;
  double tail_x1 = 0.0;
  double tail_x2 = 0.0;
};

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  double length() const { return hi - lo; }
  bool contains(double x) const { return lo <= x && x <= hi; }
  bool contains(const Interval& other) const { return lo <= other.lo && other.hi <= hi; }
};

struct Cylinder {
  SignWord word;
  double lambda = 0.0;
  Interval interval;
  int level() const { return word.size(); }
};

// Geometric tails: sum_{m >= M} lambda^{m-1}, sum m*lambda^{m-1}, sum m(m-1)*lambda^{m-2}.
double geometric_tail(double lambda, int M);
double geometric_tail_d1(double lambda, int M);
double geometric_tail_d2(double lambda, int M);

// Half-width of the support K_lambda = [-1/(1-lambda), 1/(1-lambda)].
inline double support_radius(double lambda) { return 1.0 / (1.0 - lambda); }

// Evaluates X = sum a_m lambda^{m-1} over the first `depth` terms, the word
// extended by `ext`; tail_x = lambda^depth/(1-lambda).
SeriesEval eval_series(double lambda, const SignWord& word, int depth,
                       const Extension& ext = Extension::plus());

// Image of K_lambda under the word's map composition (first letter applied last).
Cylinder cylinder_of(double lambda, const SignWord& word);

// Lower bound d_l on the distance between distinct level-l cylinders; only
// meaningful in the Cantor regime lambda < 1/2.
double cylinder_gap(double lambda, int level);

// Threshold pair (m, delta') such that, for lambda in [lambda_lo, lambda_hi],
// X(lambda;a) > 1/(1-lambda) - delta' forces a_1 = ... = a_m = +1 and then
// X'(lambda;a) > 1/2. m >= 10 and sum_{n>=m} n*lambda_hi^{n-1} < 1/2.
struct X1LowerBoundParams {
  int m = 0;
  double delta_prime = 0.0;
};
X1LowerBoundParams x1_lower_bound_params(double lambda_lo, double lambda_hi);

}  // namespace bclab
