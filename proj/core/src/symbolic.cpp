#include "bclab/symbolic.hpp"

#include <cmath>

namespace bclab {

SignWord::SignWord(std::vector<std::int8_t> signs) : signs_(std::move(signs)) {
  for (auto s : signs_)
    if (s != -1 && s != 1) throw argument_error("sign word entries must be -1 or +1");
}

SignWord::SignWord(std::initializer_list<int> signs) {
  signs_.reserve(signs.size());
  for (int s : signs) {
    if (s != -1 && s != 1) throw argument_error("sign word entries must be -1 or +1");
    signs_.push_back(static_cast<std::int8_t>(s));
  }
}

SignWord SignWord::repeated(int sign, int count) {
  if (sign != -1 && sign != 1) throw argument_error("sign must be -1 or +1");
  if (count < 0) throw argument_error("negative word length");
  return SignWord(std::vector<std::int8_t>(static_cast<std::size_t>(count),
                                           static_cast<std::int8_t>(sign)));
}

SignWord SignWord::from_bits(std::uint64_t bits, int length) {
  if (length < 0 || length > 64) throw argument_error("word length must be in [0,64]");
  std::vector<std::int8_t> s(static_cast<std::size_t>(length));
  for (int i = 0; i < length; ++i) s[static_cast<std::size_t>(i)] = (bits >> i) & 1 ? 1 : -1;
  return SignWord(std::move(s));
}

SignWord SignWord::extended(int sign) const {
  if (sign != -1 && sign != 1) throw argument_error("sign must be -1 or +1");
  std::vector<std::int8_t> s = signs_;
  s.push_back(static_cast<std::int8_t>(sign));
  return SignWord(std::move(s));
}

Extension Extension::alternating() {
  return Extension([](int i) { return (i % 2 == 0) ? 1 : -1; });
}

Extension Extension::with(std::function<int(int)> fn) { return Extension(std::move(fn)); }

int Extension::sign_at(int extended_index) const {
  if (fill_ != 0) return fill_;
  int s = fn_(extended_index);
  if (s != -1 && s != 1) throw argument_error("extension rule must return -1 or +1");
  return s;
}

double geometric_tail(double lambda, int M) {
  // sum_{m >= M} lambda^{m-1} = lambda^{M-1} / (1-lambda); M >= 1.
  return std::pow(lambda, M - 1) / (1.0 - lambda);
}

double geometric_tail_d1(double lambda, int M) {
  // sum_{m >= M} m lambda^{m-1} = lambda^{M-1} (M - (M-1)lambda) / (1-lambda)^2.
  double om = 1.0 - lambda;
  return std::pow(lambda, M - 1) * (M - (M - 1) * lambda) / (om * om);
}

double geometric_tail_d2(double lambda, int M) {
  // sum_{m >= M} m(m-1) lambda^{m-2}
  //   = lambda^{M-2} [M(M-1)(1-lambda)^2 + 2 lambda (M - (M-1)lambda)] / (1-lambda)^3.
  if (M < 2) M = 2;
  double om = 1.0 - lambda;
  double inner = M * (M - 1.0) * om * om + 2.0 * lambda * (M - (M - 1.0) * lambda);
  return std::pow(lambda, M - 2) * inner / (om * om * om);
}

SeriesEval eval_series(double lambda, const SignWord& word, int depth, const Extension& ext) {
  require_lambda(lambda);
  if (depth < 1) throw argument_error("depth must be positive");
  if (word.size() > depth) throw argument_error("depth must be >= word length");

  SeriesEval out;
  double pw = 1.0;  // lambda^{m-1}
  for (int m = 1; m <= depth; ++m) {
    int a = (m <= word.size()) ? word.at(m - 1) : ext.sign_at(m - 1 - word.size());
    out.x += a * pw;
    // X' term with coefficient m uses the sign a_{m+1}, so shift by one slot.
    if (m >= 2) {
      int n = m - 1;  // n a_{n+1} lambda^{n-1}
      double pw1 = pw / lambda;
      out.x1 += n * a * pw1;
      if (m >= 3) out.x2 += n * (n - 1.0) * a * (pw1 / lambda);
    }
    pw *= lambda;
  }
  out.tail_x = geometric_tail(lambda, depth + 1);       // first omitted index is depth+1
  out.tail_x1 = geometric_tail_d1(lambda, depth);       // omitted X' terms have n >= depth
  out.tail_x2 = geometric_tail_d2(lambda, depth);
  return out;
}

Cylinder cylinder_of(double lambda, const SignWord& word) {
  require_lambda(lambda);
  double r = support_radius(lambda);
  Interval iv{-r, r};
  // C_w = f_{w_1} o ... o f_{w_m}(K), so apply the last letter first.
  for (int i = word.size() - 1; i >= 0; --i) {
    double s = word.at(i);
    iv.lo = lambda * iv.lo + s;
    iv.hi = lambda * iv.hi + s;
  }
  return Cylinder{word, lambda, iv};
}

double cylinder_gap(double lambda, int level) {
  require_lambda(lambda);
  if (lambda >= 0.5) throw domain_error("cylinder gaps require lambda < 1/2");
  if (level < 1) throw argument_error("level must be positive");
  return 2.0 * std::pow(lambda, level - 1) * (1.0 - 2.0 * lambda) / (1.0 - lambda);
}

X1LowerBoundParams x1_lower_bound_params(double lambda_lo, double lambda_hi) {
  require_lambda(lambda_lo);
  require_lambda(lambda_hi);
  if (lambda_lo > lambda_hi) throw argument_error("lambda_lo must be <= lambda_hi");
  int m = 10;
  while (geometric_tail_d1(lambda_hi, m) >= 0.5) {
    ++m;
    if (m > 100000) throw numeric_error("x1 lower bound: no feasible m");
  }
  // Lemma value delta^{m-1}/2, shrunk by 4 so the implication keeps holding on
  // a 4*delta'-margin as the support endpoint moves within the window.
  double dp = std::pow(lambda_lo, m - 1) / 2.0 / 4.0;
  return {m, dp};
}

}  // namespace bclab
