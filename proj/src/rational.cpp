#include "thetalab/rational.hpp"

#include <cmath>

#include "thetalab/error.hpp"

namespace thetalab {

Rational parse_rational(const std::string& text) {
  Rational q;
  if (q.set_str(text, 10) != 0 || q.get_den() == 0)
    throw Error(ErrorKind::ParseError, "not a rational: '" + text + "'");
  q.canonicalize();
  return q;
}

int64_t padic_valuation(const Integer& n, int64_t p) {
  if (n == 0) return kInfiniteValuation;
  Integer m = abs(n);
  Integer pp = static_cast<long>(p);
  int64_t v = 0;
  while (mpz_divisible_p(m.get_mpz_t(), pp.get_mpz_t())) {
    m /= pp;
    ++v;
  }
  return v;
}

int64_t padic_valuation(const Rational& q, int64_t p) {
  if (q == 0) return kInfiniteValuation;
  return padic_valuation(q.get_num(), p) - padic_valuation(q.get_den(), p);
}

Rational reconstruct_rational(long double value, int64_t max_den, long double tol, bool& found) {
  // Convergents h/k of the continued fraction of value.
  long double x = value;
  Integer h_prev = 1, h = 0, k_prev = 0, k = 1;
  Rational best = 0;
  found = false;
  for (int iter = 0; iter < 64; ++iter) {
    long double a = std::floor(x);
    Integer ai(static_cast<double>(a));
    Integer h_next = ai * h_prev + h;
    Integer k_next = ai * k_prev + k;
    h = h_prev;
    k = k_prev;
    h_prev = h_next;
    k_prev = k_next;
    if (k_prev > max_den) break;
    Rational cand(h_prev, k_prev);
    cand.canonicalize();
    long double diff = std::fabs(static_cast<long double>(cand.get_d()) - value);
    if (diff <= tol) {
      best = cand;
      found = true;
      break;
    }
    long double frac = x - a;
    if (frac == 0) break;
    x = 1 / frac;
  }
  return best;
}

}  // namespace thetalab
