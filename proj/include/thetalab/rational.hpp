#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>

namespace thetalab {

using Integer = mpz_class;
/// GMP rationals are kept canonical (reduced, positive denominator).
using Rational = mpq_class;

inline Rational make_rational(int64_t num, int64_t den = 1) {
  Rational q(static_cast<long>(num), static_cast<long>(den));
  q.canonicalize();
  return q;
}

/// "num/den" form, always with an explicit denominator.
inline std::string to_fraction_string(const Rational& q) {
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

Rational parse_rational(const std::string& text);

/// p-adic valuation of a nonzero rational; returns a large sentinel for 0.
int64_t padic_valuation(const Rational& q, int64_t p);
int64_t padic_valuation(const Integer& n, int64_t p);

constexpr int64_t kInfiniteValuation = int64_t{1} << 40;

/// Best rational approximation with denominator at most max_den
/// (continued fractions). `found` is false if the residual exceeds tol.
Rational reconstruct_rational(long double value, int64_t max_den, long double tol, bool& found);

}  // namespace thetalab
