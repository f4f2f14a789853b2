#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "thetalab/rational.hpp"

namespace thetalab {

/// Integer coefficients of the n-th cyclotomic polynomial, lowest degree
/// first. Computed by dividing z^n - 1 by Phi_d for proper divisors d and
/// cached per level.
const std::vector<Integer>& cyclotomic_polynomial(int64_t n);

/// Exact element of Q(zeta_n) in the power basis 1, zeta, ..., zeta^(phi(n)-1)
/// reduced modulo Phi_n, with zeta_n = exp(2 pi i / n) under the complex
/// embedding used by `to_complex`.
class CycloElem {
 public:
  /// Zero of Q(zeta_level).
  explicit CycloElem(int64_t level = 1);
  CycloElem(int64_t level, std::vector<Rational> coeffs);

  static CycloElem from_rational(int64_t level, const Rational& q);
  /// zeta_level^e for any integer e.
  static CycloElem zeta_power(int64_t level, int64_t e);

  int64_t level() const { return level_; }
  const std::vector<Rational>& coeffs() const { return coeffs_; }
  int64_t degree() const { return static_cast<int64_t>(coeffs_.size()); }

  bool is_zero() const;
  bool is_rational() const;
  /// Constant coordinate; only meaningful when is_rational().
  const Rational& rational_part() const { return coeffs_[0]; }

  CycloElem operator+(const CycloElem& o) const;
  CycloElem operator-(const CycloElem& o) const;
  CycloElem operator-() const;
  CycloElem operator*(const CycloElem& o) const;
  CycloElem operator*(const Rational& q) const;
  CycloElem& operator+=(const CycloElem& o);
  CycloElem& operator-=(const CycloElem& o);
  CycloElem& operator*=(const CycloElem& o) { return *this = *this * o; }
  bool operator==(const CycloElem& o) const;

  /// Multiplicative inverse via extended Euclid against Phi_level.
  CycloElem inverse() const;

  /// The automorphism zeta -> zeta^t, gcd(t, level) = 1.
  CycloElem galois(int64_t t) const;
  /// Re-expresses the element in Q(zeta_m), level | m.
  CycloElem embed(int64_t m) const;

  /// Product of all Galois conjugates; always rational.
  Rational norm() const;

  /// Numerical value at zeta_n = exp(2 pi i / n), in long double.
  void to_complex(long double& re, long double& im) const;

  std::string to_string() const;

  /// In-place += q * zeta^e.
  void add_zeta_power(int64_t e, const Rational& q);

 private:
  int64_t level_;
  std::vector<Rational> coeffs_;
};


/// Sums of rational multiples of roots of unity, collected modulo
/// z^level - 1 and reduced by Phi_level once at the end.
class CycloAccumulator {
 public:
  explicit CycloAccumulator(int64_t level);
  void add(int64_t e, const Rational& q);
  /// Adds zeta^shift * x.
  void add(const CycloElem& x, int64_t shift = 0);
  CycloElem finish() const;

 private:
  int64_t level_;
  std::vector<Rational> raw_;
};

/// Brings a and b to the common level lcm(a.level, b.level).
int64_t common_level(const CycloElem& a, const CycloElem& b);

}  // namespace thetalab
