#pragma once

#include <boost/multiprecision/float128.hpp>

#include <string>

namespace thetalab {

/// Working real type for periods and L-values: IEEE binary128 (113-bit
/// mantissa, about 33 decimal digits).
using Real = boost::multiprecision::float128;

constexpr int kRealDigits = 33;

/// Minimal complex type over Real; std::complex is unspecified for
/// non-builtin floating types.
struct Complex {
  Real re = 0;
  Real im = 0;

  Complex() = default;
  Complex(Real r, Real i = 0) : re(r), im(i) {}

  Complex operator+(const Complex& o) const { return {re + o.re, im + o.im}; }
  Complex operator-(const Complex& o) const { return {re - o.re, im - o.im}; }
  Complex operator-() const { return {-re, -im}; }
  Complex operator*(const Complex& o) const { return {re * o.re - im * o.im, re * o.im + im * o.re}; }
  Complex operator*(const Real& s) const { return {re * s, im * s}; }
  Complex operator/(const Complex& o) const {
    const Real d = o.re * o.re + o.im * o.im;
    return {(re * o.re + im * o.im) / d, (im * o.re - re * o.im) / d};
  }
  Complex& operator+=(const Complex& o) {
    re += o.re;
    im += o.im;
    return *this;
  }
  Complex& operator-=(const Complex& o) {
    re -= o.re;
    im -= o.im;
    return *this;
  }
  Complex conj() const { return {re, -im}; }
  Real abs() const { return boost::multiprecision::sqrt(re * re + im * im); }
};

inline Real real_pi() { return boost::multiprecision::acos(Real(-1)); }

/// exp(2 pi i k / n)
inline Complex root_of_unity(long long k, long long n) {
  const Real angle = 2 * real_pi() * Real(k) / Real(n);
  return {boost::multiprecision::cos(angle), boost::multiprecision::sin(angle)};
}

inline std::string to_decimal(const Real& x, int digits = 30) { return x.str(digits, std::ios_base::scientific); }

}  // namespace thetalab
