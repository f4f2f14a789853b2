#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "thetalab/rational.hpp"
#include "thetalab/real.hpp"

namespace thetalab {

/// Elliptic curve over Q in long Weierstrass form
/// y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6.
struct CurveQ {
  std::string label;
  std::array<Integer, 5> ainvs;

  /// Throws SingularCurve when the discriminant vanishes.
  CurveQ(std::array<Integer, 5> a, std::string lbl = {});
  static CurveQ from_ints(std::array<long, 5> a, std::string lbl = {});

  const Integer& a1() const { return ainvs[0]; }
  const Integer& a2() const { return ainvs[1]; }
  const Integer& a3() const { return ainvs[2]; }
  const Integer& a4() const { return ainvs[3]; }
  const Integer& a6() const { return ainvs[4]; }

  Integer b2() const;
  Integer b4() const;
  Integer b6() const;
  Integer b8() const;
  Integer c4() const;
  Integer c6() const;
  Integer discriminant() const;

  std::string ainvs_string() const;
  bool operator==(const CurveQ& o) const { return ainvs == o.ainvs; }
};

/// Change of coordinates x = u^2 x' + r, y = u^3 y' + s u^2 x' + t, with
/// u = 1 (pure translation) when not scaling.
CurveQ change_coordinates(const CurveQ& e, const Integer& r, const Integer& s, const Integer& t);

enum class ReductionKind { Good, SplitMultiplicative, NonsplitMultiplicative, Additive };

std::string to_string(ReductionKind kind);

struct ReductionData {
  int64_t prime = 0;
  std::string kodaira;  // "I0", "I5", "II", "III", "IV", "I0*", "I2*", "IV*", "III*", "II*"
  int64_t tamagawa = 1;
  int conductor_exponent = 0;
  int64_t discriminant_valuation = 0;
  ReductionKind kind = ReductionKind::Good;
  int64_t ap = 0;
};

/// Globally minimal model with a1, a3 in {0,1} and a2 in {-1,0,1}.
CurveQ minimal_model(const CurveQ& curve);

/// Tate's algorithm at one prime; the model must be minimal there.
ReductionData tate_local(const CurveQ& curve, int64_t ell);

/// Conductor from Tate's algorithm at every prime dividing the discriminant.
int64_t conductor(const CurveQ& curve);

/// Bad primes (divisors of the minimal discriminant) in increasing order.
std::vector<int64_t> bad_primes(const CurveQ& curve);

/// #E(F_ell) by enumeration; the curve must have good reduction at ell.
int64_t count_points(const CurveQ& curve, int64_t ell);

/// a_ell = ell + 1 - #E(F_ell) for a prime of good reduction.
int64_t ap_count(const CurveQ& curve, int64_t ell);

/// #E(F_{ell^f}) from a_ell via the Frobenius power recursion.
Integer count_points_extension(int64_t ell, int64_t ap, int64_t f);

/// Order of E(Q)_tors: a reduction bound confirmed by explicit point search.
int64_t torsion_order(const CurveQ& curve);

struct RealPeriods {
  Real omega_plus;   // least positive real period
  Real omega_minus;  // imaginary period with the factor i removed
  int c_infty = 1;   // number of connected components of E(R)
  int precision = 0; // decimal digits
};

/// Real periods via the arithmetic-geometric mean. Digits above what the
/// working precision can certify raise PrecisionUnreachable.
RealPeriods real_period(const CurveQ& curve, int digits = 30);

}  // namespace thetalab
