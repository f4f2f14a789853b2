#pragma once

#include <cstdint>
#include <vector>

#include "thetalab/characters.hpp"
#include "thetalab/curve.hpp"
#include "thetalab/real.hpp"

namespace thetalab {

/// Dirichlet coefficients a_1..a_M of L(E, s) for the minimal model of E.
struct LSeriesData {
  CurveQ curve;   // minimal model
  int64_t level = 1;
  std::vector<int64_t> an;  // an[0] = 0, an[n] for 1 <= n <= M
  std::vector<int64_t> bad;
  int root_number = 1;  // from the functional equation
  int64_t bound() const { return static_cast<int64_t>(an.size()) - 1; }
};

struct ApproxValue {
  Complex value;
  Real error_bound = 0;
};

constexpr int64_t kMaxCoefficients = 5'000'000;

/// Also fixes the root number numerically. Throws BoundTooLarge above
/// kMaxCoefficients.
LSeriesData an_coeffs(const CurveQ& curve, int64_t M);

/// Number of coefficients needed for the two-sum expansion at analytic
/// conductor f^2 N to reach tolerance tol.
int64_t terms_needed(int64_t level, int64_t chi_conductor, const Real& tol);

/// L(E, chi, 1) for chi with conductor coprime to the level, computed with
/// the primitive character inducing chi, times the Euler factors
/// (1 - a_l chi(l)/l + chi(l)^2/l) (or 1 - a_l chi(l)/l at bad l) for every
/// l in truncate_at not dividing the conductor of chi. Coefficients are
/// extended when `data` is too short.
ApproxValue twisted_lvalue(const LSeriesData& data, const DirichletChar& chi, const std::vector<int64_t>& truncate_at = {},
                           const Real& tol = Real("1e-8"));

/// w(E) chi(N) tau(chi)^2 / f for primitive chi of conductor f coprime to N.
Complex twist_root_number(int root_number, int64_t level, const DirichletChar& chi);

/// Root number of E from the functional equation: the sign w for which the
/// split expansion of Lambda(1) is independent of the split point.
int numerical_root_number(const LSeriesData& data);

/// Lambda-split expansion of L(E, chi, 1) with split point A and a forced
/// root number w; only A = 1 with the true w gives L(E, chi, 1) in general.
Complex split_lvalue(const LSeriesData& data, const DirichletChar& primitive_chi, const Complex& w, const Real& A);

/// x under zeta_n -> exp(2 pi i / n), at working precision.
Complex embed_complex(const CycloElem& x);

/// Element of Q(zeta_n) with denominator at most max_den within tol of v,
/// found by lattice reduction on the power basis. Throws RecognitionFailed.
CycloElem recognize_cyclotomic(const Complex& v, int64_t n, int64_t max_den, const Real& tol);

struct EquivarianceResult {
  bool pass = false;
  /// L*(A, chi) for the first member, as an element of Q(zeta_ord).
  CycloElem recognized;
  std::vector<Complex> values;
  /// t with orbit[i] = orbit[0]^t.
  std::vector<int64_t> exponents;
  std::vector<Real> discrepancy;
};

/// L*(A, chi) = L(A, conj(chi), 1) tau*(Q, chi) / Omega^+ over a Galois orbit
/// of even characters: recognizes the first value and compares every member
/// with the matching conjugate. Throws ValueVanishes, RecognitionFailed,
/// InvalidArgument (members not conjugate).
EquivarianceResult galois_equivariance_check(const CurveQ& curve, const std::vector<DirichletChar>& orbit,
                                             const Real& tol = Real("1e-8"), int64_t max_den = 100000);

}  // namespace thetalab
