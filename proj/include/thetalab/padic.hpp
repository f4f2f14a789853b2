#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "thetalab/characters.hpp"
#include "thetalab/curve.hpp"
#include "thetalab/cyclo.hpp"
#include "thetalab/grouprings.hpp"
#include "thetalab/rational.hpp"
#include "thetalab/theta.hpp"

namespace thetalab {

/// Element of Q_p known modulo p^precision (absolute): p^val * unit with the
/// unit reduced mod p^(precision - val). Zero at precision has val == precision.
class PadicNum {
 public:
  PadicNum(int64_t p, int64_t precision);
  /// Throws NotCoprime (via valuation) only for p | 0; q may have p in the denominator.
  static PadicNum from_rational(int64_t p, const Rational& q, int64_t precision);

  int64_t prime() const { return p_; }
  int64_t precision() const { return prec_; }
  /// precision() when zero.
  int64_t valuation() const { return val_; }
  bool is_zero() const { return val_ >= prec_; }
  const Integer& unit() const { return unit_; }
  /// p^val * unit as a rational.
  Rational lift() const;
  /// Integer in [0, p^k) congruent to the element; requires valuation >= 0 and k <= precision.
  Integer residue(int64_t k) const;

  PadicNum operator+(const PadicNum& o) const;
  PadicNum operator-(const PadicNum& o) const;
  PadicNum operator-() const;
  PadicNum operator*(const PadicNum& o) const;
  /// Throws DivisionByZero when o is zero at its precision.
  PadicNum operator/(const PadicNum& o) const;
  /// Equality modulo p^min(precisions).
  bool operator==(const PadicNum& o) const;
  PadicNum reduce(int64_t precision) const;
  std::string to_string() const;

 private:
  void normalize();
  int64_t p_;
  int64_t prec_;
  int64_t val_;
  Integer unit_;
};

/// Q_{p^f} = Q_p[X]/(P) with P the first monic polynomial of degree f (in
/// the order of its coefficient digits a_0 + a_1 p + ...) irreducible mod p.
class UnramExt {
 public:
  static std::shared_ptr<const UnramExt> make(int64_t p, int64_t f, int64_t max_precision = 80);

  int64_t prime() const { return p_; }
  int64_t degree() const { return f_; }
  int64_t max_precision() const { return max_prec_; }
  /// Low to high, length f + 1, last entry 1, entries in [0, p).
  const std::vector<Integer>& modulus() const { return modulus_; }
  /// Root of P congruent to X^p, i.e. the image of X under Frobenius.
  const std::vector<Integer>& frobenius_image() const { return frob_; }
  std::string to_string() const;

  // Polynomial arithmetic on coordinate vectors modulo (P, m).
  std::vector<Integer> mul(const std::vector<Integer>& a, const std::vector<Integer>& b, const Integer& m) const;
  std::vector<Integer> frobenius(const std::vector<Integer>& a, const Integer& m) const;
  /// Inverse of a unit (nonzero mod p) modulo (P, m); m a power of p.
  std::vector<Integer> inverse(const std::vector<Integer>& a, const Integer& m) const;
  /// Precision to which frobenius_image and cached powers are known.
  int64_t working_precision() const { return work_prec_; }

 private:
  UnramExt() = default;
  int64_t p_ = 0;
  int64_t f_ = 1;
  int64_t max_prec_ = 0;
  int64_t work_prec_ = 0;
  std::vector<Integer> modulus_;
  std::vector<Integer> frob_;
  std::vector<std::vector<Integer>> frob_powers_;
};

/// Element of Q_{p^f} with absolute precision: p^shift * sum a_i X^i with
/// a_i reduced mod p^(precision - shift) and not all divisible by p.
class UnramExtElem {
 public:
  UnramExtElem() = default;
  UnramExtElem(std::shared_ptr<const UnramExt> ext, int64_t precision);  // zero
  static UnramExtElem from_rational(std::shared_ptr<const UnramExt> ext, const Rational& q, int64_t precision);
  /// Integral coordinates on 1, X, ..., X^(f-1).
  static UnramExtElem from_coords(std::shared_ptr<const UnramExt> ext, std::vector<Integer> coords, int64_t precision);
  static UnramExtElem generator(std::shared_ptr<const UnramExt> ext, int64_t precision);

  const std::shared_ptr<const UnramExt>& ext() const { return ext_; }
  int64_t precision() const { return prec_; }
  int64_t valuation() const { return shift_; }
  bool is_zero() const { return shift_ >= prec_; }
  /// Coordinate i as an element of Q_p.
  PadicNum coordinate(size_t i) const;
  /// Whether every coordinate other than the constant one vanishes.
  bool in_base_field() const;

  UnramExtElem operator+(const UnramExtElem& o) const;
  UnramExtElem operator-(const UnramExtElem& o) const;
  UnramExtElem operator-() const;
  UnramExtElem operator*(const UnramExtElem& o) const;
  UnramExtElem operator*(const Rational& q) const;
  UnramExtElem& operator+=(const UnramExtElem& o) { return *this = *this + o; }
  /// Throws DivisionByZero.
  UnramExtElem inverse() const;
  UnramExtElem pow(int64_t e) const;
  /// Arithmetic Frobenius applied j >= 0 times (j is taken mod f).
  UnramExtElem frobenius(int64_t j = 1) const;
  UnramExtElem reduce(int64_t precision) const;
  /// Equality modulo p^min(precisions).
  bool operator==(const UnramExtElem& o) const;
  /// Identical precision and digits.
  bool identical(const UnramExtElem& o) const;
  std::string to_string() const;

 private:
  void normalize();
  std::shared_ptr<const UnramExt> ext_;
  int64_t prec_ = 0;
  int64_t shift_ = 0;
  std::vector<Integer> coords_;
};

/// Fixed embedding Q(zeta_m) -> Q_{p^f}, p not dividing m, ord_m(p) | f:
/// zeta_m goes to the Hensel lift of w^u where w is the first element of
/// F_{p^f}^x (in coordinate-digit order) whose power (p^f - 1)/m has order
/// exactly m, and u is the choice-th smallest representative of
/// (Z/m)^x / <p>. There are phi(m)/ord_m(p) choices.
class CyclotomicEmbedding {
 public:
  /// Throws RamifiedCase (p | m), InvalidArgument (ord_m(p) does not divide f,
  /// or choice out of range).
  CyclotomicEmbedding(std::shared_ptr<const UnramExt> ext, int64_t m, int64_t choice = 0);

  int64_t level() const { return m_; }
  int64_t choice() const { return choice_; }
  int64_t exponent() const { return u_; }
  static int64_t choices(int64_t p, int64_t m);
  /// Image of zeta_m at the extension's working precision.
  const UnramExtElem& zeta() const { return zeta_; }
  /// Image of x at precision `precision`; x.level() must divide m.
  UnramExtElem operator()(const CycloElem& x, int64_t precision) const;
  std::string to_string() const;

 private:
  std::shared_ptr<const UnramExt> ext_;
  int64_t m_;
  int64_t choice_;
  int64_t u_;
  UnramExtElem zeta_;
  std::vector<UnramExtElem> powers_;
};

/// Image of a single cyclotomic number under the pinned default embedding.
UnramExtElem embed_cyclotomic(const CycloElem& x, std::shared_ptr<const UnramExt> ext, int64_t precision,
                              int64_t choice = 0);

/// An element of F_{p^f}^x of exact order m (p not dividing m), Hensel lifted;
/// the first such power of the first generator in digit order.
UnramExtElem root_of_unity_padic(std::shared_ptr<const UnramExt> ext, int64_t m, int64_t precision);

struct FormalLogSeries {
  CurveQ curve;  // the model the series belongs to
  int64_t truncation = 0;
  /// coeffs[n] = c_n for 1 <= n <= truncation; coeffs[0] = 0.
  std::vector<Rational> coeffs;

  /// log(t) for t of valuation >= 1. Throws InvalidArgument (valuation < 1),
  /// PrecisionExhausted (truncation too short for t's precision).
  UnramExtElem evaluate(const UnramExtElem& t) const;
};

/// Formal logarithm in t = -x/y of the given Weierstrass model, integrating
/// the invariant differential dx / (2y + a1 x + a3).
FormalLogSeries formal_group_log(const CurveQ& curve, int64_t truncation);

/// Formal group law F(t1, t2) truncated at total degree T, integer
/// coefficients, from the chord construction on w(t).
struct FormalGroupLaw {
  CurveQ curve;
  int64_t truncation = 0;
  /// coeffs[i][j] multiplies t1^i t2^j, i + j <= truncation.
  std::vector<std::vector<Integer>> coeffs;

  /// Throws InvalidArgument (valuation < 1). The result's precision is
  /// capped by the truncation error.
  UnramExtElem evaluate(const UnramExtElem& t1, const UnramExtElem& t2) const;
};

FormalGroupLaw formal_group_law(const CurveQ& curve, int64_t truncation);

/// log evaluated with a series long enough for t's precision (cached per model).
UnramExtElem formal_log(const CurveQ& curve, const UnramExtElem& t);
/// t1 + t2 in the formal group (law cached per model and truncation).
UnramExtElem formal_add(const CurveQ& curve, const UnramExtElem& t1, const UnramExtElem& t2);
/// [n] t for n >= 0.
UnramExtElem formal_multiply(const CurveQ& curve, int64_t n, const UnramExtElem& t);

/// The primes above p in a real abelian field F in Q(zeta_c), p not dividing c,
/// seen through a fixed embedding of F into Q_{p^f}. G = Gal(F/Q) acts; D is
/// generated by Frobenius; places correspond to cosets of D.
struct LocalStructure {
  FieldSpec field;
  int64_t p = 0;
  int64_t precision = 0;
  /// f = ord_M(p) for M = lcm(c, prime-to-p exponent of G).
  std::shared_ptr<const UnramExt> ext;
  /// |D|, the residue degree of p in F.
  int64_t local_degree = 1;
  size_t frobenius = 0;
  /// Coset representatives of G/D, each the least index in its coset.
  std::vector<size_t> places;
  /// A residue a mod c mapping to each group element.
  std::vector<int64_t> residues;
  int64_t cyclotomic_level = 1;
  std::shared_ptr<const CyclotomicEmbedding> embedding;

  std::string to_string() const;
};

/// Throws RamifiedPlace (p | c), EvenPrime, InvalidArgument (p not prime).
LocalStructure local_structure(const FieldSpec& F, int64_t p, int64_t precision, int64_t embedding_choice = 0);

/// One formal-group parameter per place, as its image sigma-hat(t_w) in
/// Q_{p^f}; each lies in the subfield of degree local_degree and has valuation >= 1.
struct SemiLocalPoint {
  std::vector<UnramExtElem> params;
};

/// Throws InvalidArgument when a parameter has the wrong count, valuation < 1,
/// or is not fixed by Frobenius^local_degree.
void validate_point(const LocalStructure& L, const SemiLocalPoint& x);
/// sigma-hat(g^{-1} t) for the group element with index g.
UnramExtElem point_at(const LocalStructure& L, const SemiLocalPoint& x, size_t g);
/// h x, so that point_at(h x, g) = point_at(x, h^{-1} g).
SemiLocalPoint act(const LocalStructure& L, size_t h, const SemiLocalPoint& x);
SemiLocalPoint point_add(const CurveQ& curve, const SemiLocalPoint& x, const SemiLocalPoint& y);
SemiLocalPoint point_multiply(const CurveQ& curve, int64_t n, const SemiLocalPoint& x);
/// Parameters p * sum r_i w^i with w a root of unity generating the local
/// subfield and r_i drawn from mt19937_64(seed).
SemiLocalPoint random_point(const LocalStructure& L, uint64_t seed);

/// Element of Q_{p^f} (x) Q(zeta_n) in the power basis of Q(zeta_n).
struct ResolventValue {
  int64_t order = 1;
  std::vector<UnramExtElem> coords;

  int64_t precision() const;
  ResolventValue operator+(const ResolventValue& o) const;
  ResolventValue operator*(const Rational& q) const;
  bool operator==(const ResolventValue& o) const;
  /// Through zeta_n -> emb.zeta()^(level/n). Throws RamifiedCase if p | n.
  UnramExtElem embed(const CyclotomicEmbedding& emb) const;
  std::string to_string() const;
};

/// LR_chi(x) = sum_g sigma-hat(g^{-1} log x) chi(g), chi a character of G
/// given modulo the conductor of F. Throws CharacterDoesNotFactor,
/// PrecisionExhausted (surviving precision below 1).
ResolventValue log_resolvent(const CurveQ& curve, const LocalStructure& L, const SemiLocalPoint& x,
                             const DirichletChar& chi);

struct PredictionResult {
  /// Coefficient of each group element (by index).
  std::vector<UnramExtElem> coefficients;
  /// The same element over Z/p^k' when every coefficient is integral and in Q_p.
  std::optional<GroupRingElem> element;
  bool integral = false;
  int64_t precision = 0;
  /// For each g: sum_chi chi(g) a_chi LR_chi(x), which should be divisible by |G|.
  std::vector<UnramExtElem> congruence_sums;
  bool congruences_hold = false;
  /// a_chi = L_S(A, conj chi, 1) tau*(Q, chi) / Omega^+ by character label.
  std::vector<std::pair<std::string, CycloElem>> algebraic_parts;
  std::vector<int64_t> places_S;
  std::string embedding;
};

/// sum_chi a_chi LR_chi(x) e_chi with a_chi exact from Theta and Euler
/// factors at primes of S not dividing c. S must contain p, the primes
/// dividing c and the bad primes. Throws InvalidArgument (S too small),
/// CharacterValueUnavailable (a_chi = 0), RamifiedCase (p divides the
/// exponent of G), PrecisionExhausted (surviving precision below floor).
PredictionResult first_prediction_sum(const CurveQ& curve, const LocalStructure& L, const SemiLocalPoint& x,
                                      const std::vector<int64_t>& S, int64_t precision_floor = 5);

/// Smallest valid S: p, the primes dividing c and those dividing the conductor.
std::vector<int64_t> default_places(const CurveQ& curve, const FieldSpec& F, int64_t p);

}  // namespace thetalab
