#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "thetalab/rational.hpp"

namespace thetalab {

/// Finite abelian group Z/d_1 x ... x Z/d_r with d_1 | d_2 | ... | d_r, all
/// d_i > 1. Elements are indexed 0 .. |G|-1 in mixed radix (first factor
/// fastest); index 0 is the identity.
class AbGroup {
 public:
  AbGroup() = default;
  /// Throws InvalidArgument unless each factor divides the next. Factors
  /// equal to 1 are dropped.
  explicit AbGroup(std::vector<int64_t> invariant_factors);

  const std::vector<int64_t>& invariant_factors() const { return factors_; }
  size_t size() const { return size_; }
  int64_t exponent() const { return factors_.empty() ? 1 : factors_.back(); }

  std::vector<int64_t> coords(size_t index) const;
  size_t index(const std::vector<int64_t>& coords) const;
  size_t add(size_t x, size_t y) const;
  size_t neg(size_t x) const;
  size_t sub(size_t x, size_t y) const { return add(x, neg(y)); }
  size_t times(size_t x, int64_t n) const;
  int64_t order(size_t x) const;
  /// Elements of the subgroup generated by gens, sorted.
  std::vector<size_t> subgroup(const std::vector<size_t>& gens) const;
  /// Canonical generators: the unit vectors of the factors.
  std::vector<size_t> generators() const;

  /// Characters are indexed like elements: character k sends g to
  /// zeta_e^pairing(k, g), e = exponent().
  int64_t pairing(size_t k, size_t g) const;

  void set_labels(std::vector<std::string> labels);
  std::string label(size_t x) const;

  bool operator==(const AbGroup& o) const { return factors_ == o.factors_; }
  bool operator!=(const AbGroup& o) const { return !(*this == o); }
  std::string to_string() const;

 private:
  std::vector<int64_t> factors_;
  size_t size_ = 1;
  std::vector<std::string> labels_;
};

/// Z^n modulo the row span of `relations`, presented in Smith form.
struct Presentation {
  AbGroup group;
  /// Image of the i-th standard generator of Z^n.
  std::vector<size_t> generator_images;
};

/// Throws InvalidArgument if the quotient is infinite.
Presentation present(size_t n_gens, const std::vector<std::vector<int64_t>>& relations);

/// (Z/c)^x modulo the subgroup generated by h_gens.
struct UnitQuotient {
  int64_t modulus = 1;
  AbGroup group;
  /// image[a] for 0 <= a < c, or -1 when gcd(a, c) > 1.
  std::vector<int64_t> image;

  size_t of(int64_t a) const;
};

UnitQuotient unit_quotient(int64_t c, const std::vector<int64_t>& h_gens);

/// Scalar ring: Q when p = 0, otherwise Z/p^k.
struct Scalars {
  int64_t p = 0;
  int k = 0;

  bool exact() const { return p == 0; }
  Integer modulus() const;
  bool operator==(const Scalars& o) const { return p == o.p && k == o.k; }
  std::string to_string() const;
};

class GroupRingElem {
 public:
  GroupRingElem() = default;
  GroupRingElem(AbGroup group, Scalars scalars = {});
  GroupRingElem(AbGroup group, std::vector<Rational> coeffs, Scalars scalars = {});

  static GroupRingElem one(const AbGroup& group, Scalars scalars = {});
  static GroupRingElem element(const AbGroup& group, size_t g, Scalars scalars = {});

  const AbGroup& group() const { return group_; }
  const Scalars& scalars() const { return scalars_; }
  const std::vector<Rational>& coeffs() const { return coeffs_; }
  const Rational& operator[](size_t g) const { return coeffs_[g]; }
  void set(size_t g, const Rational& q);

  GroupRingElem operator+(const GroupRingElem& o) const;
  GroupRingElem operator-(const GroupRingElem& o) const;
  GroupRingElem operator-() const;
  GroupRingElem operator*(const GroupRingElem& o) const;
  GroupRingElem scaled(const Rational& q) const;
  bool operator==(const GroupRingElem& o) const;
  bool is_zero() const;

  Rational augmentation() const;
  /// Image in Z/p^k[G]; throws NotCoprime if a coefficient is not p-integral.
  GroupRingElem reduce(int64_t p, int k) const;
  /// Image under g -> -g.
  GroupRingElem involution() const;

  std::string to_string() const;

 private:
  void check_compatible(const GroupRingElem& o) const;
  void normalize();

  AbGroup group_;
  Scalars scalars_;
  std::vector<Rational> coeffs_;
};

/// A homomorphism G -> G' given on all elements.
struct GroupHom {
  AbGroup source;
  AbGroup target;
  std::vector<size_t> images;
};

/// Pushforward along q. Throws NotSurjective; InvalidArgument if q is not a
/// homomorphism or the groups do not match.
GroupRingElem project_quotient(const GroupRingElem& x, const GroupHom& q);

struct UnitVerdict {
  bool integral = false;
  bool unit = false;
};

/// integral: every coefficient p-integral; unit: additionally the regular
/// representation is invertible mod p. Throws EvenPrime.
UnitVerdict padic_integrality_and_unit(const GroupRingElem& x, int64_t p);

/// Membership of v in the Z/p^k-span of the given vectors.
bool in_span_mod_pk(const std::vector<std::vector<Integer>>& gens, const std::vector<Integer>& v, int64_t p, int k);

/// Ideal of Z/p^k[G] generated by `gens`, as a Z/p^k-module spanning set.
std::vector<std::vector<Integer>> ideal_span(const std::vector<GroupRingElem>& gens);

/// x in I_p(G)^n modulo p^k. x must have scalars Z/p^k.
bool aug_ideal_membership(const GroupRingElem& x, int n);

using GroupRingMatrix = std::vector<std::vector<GroupRingElem>>;

/// Determinant over the commutative ring Z/p^k[G] (or Q[G]).
GroupRingElem determinant(const GroupRingMatrix& m);

/// x in Fit^a of the module presented by the r x s matrix M (rows are
/// relations among s generators). Throws IndexOutOfRange unless 0 <= a < s.
bool fitting_membership(const GroupRingElem& x, const GroupRingMatrix& M, int a);

struct UnitSumResult {
  GroupRingElem element;
  UnitVerdict verdict;
};

/// sum over characters psi of A of ((c_psi / c) n_psi)^i e_psi with n_psi = p
/// when p | c and p does not divide c_psi, else 1. conductor(k) is c_psi for
/// the character with index k; subgroups[d] lists the elements of H_d for
/// every divisor d of c. Throws HypothesisViolated, NotSquarefree, EvenPrime.
UnitSumResult unit_sum_element(int64_t c, const std::function<int64_t(size_t)>& conductor, int64_t p, int i,
                               const AbGroup& group, const std::map<int64_t, std::vector<size_t>>& subgroups);

}  // namespace thetalab
