#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "thetalab/characters.hpp"
#include "thetalab/curve.hpp"
#include "thetalab/cyclo.hpp"
#include "thetalab/grouprings.hpp"
#include "thetalab/lvalues.hpp"
#include "thetalab/modsym.hpp"

namespace thetalab {

/// Real abelian field F inside Q(zeta_c): the fixed field of H, -1 in H.
struct FieldSpec {
  int64_t conductor = 1;
  std::vector<int64_t> h_generators;
  /// G = (Z/c)^x / H.
  UnitQuotient quotient;

  /// Throws NotSquarefree, InvalidFieldSpec (-1 not in H, or c is not the
  /// conductor of the fixed field). With check_conductor = false, c may be
  /// any squarefree multiple of the conductor.
  static FieldSpec make(int64_t c, std::vector<int64_t> h_generators, bool check_conductor = true);
  static FieldSpec rationals() { return make(1, {}); }
  /// Q(zeta_c)^+.
  static FieldSpec real_cyclotomic(int64_t c) { return make(c, {-1}); }
  /// The subfield of degree d of Q(zeta_ell), ell prime; it is real when
  /// (ell - 1)/d is even.
  static FieldSpec cyclic_subfield(int64_t ell, int64_t d);

  const AbGroup& group() const { return quotient.group; }
  int64_t degree() const { return static_cast<int64_t>(quotient.group.size()); }
  /// Whether a lies in H.
  bool in_subgroup(int64_t a) const { return quotient.of(a) == 0; }
  std::string to_string() const;
};

struct ThetaElement {
  std::string curve_label;
  int64_t level = 0;
  int64_t c = 1;
  /// The carrier group is quotient.group; G_c^+ before restriction.
  UnitQuotient quotient;
  GroupRingElem carrier;
  bool manin_constant_assumed = true;
  std::string anchor;

  std::string to_string() const;
};

/// Normalized plus functional of the curve (computed once per model).
std::shared_ptr<const ModularSymbolFunctional> curve_functional(const CurveQ& curve);

/// 1/2 sum_{a in (Z/c)^x} [a/c]^* sigma_a in Q[G_c^+].
/// Throws NotSquarefree, NotCoprimeToLevel.
ThetaElement theta_element(const ModularSymbolFunctional& f, int64_t c, const std::string& curve_label = {});

/// Image in Q[Gal(F/Q)]. Throws ConductorMismatch.
ThetaElement restrict_to_field(const ThetaElement& theta, const FieldSpec& F);

/// sum_g coeff(g) chi(g) for chi a character mod a divisor of c that is
/// trivial on the kernel of (Z/c)^x -> carrier. Throws CharacterDoesNotFactor.
CycloElem character_component(const ThetaElement& theta, const DirichletChar& chi);

/// (c / c_chi) L_c(A, conj(chi), 1) tau_c(chi) / (2 Omega^+), chi mod c even.
ApproxValue interpolation_value(const LSeriesData& data, const Real& omega_plus, const DirichletChar& chi, int64_t c,
                                const Real& tol = Real("1e-12"));

struct DistributionResult {
  bool pass = false;
  GroupRingElem lhs;  // pi_{Q(pc)^+/Q(c)^+}(Theta_pc)
  GroupRingElem rhs;  // -sigma_p (p - sigma_p^{-1} a_p + sigma_p^{-2}) Theta_c
  GroupRingElem difference;
};

/// Throws NotSquarefree, NotCoprimeToLevel, InvalidArgument (p | c or p not prime).
DistributionResult distribution_check(const ModularSymbolFunctional& f, const CurveQ& curve, int64_t c, int64_t p);

enum class Status { Verified, Violated, Inconclusive, NotApplicable, Assumed };
std::string to_string(Status s);

struct Condition {
  std::string name;
  Status status = Status::Inconclusive;
  std::string evidence;
};

struct HypothesesReport {
  std::string curve_label;
  std::string field;
  int64_t p = 0;
  /// Degree of F', the largest subfield of degree prime to p.
  int64_t prime_to_p_degree = 1;
  std::vector<Condition> conditions;

  const Condition& get(const std::string& name) const;
  /// No condition violated or inconclusive.
  bool all_decidable_verified() const;
};

/// Conditions (a)-(e) of the rank-zero criterion and (H1)-(H6).
HypothesesReport hypotheses_report(const CurveQ& curve, const FieldSpec& F, int64_t p);

/// Residue degree in the fixed field of `sub` (a subgroup of G, listed as
/// elements) of the prime ell; for ell | c inertia is divided out first.
int64_t residue_degree(const FieldSpec& F, const std::vector<size_t>& sub, int64_t ell);

struct Rank0Verdict {
  ThetaElement theta;
  UnitVerdict unit;
  int64_t augmentation_valuation = 0;
  /// Largest n <= 3 with theta in I_p(G)^n modulo p^k (integral theta only).
  int aug_depth = 0;
  int64_t precision = 0;
  bool sha_trivial_asserted = false;
  /// "BSD_p(iv) consistent", "BSD_p(iv) inconsistent" or "membership data only".
  std::string verdict;
  /// min over characters of |L(A, conj(chi), 1)| for chi through G.
  Real min_lvalue = 0;
};

/// Throws RankNotZero, EvenPrime.
Rank0Verdict rank0_verdict(const CurveQ& curve, const FieldSpec& F, int64_t p, int k, bool sha_trivial);

/// Characters mod c trivial on H, i.e. the characters of Gal(F/Q).
std::vector<DirichletChar> field_characters(const FieldSpec& F);

}  // namespace thetalab
