#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "thetalab/curve.hpp"
#include "thetalab/linalg.hpp"
#include "thetalab/rational.hpp"

namespace thetalab {

constexpr int64_t kDefaultMaxLevel = 4000;

/// Sparse vector in the plus quotient: (basis index, coefficient).
using SparseVec = std::vector<std::pair<size_t, Rational>>;

/// 2x2 integer matrix [[a, b], [c, d]] stored row-major.
using IntMat2 = std::array<int64_t, 4>;

/// Plus quotient of the Manin-symbol presentation of H_1(X_0(N), cusps; Q):
/// generators (c:d) in P^1(Z/N) modulo x + xS = 0, x + xU + xU^2 = 0 and
/// x = x* with (c:d)* = (-c:d).
class ManinSymbolSpace {
 public:
  explicit ManinSymbolSpace(int64_t N, int64_t max_level = kDefaultMaxLevel);

  /// Shared per-level instance.
  static std::shared_ptr<const ManinSymbolSpace> get(int64_t N);

  int64_t level() const { return level_; }
  /// Representatives of P^1(Z/N), first point of each orbit in (c, d) order.
  const std::vector<std::pair<int64_t, int64_t>>& generators() const { return gens_; }
  /// Index of the generator equivalent to (c:d); requires gcd(c, d, N) = 1.
  size_t index_of(int64_t c, int64_t d) const;

  /// Dimension of the whole plus quotient (cuspidal and boundary parts).
  size_t dimension() const { return basis_gens_.size(); }
  /// Generator chosen for each basis vector.
  const std::vector<size_t>& basis_generators() const { return basis_gens_; }
  /// Image of generator i in the quotient.
  const SparseVec& image(size_t i) const { return images_[i]; }
  std::vector<Rational> dense_image(int64_t c, int64_t d) const;

  /// Cusp classes up to Gamma_0(N) and x -> -x, as reduced p/q (q >= 0).
  const std::vector<std::pair<int64_t, int64_t>>& cusps() const { return cusps_; }
  /// Column j: boundary of basis vector j in the cusp basis.
  const QMatrix& boundary_map() const { return boundary_; }
  /// Basis of ker(boundary), as vectors in the quotient.
  const std::vector<std::vector<Rational>>& cuspidal_basis() const { return cuspidal_; }
  size_t cuspidal_dimension() const { return cuspidal_.size(); }

  /// Path {infinity, a/c} as a vector in the quotient (Manin trick);
  /// gcd(a, c) = 1, c >= 1.
  std::vector<Rational> path_from_infinity(int64_t a, int64_t c) const;
  /// Indices and signs of the unimodular symbols summing to {0, a/c}.
  std::vector<std::pair<size_t, int>> manin_expansion(int64_t a, int64_t c) const;

  /// T_ell on the whole quotient; column j is the image of basis vector j.
  QMatrix hecke_on_quotient(int64_t ell) const;

  /// A lift of (c:d) to SL_2(Z).
  IntMat2 lift_to_sl2(int64_t c, int64_t d) const;
  /// Index of the cusp class of p/q in cusps().
  size_t cusp_index(int64_t p, int64_t q) const;

 private:
  size_t find_or_add_cusp(int64_t p, int64_t q);
  bool cusps_equivalent(int64_t p1, int64_t q1, int64_t p2, int64_t q2) const;

  int64_t level_;
  std::vector<std::pair<int64_t, int64_t>> gens_;
  std::vector<int32_t> table_;  // (c mod N) * N + (d mod N) -> generator, -1 if not in P^1
  std::vector<size_t> basis_gens_;
  std::vector<SparseVec> images_;
  std::vector<std::pair<int64_t, int64_t>> cusps_;
  QMatrix boundary_;
  std::vector<std::vector<Rational>> cuspidal_;
};

/// Cremona's Heilbronn matrices of determinant ell.
std::vector<IntMat2> heilbronn_matrices(int64_t ell);

/// Matrix of T_ell on the cuspidal plus subspace in cuspidal_basis()
/// coordinates (column j = image of basis vector j). Throws PrimeDividesLevel.
QMatrix hecke_operator(const ManinSymbolSpace& space, int64_t ell);

/// ceil((N/6) prod_{p | N} (1 + 1/p)).
int64_t sturm_bound(int64_t N);

struct ModularSymbolFunctional {
  int64_t level = 0;
  std::shared_ptr<const ManinSymbolSpace> space;
  std::vector<Rational> dual_vector;    // primitive integral coordinates on the quotient basis
  std::vector<Rational> symbol_values;  // dual_vector applied to every generator
  Rational scaling = 1;
  bool normalized = false;
  /// "L(E,1)" or "chi mod c0 ..." once normalized.
  std::string anchor;
  /// The Manin constant is taken to be 1 in the normalization.
  bool manin_constant_assumed = true;
};

/// The rational line in the dual of the plus quotient on which every T_ell
/// (ell <= bound, ell not dividing N or the discriminant) acts by a_ell of
/// the curve; afterwards the eigenvalues for good ell <= 50 are verified.
/// bound = 0 uses the Sturm bound. Throws NoEigenline, AmbiguousEigenline.
ModularSymbolFunctional eigen_functional(std::shared_ptr<const ManinSymbolSpace> space, const CurveQ& curve,
                                         int64_t bound = 0);

/// scaling * f({infinity, a/c}); depends on a mod c only. Throws NotCoprime.
Rational eval_plus_symbol(const ModularSymbolFunctional& f, int64_t a, int64_t c);

/// Regularized symbol [a/c]^* = sum_{t | c} mu(c/t) [a (c/t)^{-1} / t]^+ for
/// squarefree c prime to N. Throws NotSquarefree, NotCoprime, NotCoprimeToLevel.
Rational regularized_symbol(const ModularSymbolFunctional& f, int64_t a, int64_t c);

/// Fixes the scaling from L(E,1)/Omega^+ when L(E,1) != 0, otherwise from the
/// first even character chi mod a squarefree c0 coprime to N with
/// L_{c0}(E, conj(chi), 1) != 0, via
/// sum_a chi(a)[a/c0]^* = (c0/c_chi) L_{c0}(E, conj(chi), 1) tau_{c0}(chi) / Omega^+.
/// Throws AllTwistsVanish, ReconstructionFailed.
ModularSymbolFunctional normalize_functional(const ModularSymbolFunctional& f, const CurveQ& curve, int digits = 30,
                                             int64_t max_c0 = 200);

/// Least D > 0 with D [a/c]^+ integral for all c <= max_c.
Integer denominator_bound(const ModularSymbolFunctional& f, int64_t max_c = 100);

}  // namespace thetalab
