#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "thetalab/cyclo.hpp"
#include "thetalab/rational.hpp"

namespace thetalab {

/// Generator system of (Z/c)^x: one generator per odd prime power (a
/// primitive root lifted by CRT), -1 for 4 | c, and -1 and 5 for 8 | c.
/// Also holds the discrete logarithm of every unit.
struct UnitGroup {
  int64_t modulus = 1;
  std::vector<int64_t> generators;
  std::vector<int64_t> orders;
  /// prime attached to each generator (2 for both generators at 2^k)
  std::vector<int64_t> primes;
  /// dlog[a] = exponents of a on the generators; empty for non-units.
  std::vector<std::vector<int64_t>> dlog;

  static std::shared_ptr<const UnitGroup> get(int64_t c);
  int64_t size() const;
};

class DirichletChar {
 public:
  /// Trivial character modulo c.
  explicit DirichletChar(int64_t c = 1);
  /// chi(g_i) = zeta_order^exponents[i] on the generators of UnitGroup::get(c).
  DirichletChar(int64_t c, int64_t order, std::vector<int64_t> exponents);

  /// Builds chi from t_i in Q/Z with chi(g_i) = exp(2 pi i t_i); the order is
  /// reduced to the exact order of chi.
  static DirichletChar from_generator_angles(int64_t c, const std::vector<Rational>& angles);
  /// Builds chi from a function a -> angle in Q/Z evaluated on generators.
  template <class F>
  static DirichletChar from_function(int64_t c, F&& angle_of) {
    auto g = UnitGroup::get(c);
    std::vector<Rational> angles;
    for (int64_t x : g->generators) angles.push_back(angle_of(x));
    return from_generator_angles(c, angles);
  }

  int64_t modulus() const { return modulus_; }
  int64_t order() const { return order_; }
  const std::vector<int64_t>& exponents() const { return exponents_; }
  bool is_even() const;
  bool is_trivial() const { return order_ == 1; }
  int64_t conductor() const;
  bool is_primitive() const { return conductor() == modulus_; }

  /// k with chi(a) = zeta_order^k; nullopt when gcd(a, c) > 1.
  std::optional<int64_t> exponent_at(int64_t a) const;
  /// chi(a) as an angle in Q/Z, in [0,1); nullopt when gcd(a, c) > 1.
  std::optional<Rational> angle_at(int64_t a) const;
  /// chi(a) in Q(zeta_order); zero when gcd(a, c) > 1.
  CycloElem value(int64_t a) const;

  /// Primitive character inducing chi.
  DirichletChar primitive() const;
  /// The character modulo c' (c | c' or conductor | c') agreeing with chi on units.
  DirichletChar lift(int64_t new_modulus) const;
  DirichletChar conj() const;
  DirichletChar operator*(const DirichletChar& o) const;
  /// chi^t, the Galois conjugate under zeta_order -> zeta_order^t.
  DirichletChar power(int64_t t) const;
  bool operator==(const DirichletChar& o) const;

  std::string to_string() const;

 private:
  int64_t modulus_;
  int64_t order_;
  std::vector<int64_t> exponents_;
  std::shared_ptr<const UnitGroup> group_;
};

/// All characters modulo c (or only the even ones), in a fixed order:
/// lexicographic in the exponent vector on the generator system.
std::vector<DirichletChar> enumerate_chars(int64_t c, bool even_only = false);

/// tau_m(chi) = sum over a in (Z/m)^x of chi(a) zeta_m^a, with chi evaluated
/// through its primitive character; result at level lcm(m, order).
CycloElem gauss_sum(const DirichletChar& chi, int64_t m);

/// tau*(Q, chi) for the squarefree ambient conductor c:
/// tau_{c_chi}(chi) times the product over l | c / c_chi of -chi(l).
CycloElem tau_star(const DirichletChar& chi, int64_t c);

}  // namespace thetalab
