#include <gtest/gtest.h>

#include <cmath>
#include <complex>
#include <numeric>
#include <set>

#include "thetalab/characters.hpp"
#include "thetalab/error.hpp"
#include "thetalab/ntheory.hpp"

using namespace thetalab;

namespace {

// Conductor straight from the definition: least d | c such that chi is
// trivial on units congruent to 1 mod d.
int64_t brute_conductor(const DirichletChar& chi) {
  const int64_t c = chi.modulus();
  for (int64_t d : nt::divisors(c)) {
    bool ok = true;
    for (int64_t a = 1; a < c && ok; a += d)
      if (std::gcd(a, c) == 1 && *chi.exponent_at(a) != 0) ok = false;
    if (ok) return d;
  }
  return c;
}

std::complex<long double> numeric(const CycloElem& x) {
  long double re, im;
  x.to_complex(re, im);
  return {re, im};
}

std::complex<long double> numeric_gauss(const DirichletChar& chi, int64_t m) {
  const DirichletChar prim = chi.primitive();
  std::complex<long double> s = 0;
  const long double two_pi = 2 * std::acos(-1.0L);
  for (int64_t a = 1; a <= m; ++a) {
    if (std::gcd(a, m) != 1) continue;
    const long double t = static_cast<long double>(prim.angle_at(a)->get_d()) + static_cast<long double>(a) / m;
    s += std::polar(1.0L, two_pi * t);
  }
  return s;
}

}  // namespace

TEST(Characters, EnumerationExamples) {
  auto one = enumerate_chars(1);
  ASSERT_EQ(one.size(), 1u);
  EXPECT_TRUE(one[0].is_trivial());
  EXPECT_EQ(enumerate_chars(5, true).size(), 2u);
  auto all15 = enumerate_chars(15);
  EXPECT_EQ(all15.size(), 8u);
  std::set<int64_t> conds;
  for (const auto& chi : all15) conds.insert(chi.conductor());
  EXPECT_EQ(conds, (std::set<int64_t>{1, 3, 5, 15}));
}

TEST(Characters, HomomorphismAndConductorProperty) {
  for (int64_t c = 1; c <= 100; ++c) {
    auto chars = enumerate_chars(c);
    ASSERT_EQ(static_cast<int64_t>(chars.size()), nt::euler_phi(c)) << c;
    std::set<std::vector<std::string>> tables;
    for (const auto& chi : chars) {
      std::vector<std::string> table;
      for (int64_t a = 0; a < c; ++a) {
        auto ea = chi.exponent_at(a);
        table.push_back(ea ? to_fraction_string(*chi.angle_at(a)) : "-");
        if (!ea) continue;
        for (int64_t b = 0; b < c; b += 7) {
          auto eb = chi.exponent_at(b);
          if (!eb) continue;
          EXPECT_EQ(*chi.exponent_at(a * b), (*ea + *eb) % chi.order());
        }
      }
      tables.insert(table);
      EXPECT_EQ(chi.conductor(), brute_conductor(chi)) << chi.to_string();
      EXPECT_EQ(chi.is_even(), c <= 2 || *chi.exponent_at(c - 1) == 0);
      // the primitive character agrees on units and is primitive
      const DirichletChar prim = chi.primitive();
      EXPECT_EQ(prim.modulus(), chi.conductor());
      EXPECT_TRUE(prim.is_primitive());
      for (int64_t a = 1; a < c; ++a)
        if (std::gcd(a, c) == 1) EXPECT_EQ(*prim.angle_at(a), *chi.angle_at(a));
      EXPECT_EQ(prim.lift(c), chi);
    }
    EXPECT_EQ(static_cast<int64_t>(tables.size()), nt::euler_phi(c)) << "distinct characters mod " << c;
  }
}

TEST(Characters, GroupOperations) {
  auto chars = enumerate_chars(21);
  for (const auto& a : chars)
    for (const auto& b : chars) {
      auto ab = a * b;
      for (int64_t x : {2, 4, 5, 8, 10, 13, 20}) EXPECT_EQ(*ab.angle_at(x), [&] {
          Rational s = *a.angle_at(x) + *b.angle_at(x);
          if (s >= 1) s -= 1;
          return s;
        }());
    }
  for (const auto& a : chars) EXPECT_TRUE((a * a.conj()).is_trivial());
}

TEST(GaussSum, Examples) {
  auto even5 = enumerate_chars(5, true);
  const auto& quad = even5[1];
  EXPECT_EQ(quad.order(), 2);
  auto t = gauss_sum(quad, 5);
  EXPECT_EQ(t * t, CycloElem::from_rational(t.level(), Rational(5)));
  for (int64_t ell : {2, 3, 5, 7, 11, 13})
    EXPECT_EQ(gauss_sum(DirichletChar(ell), ell), CycloElem::from_rational(ell, Rational(-1)));
  try {
    (void)gauss_sum(quad, 10 + 1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::ConductorNotDividing);
  }
}

TEST(GaussSum, ConjugateProductForPrimitive) {
  for (int64_t c = 1; c <= 24; ++c)
    for (const auto& chi : enumerate_chars(c)) {
      if (!chi.is_primitive()) continue;
      auto prod = gauss_sum(chi, c) * gauss_sum(chi.conj(), c);
      const int64_t sign = chi.is_even() ? 1 : -1;
      EXPECT_EQ(prod, CycloElem::from_rational(prod.level(), Rational(sign * c))) << chi.to_string();
    }
}

TEST(GaussSum, MatchesNumericSum) {
  for (int64_t m : {7, 12, 15, 20, 36, 45})
    for (const auto& chi : enumerate_chars(m)) {
      auto exact = numeric(gauss_sum(chi, m));
      auto direct = numeric_gauss(chi, m);
      EXPECT_NEAR(static_cast<double>(std::abs(exact - direct)), 0.0, 1e-12) << chi.to_string();
    }
}

TEST(GaussSum, GaloisEquivariance) {
  // sigma_t(tau_m(chi)) = chi^t(t)^{-1} tau_m(chi^t)
  for (int64_t m = 3; m <= 24; ++m)
    for (const auto& chi : enumerate_chars(m)) {
      const auto tau = gauss_sum(chi, m);
      for (int64_t t : nt::units_mod(tau.level())) {
        if (t > 25) break;
        const auto chit = chi.power(t);
        auto rhs = gauss_sum(chit, m) * chit.value(t).inverse().embed(tau.level());
        EXPECT_EQ(tau.galois(t), rhs) << chi.to_string() << " t=" << t;
        if (nt::mod(t, chi.order()) == 1) EXPECT_EQ(tau.galois(t), tau * chi.value(t).inverse().embed(tau.level()));
      }
    }
}

TEST(TauStar, Examples) {
  // primitive: empty product
  for (const auto& chi : enumerate_chars(15))
    if (chi.is_primitive()) EXPECT_EQ(tau_star(chi, 15), gauss_sum(chi, 15));
  for (int64_t ell : {3, 5, 7}) EXPECT_EQ(tau_star(DirichletChar(1), ell), CycloElem::from_rational(1, Rational(-1)));
  for (const auto& chi : enumerate_chars(3)) EXPECT_EQ(tau_star(chi, 15), gauss_sum(chi, 15));
  try {
    (void)tau_star(DirichletChar(1), 12);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NotSquarefree);
  }
}

TEST(TauStar, ImprimitiveGaussSumIdentity) {
  // tau_c(chi) = tau*(Q, chi) for every even chi and squarefree c <= 60
  int checked = 0;
  for (int64_t c = 1; c <= 60; ++c) {
    if (!nt::is_squarefree(c)) continue;
    for (const auto& chi : enumerate_chars(c, true)) {
      EXPECT_EQ(gauss_sum(chi, c), tau_star(chi, c)) << chi.to_string();
      ++checked;
    }
  }
  EXPECT_GT(checked, 300);
}

TEST(TauStar, InverseFrobeniusFactorWouldFail) {
  // The factor -chi(l)^{-1} disagrees with tau_c(chi) as soon as chi(l)^2 != 1:
  // a cubic character mod 7 lifted to c = 21.
  for (const auto& chi : enumerate_chars(7, true)) {
    if (chi.order() != 3) continue;
    const auto prim_sum = gauss_sum(chi, 7);
    const auto chi3 = chi.value(3).embed(prim_sum.level());
    const auto with_inverse = prim_sum * chi3.inverse() * Rational(-1);
    EXPECT_NE(gauss_sum(chi.lift(21), 21), with_inverse);
    EXPECT_EQ(gauss_sum(chi.lift(21), 21), tau_star(chi.lift(21), 21));
  }
}
