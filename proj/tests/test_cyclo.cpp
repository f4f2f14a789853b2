#include <gtest/gtest.h>

#include <random>

#include "thetalab/cyclo.hpp"
#include "thetalab/error.hpp"
#include "thetalab/ntheory.hpp"

using namespace thetalab;

namespace {

CycloElem random_elem(int64_t level, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> num(-9, 9), den(1, 5);
  std::vector<Rational> c;
  for (int64_t i = 0; i < nt::euler_phi(level); ++i) c.push_back(make_rational(num(rng), den(rng)));
  return CycloElem(level, c);
}

CycloElem one(int64_t level) { return CycloElem::from_rational(level, Rational(1)); }

}  // namespace

TEST(CyclotomicPolynomial, SmallLevels) {
  auto to_long = [](const std::vector<Integer>& p) {
    std::vector<long> r;
    for (const auto& c : p) r.push_back(c.get_si());
    return r;
  };
  EXPECT_EQ(to_long(cyclotomic_polynomial(1)), (std::vector<long>{-1, 1}));
  EXPECT_EQ(to_long(cyclotomic_polynomial(4)), (std::vector<long>{1, 0, 1}));
  EXPECT_EQ(to_long(cyclotomic_polynomial(6)), (std::vector<long>{1, -1, 1}));
  EXPECT_EQ(to_long(cyclotomic_polynomial(12)), (std::vector<long>{1, 0, -1, 0, 1}));
  // Phi_105 is the first with a coefficient of absolute value 2.
  auto p105 = to_long(cyclotomic_polynomial(105));
  EXPECT_EQ(p105.size(), 49u);
  EXPECT_EQ(p105[7], -2);
}

TEST(CycloElem, ProductExamples) {
  auto i = CycloElem::zeta_power(4, 1);
  EXPECT_EQ(i * i, CycloElem::from_rational(4, Rational(-1)));

  auto z = CycloElem::zeta_power(5, 2);
  CycloElem expected(5, {Rational(-1), Rational(-1), Rational(-1), Rational(-1)});
  EXPECT_EQ(z * z, expected);
  EXPECT_EQ(CycloElem::zeta_power(5, 3) * CycloElem::zeta_power(5, 2), one(5));
}

TEST(CycloElem, InverseByBruteExpansion) {
  auto x = one(3) + CycloElem::zeta_power(3, 1);
  auto inv = x.inverse();
  EXPECT_EQ(inv, -CycloElem::zeta_power(3, 1));
  EXPECT_EQ(x * inv, one(3));
  EXPECT_THROW(CycloElem(7).inverse(), Error);
}

TEST(CycloElem, LevelMismatchThrows) {
  try {
    (void)(one(3) * one(5));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::LevelMismatch);
  }
}

TEST(CycloElem, GaloisAndEmbed) {
  EXPECT_EQ(CycloElem::zeta_power(3, 1).galois(2), CycloElem::zeta_power(3, 2));
  std::mt19937_64 rng(7);
  auto a = random_elem(9, rng);
  EXPECT_EQ(a.galois(1), a);
  EXPECT_THROW((void)a.galois(3), Error);

  auto image = CycloElem::zeta_power(3, 1).embed(6);
  EXPECT_NE(image, one(6));
  EXPECT_EQ(image * image * image, one(6));
  EXPECT_THROW((void)image.embed(9), Error);
}

TEST(CycloElem, RingAxiomsProperty) {
  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<int64_t> lv(1, 60);
  for (int trial = 0; trial < 60; ++trial) {
    const int64_t n = lv(rng);
    auto a = random_elem(n, rng), b = random_elem(n, rng), c = random_elem(n, rng);
    EXPECT_EQ((a * b) * c, a * (b * c)) << "level " << n;
    EXPECT_EQ(a * (b + c), a * b + a * c) << "level " << n;
    EXPECT_EQ(a * b, b * a);
    if (!a.is_zero()) EXPECT_EQ(a * a.inverse(), one(n)) << "level " << n;
  }
}

TEST(CycloElem, GaloisCompositionProperty) {
  std::mt19937_64 rng(11);
  for (int64_t n : {5, 7, 12, 15, 21, 24, 35, 40}) {
    auto a = random_elem(n, rng);
    auto units = nt::units_mod(n);
    for (int64_t s : units)
      for (int64_t t : units) EXPECT_EQ(a.galois(t).galois(s), a.galois(nt::mod(s * t, n)));
    // galois is a ring map
    auto b = random_elem(n, rng);
    EXPECT_EQ((a * b).galois(units.back()), a.galois(units.back()) * b.galois(units.back()));
  }
}

TEST(CycloElem, EmbedCommutesWithGalois) {
  std::mt19937_64 rng(5);
  for (auto [n, m] : std::vector<std::pair<int64_t, int64_t>>{{3, 12}, {5, 15}, {4, 20}, {6, 42}}) {
    auto a = random_elem(n, rng);
    for (int64_t t : nt::units_mod(m)) EXPECT_EQ(a.embed(m).galois(t), a.galois(nt::mod(t, n)).embed(m));
  }
}

TEST(CycloElem, NormIsRational) {
  std::mt19937_64 rng(99);
  for (int64_t n : {3, 5, 8, 9, 12, 13}) {
    auto a = random_elem(n, rng);
    EXPECT_NO_THROW((void)a.norm());
  }
  // N(1 - zeta_p) = p
  for (int64_t p : {3, 5, 7, 11}) EXPECT_EQ((one(p) - CycloElem::zeta_power(p, 1)).norm(), Rational(p));
}

TEST(CycloElem, ComplexValue) {
  long double re, im;
  (CycloElem::zeta_power(8, 1) * Rational(2)).to_complex(re, im);
  EXPECT_NEAR(static_cast<double>(re), std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(static_cast<double>(im), std::sqrt(2.0), 1e-15);
}

TEST(CycloAccumulator, MatchesRepeatedAddition) {
  CycloAccumulator acc(12);
  CycloElem direct(12);
  for (int64_t e = 0; e < 30; ++e) {
    acc.add(e * 5, make_rational(e, 3));
    direct.add_zeta_power(e * 5, make_rational(e, 3));
  }
  EXPECT_EQ(acc.finish(), direct);
  // sum of all 12th roots of unity vanishes
  CycloAccumulator all(12);
  for (int64_t e = 0; e < 12; ++e) all.add(e, Rational(1));
  EXPECT_TRUE(all.finish().is_zero());
}
