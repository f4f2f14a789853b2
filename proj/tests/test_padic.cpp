#include <gtest/gtest.h>

#include <random>

#include "thetalab/error.hpp"
#include "thetalab/fixtures.hpp"
#include "thetalab/ntheory.hpp"
#include "thetalab/padic.hpp"

using namespace thetalab;

namespace {

const CurveQ e11 = CurveQ::from_ints({0, -1, 1, -10, -20}, "11a1");
const CurveQ e17 = CurveQ::from_ints({1, -1, 1, -1, -14}, "17a1");
const CurveQ e37 = CurveQ::from_ints({0, 0, 1, -1, 0}, "37a1");
const CurveQ e58 = CurveQ::from_ints({1, -1, 0, -1, 1}, "58a1");
const CurveQ e65b = CurveQ::from_ints({1, 0, 0, 4, 1}, "65a2");

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no error raised";
  return ErrorKind::InvalidArgument;
}

UnramExtElem random_elem(const std::shared_ptr<const UnramExt>& ext, int64_t k, std::mt19937_64& rng, int64_t shift = 0) {
  std::vector<Integer> c;
  for (int64_t i = 0; i < ext->degree(); ++i) c.emplace_back(static_cast<long>(rng() % 100000));
  Integer scale;
  mpz_ui_pow_ui(scale.get_mpz_t(), static_cast<unsigned long>(ext->prime()), static_cast<unsigned long>(shift));
  return UnramExtElem::from_coords(ext, c, k) * Rational(scale);
}

// Bivariate series with rational coefficients, total degree <= T.
using Bi = std::vector<std::vector<Rational>>;

Bi bi_zero(size_t T) {
  Bi r(T + 1);
  for (size_t i = 0; i <= T; ++i) r[i].assign(T + 1 - i, 0);
  return r;
}

Bi bi_mul(const Bi& a, const Bi& b) {
  const size_t T = a.size() - 1;
  Bi r = bi_zero(T);
  for (size_t i = 0; i <= T; ++i)
    for (size_t j = 0; i + j <= T; ++j) {
      if (a[i][j] == 0) continue;
      for (size_t k = 0; i + j + k <= T; ++k)
        for (size_t l = 0; i + j + k + l <= T; ++l) r[i + k][j + l] += a[i][j] * b[k][l];
    }
  return r;
}

}  // namespace

TEST(PadicNum, Arithmetic) {
  const auto third = PadicNum::from_rational(5, make_rational(1, 3), 10);
  const auto three = PadicNum::from_rational(5, 3, 10);
  EXPECT_TRUE(third * three == PadicNum::from_rational(5, 1, 10));
  EXPECT_EQ(PadicNum::from_rational(5, make_rational(25, 2), 10).valuation(), 2);
  const auto fifth = PadicNum::from_rational(5, 1, 10) / PadicNum::from_rational(5, 5, 10);
  EXPECT_EQ(fifth.valuation(), -1);
  EXPECT_EQ(fifth.precision(), 8);
  EXPECT_EQ(PadicNum::from_rational(5, -1, 3).residue(3), 124);
  const auto m = PadicNum::from_rational(7, make_rational(-22, 49), 6);
  EXPECT_TRUE(PadicNum::from_rational(7, m.lift(), 6) == m);
  EXPECT_EQ(m.lift().get_den(), 49);
  EXPECT_TRUE(PadicNum::from_rational(3, 81, 4).is_zero());
  EXPECT_EQ(kind_of([] { (void)(PadicNum::from_rational(3, 1, 5) / PadicNum(3, 5)); }), ErrorKind::DivisionByZero);
}

TEST(PadicNum, PrecisionBookkeepingProperty) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    auto rq = [&] {
      return make_rational(static_cast<int64_t>(rng() % 2001) - 1000, static_cast<int64_t>(rng() % 200) + 1);
    };
    const Rational a = rq(), b = rq();
    if (b == 0) continue;
    for (int64_t k : {6, 11}) {
      const auto A = PadicNum::from_rational(3, a, k), B = PadicNum::from_rational(3, b, k);
      const auto A5 = PadicNum::from_rational(3, a, k + 5), B5 = PadicNum::from_rational(3, b, k + 5);
      EXPECT_TRUE((A + B) == (A5 + B5).reduce(k));
      EXPECT_TRUE((A * B) == (A5 * B5).reduce(k));
      EXPECT_TRUE((A * B) == PadicNum::from_rational(3, a * b, k + 5));
      EXPECT_TRUE((A / B) == PadicNum::from_rational(3, a / b, k + 10));
    }
  }
}

TEST(UnramExt, FieldStructure) {
  std::mt19937_64 rng(11);
  for (auto [p, f] : std::vector<std::pair<int64_t, int64_t>>{{3, 1}, {3, 2}, {3, 3}, {5, 2}, {5, 6}, {7, 3}}) {
    const auto ext = UnramExt::make(p, f, 30);
    const auto X = UnramExtElem::generator(ext, 25);
    // Frobenius has exact order f on the generator, so the modulus is irreducible
    for (int64_t j = 1; j < f; ++j) EXPECT_FALSE(X.frobenius(j) == X) << p << " " << f;
    EXPECT_TRUE(X.frobenius(f) == X);
    // phi(X) = X^p mod p
    EXPECT_TRUE(X.frobenius().reduce(1) == X.pow(p).reduce(1));
    for (int trial = 0; trial < 10; ++trial) {
      const auto a = random_elem(ext, 25, rng), b = random_elem(ext, 25, rng);
      EXPECT_TRUE((a * b).frobenius() == a.frobenius() * b.frobenius());
      EXPECT_TRUE((a + b).frobenius() == a.frobenius() + b.frobenius());
      if (!a.is_zero()) {
        const auto prod = a * a.inverse();
        EXPECT_TRUE(prod == UnramExtElem::from_rational(ext, 1, 25));
      }
    }
  }
}

TEST(Embedding, Examples) {
  const auto e31 = UnramExt::make(3, 1, 30);
  EXPECT_TRUE(embed_cyclotomic(CycloElem::from_rational(1, 1), e31, 20) == UnramExtElem::from_rational(e31, 1, 20));

  const auto e32 = UnramExt::make(3, 2, 30);
  const auto i = embed_cyclotomic(CycloElem::zeta_power(4, 1), e32, 20);
  EXPECT_TRUE(i * i == UnramExtElem::from_rational(e32, -1, 20));
  EXPECT_FALSE(i.in_base_field());

  EXPECT_EQ(kind_of([&] { (void)CyclotomicEmbedding(e32, 6); }), ErrorKind::RamifiedCase);
  EXPECT_EQ(kind_of([&] { (void)CyclotomicEmbedding(e31, 4); }), ErrorKind::InvalidArgument);
}

TEST(Embedding, RingHomomorphismAndChoices) {
  const auto ext = UnramExt::make(5, 6, 30);
  const CyclotomicEmbedding emb(ext, 21);
  for (int64_t a = 0; a < 21; ++a)
    for (int64_t b = 0; b < 21; b += 4) {
      const auto za = emb(CycloElem::zeta_power(21, a), 20), zb = emb(CycloElem::zeta_power(21, b), 20);
      EXPECT_TRUE(za * zb == emb(CycloElem::zeta_power(21, a + b), 20));
    }
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<Rational> c1, c2;
    for (int k = 0; k < 12; ++k) {
      c1.push_back(make_rational(static_cast<int64_t>(rng() % 21) - 10, static_cast<int64_t>(rng() % 4) + 1));
      c2.push_back(make_rational(static_cast<int64_t>(rng() % 21) - 10, 1));
    }
    const CycloElem x(21, c1), y(21, c2);
    EXPECT_TRUE(emb(x * y, 20) == emb(x, 20) * emb(y, 20));
    EXPECT_TRUE(emb(x + y, 20) == emb(x, 20) + emb(y, 20));
    // Frobenius acts as zeta -> zeta^5
    EXPECT_TRUE(emb(x, 20).frobenius() == emb(x.galois(5), 20));
  }
  EXPECT_EQ(CyclotomicEmbedding::choices(5, 21), 2);
  const CyclotomicEmbedding other(ext, 21, 1);
  EXPECT_FALSE(other.zeta() == emb.zeta());
  EXPECT_TRUE(other.zeta().pow(21) == UnramExtElem::from_rational(ext, 1, 30));
}

TEST(FormalLog, MatchesPariCoefficients) {
  for (const std::string label : {"11a1", "17a1", "37a1", "58a1", "65a2"}) {
    const auto doc = load_fixture("formal_log", label)["payload"];
    std::array<long, 5> a{};
    for (int i = 0; i < 5; ++i) a[static_cast<size_t>(i)] = doc["ainvs"][i].get<long>();
    const CurveQ e = CurveQ::from_ints(a, label);
    const int64_t n = doc["terms"].get<int64_t>();
    const auto s = formal_group_log(e, n);
    EXPECT_EQ(s.coeffs[1], 1);
    for (int64_t k = 1; k <= n; ++k)
      EXPECT_EQ(s.coeffs[static_cast<size_t>(k)], parse_rational(doc["coefficients"][k - 1].get<std::string>()))
          << label << " c_" << k;
  }
  EXPECT_EQ(formal_group_log(e37, 5).coeffs[2], 0);
  EXPECT_EQ(formal_group_log(e58, 5).coeffs[2], make_rational(1, 2));
}

TEST(FormalLog, DenominatorDividesIndex) {
  for (const CurveQ& e : {e11, e17, e37, e58, e65b}) {
    const auto s = formal_group_log(e, 60);
    for (size_t n = 1; n <= 60; ++n) {
      const Rational nc = s.coeffs[n] * Rational(static_cast<long>(n));
      EXPECT_EQ(nc.get_den(), 1) << e.label << " n=" << n;
    }
  }
}

TEST(FormalGroupLaw, LogIsHomomorphismToDegree20) {
  const size_t T = 20;
  for (const CurveQ& e : {e11, e17, e37, e58, e65b}) {
    const auto law = formal_group_law(e, static_cast<int64_t>(T));
    const auto lg = formal_group_log(e, static_cast<int64_t>(T));
    Bi F = bi_zero(T);
    for (size_t i = 0; i <= T; ++i)
      for (size_t j = 0; i + j <= T; ++j) F[i][j] = Rational(law.coeffs[i][j]);
    EXPECT_EQ(F[1][0], 1);
    EXPECT_EQ(F[0][1], 1);
    for (size_t i = 0; i <= T; ++i)
      for (size_t j = 0; i + j <= T; ++j) {
        EXPECT_EQ(F[i][j], F[j][i]) << "symmetry";
        if (j == 0 && i != 1) EXPECT_EQ(F[i][0], 0) << "F(t, 0) = t";
      }
    // log(F(t1, t2)) - log t1 - log t2 = O(deg 21)
    Bi acc = bi_zero(T), pw = bi_zero(T);
    pw[0][0] = 1;
    for (size_t n = 1; n <= T; ++n) {
      pw = bi_mul(pw, F);
      for (size_t i = 0; i <= T; ++i)
        for (size_t j = 0; i + j <= T; ++j) acc[i][j] += lg.coeffs[n] * pw[i][j];
    }
    for (size_t n = 1; n <= T; ++n) {
      acc[n][0] -= lg.coeffs[n];
      acc[0][n] -= lg.coeffs[n];
    }
    for (size_t i = 0; i <= T; ++i)
      for (size_t j = 0; i + j <= T; ++j) EXPECT_EQ(acc[i][j], 0) << e.label << " t1^" << i << " t2^" << j;
  }
}

TEST(FormalGroupLaw, PadicEvaluationMatchesLog) {
  std::mt19937_64 rng(5);
  const auto ext = UnramExt::make(5, 2, 40);
  for (int trial = 0; trial < 5; ++trial) {
    const auto t1 = random_elem(ext, 15, rng, 1), t2 = random_elem(ext, 15, rng, 2);
    const auto s = formal_add(e17, t1, t2);
    EXPECT_GE(s.precision(), 15);
    EXPECT_TRUE(formal_log(e17, s) == formal_log(e17, t1) + formal_log(e17, t2));
    EXPECT_TRUE(formal_log(e17, formal_multiply(e17, 3, t1)) == formal_log(e17, t1) * Rational(3));
  }
  EXPECT_EQ(kind_of([&] { (void)formal_log(e17, UnramExtElem::from_rational(ext, 1, 10)); }), ErrorKind::InvalidArgument);
  EXPECT_EQ(kind_of([&] { (void)formal_group_log(e17, 4).evaluate(UnramExtElem::from_rational(ext, 5, 20)); }),
            ErrorKind::PrecisionExhausted);
}

TEST(LocalStructure, Decomposition) {
  const auto F = FieldSpec::cyclic_subfield(7, 3);
  const auto L3 = local_structure(F, 3, 12);
  EXPECT_EQ(L3.places.size(), 1u);
  EXPECT_EQ(L3.local_degree, 3);
  EXPECT_EQ(L3.ext->degree(), 6);
  const auto L5 = local_structure(F, 5, 12);
  EXPECT_EQ(L5.local_degree, 3);
  EXPECT_EQ(L5.ext->degree(), 6);
  const auto L13 = local_structure(F, 13, 12);
  EXPECT_EQ(L13.places.size(), 3u);
  EXPECT_EQ(L13.local_degree, 1);
  EXPECT_EQ(L13.ext->degree(), 2);
  EXPECT_EQ(kind_of([&] { (void)local_structure(F, 7, 12); }), ErrorKind::RamifiedPlace);
  EXPECT_EQ(kind_of([&] { (void)local_structure(F, 2, 12); }), ErrorKind::EvenPrime);
  const auto x = random_point(L5, 1);
  EXPECT_NO_THROW(validate_point(L5, x));
  SemiLocalPoint bad{{UnramExtElem::generator(L5.ext, 12) * Rational(5)}};
  EXPECT_EQ(kind_of([&] { validate_point(L5, bad); }), ErrorKind::InvalidArgument);
}

TEST(LogResolvent, TrivialGroupAndTrivialCharacter) {
  const auto L = local_structure(FieldSpec::rationals(), 5, 12);
  const auto x = random_point(L, 2);
  const auto lr = log_resolvent(e17, L, x, DirichletChar(1));
  ASSERT_EQ(lr.coords.size(), 1u);
  EXPECT_TRUE(lr.coords[0] == formal_log(e17, x.params[0]));

  const auto F = FieldSpec::cyclic_subfield(7, 3);
  const auto L13 = local_structure(F, 13, 12);
  const auto y = random_point(L13, 3);
  const auto lr1 = log_resolvent(e17, L13, y, DirichletChar(7));
  UnramExtElem sum(L13.ext, 100);
  for (const auto& t : y.params) sum += formal_log(e17, t);
  EXPECT_TRUE(lr1.coords[0] == sum);
}

TEST(LogResolvent, CubicFieldInertThreeMatchesBruteSum) {
  const auto F = FieldSpec::cyclic_subfield(7, 3);
  const auto L = local_structure(F, 3, 12);
  const auto x = random_point(L, 4);
  for (const auto& chi : field_characters(F)) {
    if (chi.order() != 3) continue;
    const auto lr = log_resolvent(e11, L, x, chi);
    // the group is generated by Frobenius; g = Frob^{-j} sends t to phi^j(t)
    const int64_t k3 = *chi.exponent_at(3);
    std::vector<UnramExtElem> b(3, UnramExtElem(L.ext, 100));
    for (int64_t j = 0; j < 3; ++j) b[static_cast<size_t>(nt::mod(-j * k3, 3))] += formal_log(e11, x.params[0].frobenius(j));
    ASSERT_EQ(lr.coords.size(), 2u);
    EXPECT_TRUE(lr.coords[0] == b[0] - b[2]);
    EXPECT_TRUE(lr.coords[1] == b[1] - b[2]);
    EXPECT_EQ(kind_of([&] { (void)lr.embed(*L.embedding); }), ErrorKind::RamifiedCase);
  }
  EXPECT_EQ(kind_of([&] { (void)log_resolvent(e11, L, x, enumerate_chars(7)[1]); }),
            ErrorKind::CharacterDoesNotFactor);
}

TEST(LogResolvent, AdditiveAndLinearProperty) {
  const auto F = FieldSpec::cyclic_subfield(7, 3);
  for (int64_t p : {5, 13}) {
    const auto L = local_structure(F, p, 12);
    const auto x = random_point(L, 10 + static_cast<uint64_t>(p));
    const auto y = random_point(L, 20 + static_cast<uint64_t>(p));
    const auto xy = point_add(e17, x, y);
    for (const auto& chi : field_characters(F)) {
      const auto lx = log_resolvent(e17, L, x, chi);
      EXPECT_GE(lx.precision(), 10);
      EXPECT_TRUE(log_resolvent(e17, L, xy, chi) == lx + log_resolvent(e17, L, y, chi));
      for (int64_t l : {2, 3, 7})
        EXPECT_TRUE(log_resolvent(e17, L, point_multiply(e17, l, x), chi) == lx * Rational(l)) << p << " " << l;
    }
  }
}

TEST(LogResolvent, PrecisionStableAndEquivariant) {
  const auto F = FieldSpec::cyclic_subfield(7, 3);
  const auto L15 = local_structure(F, 5, 15);
  const auto x15 = random_point(L15, 8);
  const AbGroup& G = F.group();
  for (const auto& chi : field_characters(F)) {
    const auto hi = log_resolvent(e17, L15, x15, chi);
    SemiLocalPoint x10;
    for (const auto& t : x15.params) x10.params.push_back(t.reduce(10));
    const auto lo = log_resolvent(e17, L15, x10, chi);
    for (size_t i = 0; i < hi.coords.size(); ++i) EXPECT_TRUE(hi.coords[i].reduce(10).identical(lo.coords[i]));
    const UnramExtElem base = hi.embed(*L15.embedding);
    for (size_t h = 0; h < G.size(); ++h) {
      const auto moved = log_resolvent(e17, L15, act(L15, h, x15), chi).embed(*L15.embedding);
      const auto chih = (*L15.embedding)(chi.value(L15.residues[h]), 40);
      EXPECT_TRUE(moved == chih * base);
    }
  }
}

TEST(FirstPrediction, TrivialGroup) {
  const auto L = local_structure(FieldSpec::rationals(), 3, 12);
  const auto x = random_point(L, 9);
  const auto r = first_prediction_sum(e11, L, x, {3, 11});
  ASSERT_EQ(r.coefficients.size(), 1u);
  // L_S(A, 1) / Omega^+ = 1/5 * (1 + 1/3 + 1/3) * (1 - 1/11)
  ASSERT_EQ(r.algebraic_parts.size(), 1u);
  EXPECT_EQ(r.algebraic_parts[0].second, CycloElem::from_rational(1, make_rational(10, 33)));
  EXPECT_TRUE(r.coefficients[0] == formal_log(e11, x.params[0]) * make_rational(10, 33));
  EXPECT_EQ(r.integral, r.coefficients[0].valuation() >= 0);
  EXPECT_EQ(kind_of([&] { (void)first_prediction_sum(e11, L, x, {3}); }), ErrorKind::InvalidArgument);
  EXPECT_EQ(kind_of([&] { (void)first_prediction_sum(e37, L, x, {3, 37}); }), ErrorKind::CharacterValueUnavailable);
  EXPECT_EQ(kind_of([&] { (void)first_prediction_sum(e11, L, x, {3, 11}, 1000); }), ErrorKind::PrecisionExhausted);
}

TEST(FirstPrediction, RankZeroCubicAtFive) {
  const auto F = FieldSpec::cyclic_subfield(7, 3);
  const auto L17 = local_structure(F, 5, 17);
  const auto x17 = random_point(L17, 42);
  SemiLocalPoint x;
  for (const auto& t : x17.params) x.params.push_back(t.reduce(12));
  const auto S = default_places(e17, F, 5);
  EXPECT_EQ(S, (std::vector<int64_t>{5, 7, 17}));
  const auto r = first_prediction_sum(e17, L17, x, S);
  const auto r17 = first_prediction_sum(e17, L17, x17, S);
  EXPECT_GE(r.precision, 10);
  EXPECT_TRUE(r.integral);
  EXPECT_TRUE(std::any_of(r.coefficients.begin(), r.coefficients.end(),
                          [](const UnramExtElem& c) { return !c.is_zero(); }));
  EXPECT_EQ(r.integral, r17.integral);
  EXPECT_EQ(r.congruences_hold, r.integral);
  for (size_t g = 0; g < r.coefficients.size(); ++g) EXPECT_TRUE(r17.coefficients[g].reduce(r.precision) == r.coefficients[g]);

  // acting on x by h moves the coefficient of h^{-1} g to g
  const AbGroup& G = F.group();
  for (size_t h = 0; h < G.size(); ++h) {
    const auto rh = first_prediction_sum(e17, L17, act(L17, h, x), S);
    for (size_t g = 0; g < G.size(); ++g) EXPECT_TRUE(rh.coefficients[g] == r.coefficients[G.add(G.neg(h), g)]);
  }
  // [p] x scales the element by p
  const auto r5 = first_prediction_sum(e17, L17, point_multiply(e17, 5, x), S);
  for (size_t g = 0; g < G.size(); ++g) EXPECT_TRUE(r5.coefficients[g] == r.coefficients[g] * Rational(5));
}
