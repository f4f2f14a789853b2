#include <gtest/gtest.h>

#include <random>
#include <set>

#include "thetalab/characters.hpp"
#include "thetalab/error.hpp"
#include "thetalab/grouprings.hpp"
#include "thetalab/ntheory.hpp"

using namespace thetalab;

namespace {

GroupRingElem random_elem(const AbGroup& G, std::mt19937& rng, Scalars s = {}, int lo = -4, int hi = 4) {
  std::uniform_int_distribution<int> dist(lo, hi);
  std::vector<Rational> c(G.size());
  for (auto& q : c) q = dist(rng);
  return GroupRingElem(G, c, s);
}

GroupRingElem sigma(const AbGroup& G, Scalars s = {}) { return GroupRingElem::element(G, G.generators().at(0), s); }

// Exhaustive Z/p^k-span of a few vectors.
std::set<std::vector<Integer>> brute_span(const std::vector<std::vector<Integer>>& gens, int64_t m) {
  const size_t n = gens.empty() ? 0 : gens[0].size();
  std::set<std::vector<Integer>> out;
  std::vector<int64_t> coef(gens.size(), 0);
  for (;;) {
    std::vector<Integer> v(n, 0);
    for (size_t i = 0; i < gens.size(); ++i)
      for (size_t j = 0; j < n; ++j) v[j] += gens[i][j] * coef[i];
    for (auto& e : v) {
      e %= m;
      if (e < 0) e += m;
    }
    out.insert(v);
    size_t pos = 0;
    while (pos < coef.size() && ++coef[pos] == m) coef[pos++] = 0;
    if (pos == coef.size()) break;
  }
  return out;
}

std::vector<Integer> as_ints(const GroupRingElem& x) {
  std::vector<Integer> v;
  for (const auto& q : x.coeffs()) v.push_back(q.get_num());
  return v;
}

DirichletChar character_of(const UnitQuotient& q, size_t k) {
  const int64_t e = q.group.exponent();
  return DirichletChar::from_function(q.modulus, [&](int64_t a) { return make_rational(q.group.pairing(k, q.of(a)), e); });
}

// H_d = image of the units congruent to 1 mod d
std::vector<size_t> congruence_subgroup(const UnitQuotient& q, int64_t d) {
  std::set<size_t> out;
  for (int64_t a = 1; a < std::max<int64_t>(q.modulus, 2); ++a)
    if (std::gcd(a, q.modulus) == 1 && nt::mod(a - 1, d) == 0) out.insert(q.of(a));
  return {out.begin(), out.end()};
}

}  // namespace

TEST(AbGroup, Basics) {
  AbGroup G({2, 6});
  EXPECT_EQ(G.size(), 12u);
  EXPECT_EQ(G.exponent(), 6);
  for (size_t x = 0; x < G.size(); ++x) {
    EXPECT_EQ(G.index(G.coords(x)), x);
    EXPECT_EQ(G.add(x, G.neg(x)), 0u);
    EXPECT_EQ(G.times(x, G.order(x)), 0u);
  }
  EXPECT_THROW(AbGroup({4, 6}), Error);
  EXPECT_EQ(AbGroup({1, 3}).invariant_factors(), std::vector<int64_t>{3});
}

TEST(AbGroup, PresentationMatchesUnitGroups) {
  // (Z/c)^x: order and exponent match a direct count
  for (int64_t c : {1, 3, 5, 8, 12, 15, 16, 21, 35, 60, 105, 120}) {
    const UnitQuotient q = unit_quotient(c, {});
    EXPECT_EQ(static_cast<int64_t>(q.group.size()), nt::euler_phi(c)) << c;
    int64_t expo = 1;
    for (int64_t a : nt::units_mod(c)) expo = std::lcm(expo, nt::mult_order(a, c));
    EXPECT_EQ(q.group.exponent(), c <= 2 ? 1 : expo) << c;
    for (int64_t a : nt::units_mod(c))
      for (int64_t b : nt::units_mod(c)) EXPECT_EQ(q.of(a * b), q.group.add(q.of(a), q.of(b)));
  }
  const UnitQuotient plus = unit_quotient(35, {-1});
  EXPECT_EQ(plus.group.size(), 12u);
  EXPECT_EQ(plus.of(-1), 0u);
  EXPECT_EQ(plus.of(6), plus.of(29));
  EXPECT_THROW(present(1, {}), Error);
}

TEST(ProjectQuotient, Examples) {
  AbGroup Z6({6}), Z2({2});
  GroupHom q{Z6, Z2, {}};
  for (size_t g = 0; g < 6; ++g) q.images.push_back(g % 2);
  EXPECT_EQ(project_quotient(sigma(Z6), q), sigma(Z2));

  std::mt19937 rng(1);
  const auto x = random_elem(Z6, rng);
  GroupHom aug{Z6, AbGroup(), std::vector<size_t>(6, 0)};
  EXPECT_EQ(project_quotient(x, aug)[0], x.augmentation());

  GroupHom bad{Z6, AbGroup({3}), {}};
  for (size_t g = 0; g < 6; ++g) bad.images.push_back(0);
  EXPECT_THROW(project_quotient(x, bad), Error);
  try {
    project_quotient(x, bad);
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NotSurjective);
  }
}

TEST(ProjectQuotient, FiberSumsFrom15To5) {
  const UnitQuotient big = unit_quotient(15, {}), small = unit_quotient(5, {});
  GroupHom q{big.group, small.group, std::vector<size_t>(big.group.size())};
  for (int64_t a : nt::units_mod(15)) q.images[big.of(a)] = small.of(a);
  std::mt19937 rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    const auto x = random_elem(big.group, rng);
    const auto y = project_quotient(x, q);
    for (int64_t b : nt::units_mod(5)) {
      Rational s = 0;
      for (int64_t a : nt::units_mod(15))
        if (a % 5 == b) s += x[big.of(a)];
      EXPECT_EQ(y[small.of(b)], s);
    }
    const auto z = random_elem(big.group, rng);
    EXPECT_EQ(project_quotient(x * z, q), project_quotient(x, q) * project_quotient(z, q));
  }
}

TEST(UnitCriterion, Examples) {
  for (int64_t p : {3, 5, 7}) {
    AbGroup G({p});
    const auto one = GroupRingElem::one(G);
    const auto s = sigma(G);
    auto v = padic_integrality_and_unit(one + (s - one).scaled(p), p);
    EXPECT_TRUE(v.integral);
    EXPECT_TRUE(v.unit);
    v = padic_integrality_and_unit(s - one, p);
    EXPECT_TRUE(v.integral);
    EXPECT_FALSE(v.unit);
    auto frac = one;
    frac.set(1, make_rational(1, p));
    v = padic_integrality_and_unit(frac, p);
    EXPECT_FALSE(v.integral);
    EXPECT_FALSE(v.unit);
  }
  EXPECT_THROW(padic_integrality_and_unit(GroupRingElem::one(AbGroup({2})), 2), Error);
}

TEST(UnitCriterion, Multiplicative) {
  std::mt19937 rng(3);
  for (const auto& G : {AbGroup({3}), AbGroup({2, 2}), AbGroup({6}), AbGroup({3, 3}), AbGroup({9})})
    for (int trial = 0; trial < 30; ++trial) {
      const auto x = random_elem(G, rng), y = random_elem(G, rng);
      const auto u = padic_integrality_and_unit(x, 3).unit, w = padic_integrality_and_unit(y, 3).unit;
      EXPECT_EQ(padic_integrality_and_unit(x * y, 3).unit, u && w);
    }
}

TEST(AugmentationIdeal, Examples) {
  for (int64_t p : {3, 5}) {
    AbGroup G({p});
    const Scalars s{p, 2};
    const auto t = sigma(G, s) - GroupRingElem::one(G, s);
    EXPECT_TRUE(aug_ideal_membership(t * t, 2));
    EXPECT_FALSE(aug_ideal_membership(GroupRingElem::one(G, s).scaled(p), 1));
    EXPECT_TRUE(aug_ideal_membership(GroupRingElem::one(G, s).scaled(p), 0));
  }
}

TEST(AugmentationIdeal, CubeOfZ3AgainstEnumeration) {
  AbGroup G({3});
  const Scalars s{3, 2};
  const auto one = GroupRingElem::one(G, s);
  const auto t = sigma(G, s) - one;
  const auto cube = t * t * t;
  std::vector<std::vector<Integer>> gens;
  for (size_t g = 0; g < 3; ++g) gens.push_back(as_ints(cube * GroupRingElem::element(G, g, s)));
  const auto span = brute_span(gens, 9);
  // every element of Z/9[G], decided both ways
  for (int64_t code = 0; code < 729; ++code) {
    std::vector<Rational> c{code % 9, (code / 9) % 9, code / 81};
    const GroupRingElem x(G, c, s);
    EXPECT_EQ(aug_ideal_membership(x, 3), span.count(as_ints(x)) == 1) << x.to_string();
  }
  // (1 + t)^3 = 1 gives 3t = -t^3 - 3t^2, so 3t lies in I^3 while t is not in I^2
  EXPECT_TRUE(aug_ideal_membership(t.scaled(3), 3));
  EXPECT_FALSE(aug_ideal_membership(t, 2));
}

TEST(AugmentationIdeal, Monotone) {
  std::mt19937 rng(11);
  for (const auto& G : {AbGroup({3}), AbGroup({9}), AbGroup({3, 3}), AbGroup({6})}) {
    const Scalars s{3, 3};
    const auto one = GroupRingElem::one(G, s);
    std::vector<GroupRingElem> basic;
    for (size_t g : G.generators()) basic.push_back(GroupRingElem::element(G, g, s) - one);
    for (int trial = 0; trial < 15; ++trial) {
      // random products land deep in the filtration
      auto x = random_elem(G, rng, s, 0, 26);
      std::uniform_int_distribution<size_t> pick(0, basic.size() - 1);
      const int depth = trial % 4;
      for (int j = 0; j < depth; ++j) x = x * basic[pick(rng)];
      EXPECT_TRUE(aug_ideal_membership(x, depth));
      for (int n = 1; n <= 4; ++n)
        if (aug_ideal_membership(x, n)) EXPECT_TRUE(aug_ideal_membership(x, n - 1));
    }
  }
}

TEST(Fitting, Examples) {
  AbGroup triv;
  const Scalars s{3, 2};
  const auto one = GroupRingElem::one(triv, s);
  GroupRingMatrix M{{one.scaled(3)}};
  EXPECT_TRUE(fitting_membership(one.scaled(3), M, 0));
  EXPECT_FALSE(fitting_membership(one, M, 0));
  EXPECT_THROW(fitting_membership(one, M, 1), Error);
  EXPECT_THROW(fitting_membership(one, M, -1), Error);

  AbGroup G({3});
  const auto g1 = GroupRingElem::one(G, s), g0 = GroupRingElem(G, s);
  GroupRingMatrix I{{g1, g0}, {g0, g1}};
  std::mt19937 rng(5);
  for (int trial = 0; trial < 10; ++trial) EXPECT_TRUE(fitting_membership(random_elem(G, rng, s, 0, 8), I, 0));
}

TEST(Fitting, Z3AgainstEnumeration) {
  AbGroup G({3});
  const Scalars s{3, 2};
  const auto one = GroupRingElem::one(G, s);
  const auto t = sigma(G, s) - one;
  GroupRingMatrix M{{t}, {one.scaled(3)}};
  std::vector<std::vector<Integer>> gens;
  for (const auto& x : {t, one.scaled(3)})
    for (size_t g = 0; g < 3; ++g) gens.push_back(as_ints(x * GroupRingElem::element(G, g, s)));
  const auto span = brute_span(gens, 9);
  for (int64_t code = 0; code < 729; ++code) {
    const GroupRingElem x(G, {code % 9, (code / 9) % 9, code / 81}, s);
    EXPECT_EQ(fitting_membership(x, M, 0), span.count(as_ints(x)) == 1);
  }
}

TEST(Fitting, MonotoneInIndex) {
  std::mt19937 rng(9);
  AbGroup G({3});
  const Scalars s{3, 2};
  for (int trial = 0; trial < 12; ++trial) {
    GroupRingMatrix M(3, std::vector<GroupRingElem>(3));
    for (auto& row : M)
      for (auto& e : row) e = random_elem(G, rng, s, 0, 8).scaled(trial % 2 ? 3 : 1);
    for (int code = 0; code < 20; ++code) {
      const auto x = random_elem(G, rng, s, 0, 8);
      const bool f0 = fitting_membership(x, M, 0), f1 = fitting_membership(x, M, 1), f2 = fitting_membership(x, M, 2);
      if (f0) EXPECT_TRUE(f1);
      if (f1) EXPECT_TRUE(f2);
    }
  }
}

TEST(UnitSum, TrivialModulus) {
  AbGroup triv;
  auto r = unit_sum_element(1, [](size_t) { return int64_t{1}; }, 3, 1, triv, {{1, {0}}});
  EXPECT_EQ(r.element, GroupRingElem::one(triv));
  EXPECT_TRUE(r.verdict.unit);
}

TEST(UnitSum, RealSubfieldOf5) {
  const UnitQuotient q = unit_quotient(5, {-1});
  ASSERT_EQ(q.group.size(), 2u);
  auto cond = [&](size_t k) { return character_of(q, k).conductor(); };
  std::map<int64_t, std::vector<size_t>> H{{1, congruence_subgroup(q, 1)}, {5, congruence_subgroup(q, 5)}};
  auto r = unit_sum_element(5, cond, 3, 1, q.group, H);
  // weights 1/5 (trivial) and 1 (conductor 5): x = (3/5) + (-2/5) sigma
  EXPECT_EQ(r.element[0], make_rational(3, 5));
  EXPECT_EQ(r.element[1], make_rational(-2, 5));
  // det [[3,-2],[-2,3]] / 25 = 1/5, a 3-adic unit
  EXPECT_TRUE(r.verdict.integral);
  EXPECT_TRUE(r.verdict.unit);
}

TEST(UnitSum, MatchesMoebiusAssembly) {
  // c = 3 * ell with p = 3 | c, and assorted other moduli; oracle: sum_d g(d) e_{H_d}
  for (auto [c, p] : std::vector<std::pair<int64_t, int64_t>>{{15, 3}, {21, 3}, {33, 3}, {35, 5}, {35, 7}, {77, 7}, {65, 5}}) {
    const UnitQuotient q = unit_quotient(c, {-1});
    std::vector<int64_t> cond(q.group.size());
    for (size_t k = 0; k < cond.size(); ++k) cond[k] = character_of(q, k).conductor();
    std::map<int64_t, std::vector<size_t>> H;
    for (int64_t d : nt::divisors(c)) H[d] = congruence_subgroup(q, d);
    const auto r = unit_sum_element(c, [&](size_t k) { return cond[k]; }, p, 1, q.group, H);
    auto w = [&](int64_t t) {
      Rational x = make_rational(t, c);
      if (c % p == 0 && t % p != 0) x *= p;
      return x;
    };
    GroupRingElem expect(q.group);
    for (int64_t d : nt::divisors(c)) {
      Rational g = 0;
      for (int64_t t : nt::divisors(c))
        if (t % d == 0) g += w(t) * nt::mobius(t / d);
      GroupRingElem e(q.group);
      for (size_t h : H[d]) e.set(h, make_rational(1, static_cast<int64_t>(H[d].size())));
      expect = expect + e.scaled(g);
    }
    EXPECT_EQ(r.element.to_string(), expect.to_string()) << c;
    EXPECT_TRUE(r.verdict.integral) << c;
    EXPECT_TRUE(r.verdict.unit) << c;
  }
}

TEST(UnitSum, HypothesisViolated) {
  const UnitQuotient q = unit_quotient(7, {-1});
  auto cond = [&](size_t k) { return character_of(q, k).conductor(); };
  // H_1 must be the whole group; the trivial subgroup breaks (i)
  std::map<int64_t, std::vector<size_t>> H{{1, {0}}, {7, {0}}};
  try {
    unit_sum_element(7, cond, 3, 1, q.group, H);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::HypothesisViolated);
  }
  EXPECT_THROW(unit_sum_element(12, cond, 3, 1, q.group, H), Error);
}
