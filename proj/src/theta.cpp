#include "thetalab/theta.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <numeric>
#include <set>
#include <sstream>

#include "thetalab/error.hpp"
#include "thetalab/ntheory.hpp"

namespace thetalab {

namespace {

std::string join(const std::vector<int64_t>& v) {
  std::ostringstream os;
  for (size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i];
  return os.str();
}

// elements of G whose order is a power of p
std::vector<size_t> sylow(const AbGroup& G, int64_t p) {
  std::vector<size_t> out;
  for (size_t g = 0; g < G.size(); ++g) {
    int64_t o = G.order(g);
    while (o % p == 0) o /= p;
    if (o == 1) out.push_back(g);
  }
  return out;
}

int64_t frobenius_rep(int64_t c, int64_t ell) {
  if (c % ell != 0) return nt::mod(ell, c);
  const int64_t m = c / ell;
  for (int64_t a = 1; a < c; ++a)
    if (nt::mod(a - ell, m) == 0 && nt::mod(a - 1, ell) == 0 && std::gcd(a, c) == 1) return a;
  return 1;
}

}  // namespace

// ----------------------------------------------------------------- fields

FieldSpec FieldSpec::make(int64_t c, std::vector<int64_t> h_generators, bool check_conductor) {
  if (!nt::is_squarefree(c)) throw Error(ErrorKind::NotSquarefree, "conductor " + std::to_string(c));
  FieldSpec F;
  F.conductor = c;
  F.h_generators = std::move(h_generators);
  F.quotient = unit_quotient(c, F.h_generators);
  if (c > 2 && F.quotient.of(-1) != 0) throw Error(ErrorKind::InvalidFieldSpec, "-1 is not in H; F is not real");
  for (int64_t q : check_conductor ? nt::prime_divisors(c) : std::vector<int64_t>{}) {
    const int64_t sub = c / q;
    bool inside = true;
    for (int64_t a : nt::units_mod(c))
      if (nt::mod(a - 1, sub) == 0 && F.quotient.of(a) != 0) {
        inside = false;
        break;
      }
    if (inside)
      throw Error(ErrorKind::InvalidFieldSpec,
                  "the fixed field already lies in Q(zeta_" + std::to_string(sub) + "); conductor is not " + std::to_string(c));
  }
  return F;
}

FieldSpec FieldSpec::cyclic_subfield(int64_t ell, int64_t d) {
  if (!nt::is_prime(ell)) throw Error(ErrorKind::InvalidFieldSpec, "ell must be prime");
  if (d < 1 || (ell - 1) % d != 0) throw Error(ErrorKind::InvalidFieldSpec, "degree must divide ell - 1");
  if (d == 1) return rationals();
  const auto U = UnitGroup::get(ell);
  return make(ell, {nt::pow_mod(U->generators.at(0), d, ell)});
}

std::string FieldSpec::to_string() const {
  std::ostringstream os;
  os << "fixed field of <" << join(h_generators) << "> in Q(zeta_" << conductor << "), G = " << group().to_string();
  return os.str();
}

std::string ThetaElement::to_string() const {
  return "Theta(" + curve_label + ", c=" + std::to_string(c) + ") = " + carrier.to_string();
}

std::vector<DirichletChar> field_characters(const FieldSpec& F) {
  std::vector<DirichletChar> out;
  for (const auto& chi : enumerate_chars(F.conductor, true)) {
    bool trivial_on_h = true;
    for (int64_t h : F.h_generators)
      if (*chi.exponent_at(h) != 0) trivial_on_h = false;
    if (trivial_on_h) out.push_back(chi);
  }
  return out;
}

// ------------------------------------------------------------------ theta

std::shared_ptr<const ModularSymbolFunctional> curve_functional(const CurveQ& curve) {
  static std::mutex mu;
  static std::map<std::string, std::shared_ptr<const ModularSymbolFunctional>> cache;
  const CurveQ e = minimal_model(curve);
  const std::string key = e.ainvs_string();
  {
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
  }
  auto space = ManinSymbolSpace::get(conductor(e));
  auto f = std::make_shared<const ModularSymbolFunctional>(normalize_functional(eigen_functional(space, e), e));
  std::lock_guard<std::mutex> lock(mu);
  cache.emplace(key, f);
  return f;
}

ThetaElement theta_element(const ModularSymbolFunctional& f, int64_t c, const std::string& curve_label) {
  if (!nt::is_squarefree(c)) throw Error(ErrorKind::NotSquarefree, "c = " + std::to_string(c));
  if (std::gcd(c, f.level) != 1) throw Error(ErrorKind::NotCoprimeToLevel, "c = " + std::to_string(c));
  ThetaElement t;
  t.curve_label = curve_label;
  t.level = f.level;
  t.c = c;
  t.quotient = unit_quotient(c, {-1});
  t.manin_constant_assumed = f.manin_constant_assumed;
  t.anchor = f.anchor;
  std::vector<Rational> coeffs(t.quotient.group.size());
  for (int64_t a : nt::units_mod(c)) coeffs[t.quotient.of(a)] += regularized_symbol(f, a, c) / 2;
  t.carrier = GroupRingElem(t.quotient.group, coeffs);
  return t;
}

ThetaElement restrict_to_field(const ThetaElement& theta, const FieldSpec& F) {
  if (theta.c != F.conductor)
    throw Error(ErrorKind::ConductorMismatch,
                "theta at level " + std::to_string(theta.c) + ", field of conductor " + std::to_string(F.conductor));
  GroupHom q{theta.quotient.group, F.group(), std::vector<size_t>(theta.quotient.group.size(), F.group().size())};
  for (int64_t a : nt::units_mod(theta.c)) {
    const size_t s = theta.quotient.of(a), d = F.quotient.of(a);
    if (q.images[s] != F.group().size() && q.images[s] != d)
      throw Error(ErrorKind::ConductorMismatch, "F is not a subfield of the carrier field");
    q.images[s] = d;
  }
  ThetaElement out = theta;
  out.quotient = F.quotient;
  out.carrier = project_quotient(theta.carrier, q);
  return out;
}

CycloElem character_component(const ThetaElement& theta, const DirichletChar& chi) {
  const int64_t m = chi.modulus();
  if (theta.c % m != 0)
    throw Error(ErrorKind::CharacterDoesNotFactor, "modulus " + std::to_string(m) + " does not divide " + std::to_string(theta.c));
  const size_t n = theta.quotient.group.size();
  std::vector<int64_t> value(n, -1);
  for (int64_t a : nt::units_mod(theta.c)) {
    const int64_t e = *chi.exponent_at(nt::mod(a, m));
    int64_t& slot = value[theta.quotient.of(a)];
    if (slot >= 0 && slot != e) throw Error(ErrorKind::CharacterDoesNotFactor, chi.to_string() + " is not trivial on H");
    slot = e;
  }
  CycloAccumulator acc(chi.order());
  for (size_t g = 0; g < n; ++g)
    if (theta.carrier[g] != 0) acc.add(value[g], theta.carrier[g]);
  return acc.finish();
}

ApproxValue interpolation_value(const LSeriesData& data, const Real& omega_plus, const DirichletChar& chi, int64_t c,
                                const Real& tol) {
  if (c % chi.modulus() != 0) throw Error(ErrorKind::InvalidArgument, "chi must be defined modulo a divisor of c");
  const DirichletChar lifted = chi.lift(c);
  const ApproxValue L = twisted_lvalue(data, lifted.conj(), nt::prime_divisors(c), tol);
  long double tre = 0, tim = 0;
  gauss_sum(lifted, c).to_complex(tre, tim);
  const Complex tau{Real(tre), Real(tim)};
  const Real scale = Real(c) / Real(lifted.conductor()) / (2 * omega_plus);
  ApproxValue out;
  out.value = L.value * tau * scale;
  out.error_bound = L.error_bound * tau.abs() * scale + Real("1e-15");
  return out;
}

DistributionResult distribution_check(const ModularSymbolFunctional& f, const CurveQ& curve, int64_t c, int64_t p) {
  if (!nt::is_prime(p)) throw Error(ErrorKind::InvalidArgument, "p must be prime");
  if (c % p == 0) throw Error(ErrorKind::InvalidArgument, "p divides c");
  if (std::gcd(p * c, f.level) != 1) throw Error(ErrorKind::NotCoprimeToLevel, "pc must be prime to N");
  const ThetaElement big = theta_element(f, p * c), small = theta_element(f, c);
  GroupHom q{big.quotient.group, small.quotient.group, std::vector<size_t>(big.quotient.group.size())};
  for (int64_t a : nt::units_mod(p * c)) q.images[big.quotient.of(a)] = small.quotient.of(a);
  DistributionResult r;
  r.lhs = project_quotient(big.carrier, q);
  const AbGroup& G = small.quotient.group;
  const size_t sp = small.quotient.of(p);
  const int64_t ap = ap_count(minimal_model(curve), p);
  const auto sigma = GroupRingElem::element(G, sp), sigma_inv = GroupRingElem::element(G, G.neg(sp));
  const auto factor = sigma.scaled(p) - GroupRingElem::one(G).scaled(ap) + sigma_inv;
  r.rhs = -(factor * small.carrier);
  r.difference = r.lhs - r.rhs;
  r.pass = r.difference.is_zero();
  return r;
}

// ------------------------------------------------------------- hypotheses

std::string to_string(Status s) {
  switch (s) {
    case Status::Verified: return "verified";
    case Status::Violated: return "violated";
    case Status::Inconclusive: return "inconclusive";
    case Status::NotApplicable: return "not applicable";
    case Status::Assumed: return "assumed";
  }
  return "?";
}

const Condition& HypothesesReport::get(const std::string& name) const {
  for (const auto& c : conditions)
    if (c.name == name) return c;
  throw Error(ErrorKind::InvalidArgument, "no condition " + name);
}

bool HypothesesReport::all_decidable_verified() const {
  return std::none_of(conditions.begin(), conditions.end(), [](const Condition& c) {
    return c.status == Status::Violated || c.status == Status::Inconclusive;
  });
}

int64_t residue_degree(const FieldSpec& F, const std::vector<size_t>& sub, int64_t ell) {
  const int64_t c = F.conductor;
  const AbGroup& G = F.group();
  std::vector<size_t> gens = sub;
  if (c % ell == 0)
    for (int64_t a : nt::units_mod(c))
      if (nt::mod(a - 1, c / ell) == 0) gens.push_back(F.quotient.of(a));
  const auto S = G.subgroup(gens);
  const std::set<size_t> in_s(S.begin(), S.end());
  const size_t frob = c == 1 ? 0 : F.quotient.of(frobenius_rep(c, ell));
  int64_t f = 1;
  size_t x = frob;
  while (!in_s.count(x)) {
    x = G.add(x, frob);
    ++f;
  }
  return f;
}

HypothesesReport hypotheses_report(const CurveQ& curve, const FieldSpec& F, int64_t p) {
  const CurveQ e = minimal_model(curve);
  const int64_t N = conductor(e);
  const int64_t c = F.conductor;
  const auto P = sylow(F.group(), p);
  HypothesesReport rep;
  rep.curve_label = curve.label;
  rep.field = F.to_string();
  rep.p = p;
  rep.prime_to_p_degree = static_cast<int64_t>(F.group().size() / P.size());
  auto add = [&](const std::string& name, Status s, const std::string& ev) { rep.conditions.push_back({name, s, ev}); };
  auto ap_of = [&](int64_t ell) { return N % ell == 0 ? tate_local(e, ell).ap : ap_count(e, ell); };
  auto points = [&](int64_t ell, int64_t f) { return count_points_extension(ell, ap_of(ell), f); };
  auto divisible = [&](const Integer& n) { return mpz_divisible_ui_p(n.get_mpz_t(), static_cast<unsigned long>(p)) != 0; };

  // (a)
  {
    const int64_t tors = torsion_order(e);
    if (tors % p == 0) {
      add("a", Status::Violated, "|A(Q)_tors| = " + std::to_string(tors));
    } else if (rep.prime_to_p_degree == 1) {
      add("a", Status::Verified, "F' = Q, |A(Q)_tors| = " + std::to_string(tors));
    } else {
      bool done = false;
      for (int64_t q : nt::primes_up_to(1000)) {
        if (q == p || N % q == 0 || c % q == 0) continue;
        const int64_t f = residue_degree(F, P, q);
        const Integer n = points(q, f);
        if (!divisible(n)) {
          add("a", Status::Verified,
              "A(F')[p] embeds in A(F_" + std::to_string(q) + "^" + std::to_string(f) + "), of order " + n.get_str());
          done = true;
          break;
        }
      }
      if (!done) add("a", Status::Inconclusive, "no residue field count prime to p found");
    }
  }
  // (b)
  {
    std::ostringstream ev;
    Status s = Status::Verified;
    if (N % p == 0) {
      s = Status::Violated;
      ev << "p | N = " << N;
    } else {
      ev << "N = " << N << ";";
      for (int64_t ell : nt::prime_divisors(N)) {
        const auto t = tate_local(e, ell);
        ev << " c_" << ell << " = " << t.tamagawa;
        if (t.tamagawa % p == 0) s = Status::Violated;
      }
    }
    add("b", s, ev.str());
  }
  // (c) and (H3)
  {
    if (c % p != 0) {
      add("c", Status::NotApplicable, "p does not divide c");
      add("H3", Status::NotApplicable, "p is unramified in F");
    } else if (N % p == 0) {
      add("c", Status::Violated, "bad reduction at p");
      add("H3", Status::Violated, "bad reduction at p");
    } else {
      const int64_t f = residue_degree(F, P, p);
      const int64_t ap = ap_of(p);
      const Integer n = points(p, f);
      const bool ordinary = nt::mod(ap, p) != 0;
      const Status s = (!divisible(n) && ordinary) ? Status::Verified : Status::Violated;
      const std::string ev = "|A(F_" + std::to_string(p) + "^" + std::to_string(f) + ")| = " + n.get_str() +
                             ", a_p = " + std::to_string(ap);
      add("c", s, ev);
      add("H3", s, ev);
    }
  }
  // (d) and (H4)
  {
    Status sd = Status::Verified, s4 = Status::Verified;
    std::ostringstream ev;
    if (c == 1) ev << "c = 1";
    for (int64_t ell : nt::prime_divisors(c)) {
      if (N % ell == 0) {
        sd = s4 = Status::Inconclusive;
        ev << " bad reduction at " << ell << ";";
        continue;
      }
      const int64_t f = residue_degree(F, P, ell);
      const Integer n = points(ell, f);
      ev << " |A(F_" << ell << "^" << f << ")| = " << n.get_str() << ";";
      if (divisible(n)) {
        sd = Status::Violated;
        if (ell != p) s4 = Status::Violated;
      }
    }
    add("d", sd, ev.str());
    add("H4", s4, ev.str());
  }
  add("e", Status::Assumed, "Manin constant taken to be 1 in the normalization");
  // (H1): Tamagawa numbers over F'
  {
    Status s = Status::Verified;
    std::ostringstream ev;
    if (N % p == 0) ev << "p | N;";
    for (int64_t ell : nt::prime_divisors(N)) {
      const auto t = tate_local(e, ell);
      const int64_t f = c % ell == 0 ? 1 : residue_degree(F, P, ell);
      ev << " " << ell << ": " << t.kodaira << " f=" << f;
      Status here = Status::Verified;
      if (t.kind == ReductionKind::SplitMultiplicative ||
          (t.kind == ReductionKind::NonsplitMultiplicative && f % 2 == 0)) {
        if (t.discriminant_valuation % p == 0) here = Status::Violated;
      } else if (t.kind == ReductionKind::Additive) {
        if (p == 3 && (t.kodaira == "IV" || t.kodaira == "IV*"))
          here = (rep.prime_to_p_degree == 1 && t.tamagawa % 3 != 0) ? Status::Verified
                 : (t.tamagawa % 3 == 0)                            ? Status::Violated
                                                                    : Status::Inconclusive;
      }
      if (c % ell == 0 && here == Status::Verified) here = Status::Inconclusive;
      if (here == Status::Violated || (here == Status::Inconclusive && s == Status::Verified)) s = here;
    }
    add("H1", s, ev.str());
  }
  add("H2", N % p == 0 ? Status::Violated : Status::Verified, "N = " + std::to_string(N));
  add("H5", std::gcd(N, c) == 1 ? Status::Verified : Status::Violated,
      "gcd(N, c) = " + std::to_string(std::gcd(N, c)));
  add("H6", Status::Assumed, "finiteness of Sha is assumed");
  return rep;
}

// -------------------------------------------------------------- rank zero

Rank0Verdict rank0_verdict(const CurveQ& curve, const FieldSpec& F, int64_t p, int k, bool sha_trivial) {
  if (p == 2) throw Error(ErrorKind::EvenPrime, "p must be odd");
  if (k < 1) throw Error(ErrorKind::InvalidArgument, "precision must be positive");
  const auto f = curve_functional(curve);
  Rank0Verdict v;
  v.theta = restrict_to_field(theta_element(*f, F.conductor, curve.label), F);
  v.precision = k;
  v.sha_trivial_asserted = sha_trivial;

  const LSeriesData data = an_coeffs(curve, 10);
  bool first = true;
  for (const auto& chi : field_characters(F)) {
    const ApproxValue L = twisted_lvalue(data, chi.conj(), {}, Real("1e-12"));
    const Real a = L.value.abs();
    if (first || a < v.min_lvalue) v.min_lvalue = a;
    first = false;
    if (a < std::max(10 * L.error_bound, Real("1e-8")))
      throw Error(ErrorKind::RankNotZero, "L(A, " + chi.conj().to_string() + ", 1) vanishes numerically");
  }

  v.unit = padic_integrality_and_unit(v.theta.carrier, p);
  const Rational aug = v.theta.carrier.augmentation();
  v.augmentation_valuation = aug == 0 ? kInfiniteValuation : padic_valuation(aug, p);
  if (v.unit.integral) {
    const auto red = v.theta.carrier.reduce(p, k);
    for (int n = 1; n <= 3 && aug_ideal_membership(red, n); ++n) v.aug_depth = n;
  }
  if (!sha_trivial)
    v.verdict = "membership data only";
  else
    v.verdict = v.unit.unit ? "BSD_p(iv) consistent" : "BSD_p(iv) inconsistent";
  return v;
}

}  // namespace thetalab
