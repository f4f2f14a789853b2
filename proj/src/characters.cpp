#include "thetalab/characters.hpp"

#include <map>
#include <mutex>
#include <numeric>
#include <sstream>

#include "thetalab/error.hpp"
#include "thetalab/ntheory.hpp"

namespace thetalab {

namespace {

int64_t primitive_root_prime_power(int64_t p, int64_t pk) {
  const int64_t phi = nt::euler_phi(pk);
  const auto qs = nt::prime_divisors(phi);
  for (int64_t g = 2; g < pk; ++g) {
    if (std::gcd(g, p) != 1) continue;
    bool ok = true;
    for (int64_t q : qs)
      if (nt::pow_mod(g, phi / q, pk) == 1) {
        ok = false;
        break;
      }
    if (ok) return g;
  }
  return 1;  // pk = 2
}

// x with x = a mod m1 and x = 1 mod m2, gcd(m1, m2) = 1
int64_t crt_one(int64_t a, int64_t m1, int64_t m2) {
  const int64_t k = nt::mul_mod(nt::mod(a - 1, m1), nt::inv_mod(nt::mod(m2, m1), m1), m1);
  return nt::mod(1 + m2 * k, m1 * m2);
}

std::shared_ptr<UnitGroup> build_group(int64_t c) {
  auto g = std::make_shared<UnitGroup>();
  g->modulus = c;
  for (auto [p, k] : nt::factor(c)) {
    int64_t pk = 1;
    for (int i = 0; i < k; ++i) pk *= p;
    const int64_t rest = c / pk;
    if (p == 2) {
      if (k >= 2) {
        g->generators.push_back(crt_one(pk - 1, pk, rest));
        g->orders.push_back(2);
        g->primes.push_back(2);
      }
      if (k >= 3) {
        g->generators.push_back(crt_one(5, pk, rest));
        g->orders.push_back(pk / 4);
        g->primes.push_back(2);
      }
    } else {
      g->generators.push_back(crt_one(primitive_root_prime_power(p, pk), pk, rest));
      g->orders.push_back(nt::euler_phi(pk));
      g->primes.push_back(p);
    }
  }
  g->dlog.assign(static_cast<size_t>(c), {});
  const size_t r = g->generators.size();
  std::vector<int64_t> x(r, 0);
  // odometer over all exponent tuples
  for (;;) {
    int64_t a = 1 % c;
    for (size_t i = 0; i < r; ++i) a = nt::mul_mod(a, nt::pow_mod(g->generators[i], x[i], c), c);
    g->dlog[static_cast<size_t>(a)] = x;
    size_t i = 0;
    while (i < r && ++x[i] == g->orders[i]) x[i++] = 0;
    if (i == r) break;
  }
  return g;
}

}  // namespace

std::shared_ptr<const UnitGroup> UnitGroup::get(int64_t c) {
  if (c < 1) throw Error(ErrorKind::InvalidArgument, "modulus must be positive");
  static std::mutex mu;
  static std::map<int64_t, std::shared_ptr<const UnitGroup>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(c);
  if (it != cache.end()) return it->second;
  auto g = build_group(c);
  cache[c] = g;
  return g;
}

int64_t UnitGroup::size() const {
  int64_t s = 1;
  for (int64_t n : orders) s *= n;
  return s;
}

DirichletChar::DirichletChar(int64_t c) : modulus_(c), order_(1), group_(UnitGroup::get(c)) {
  exponents_.assign(group_->generators.size(), 0);
}

DirichletChar::DirichletChar(int64_t c, int64_t order, std::vector<int64_t> exponents)
    : modulus_(c), order_(order), exponents_(std::move(exponents)), group_(UnitGroup::get(c)) {
  if (exponents_.size() != group_->generators.size())
    throw Error(ErrorKind::InvalidArgument, "exponent map does not match the generator system");
  for (size_t i = 0; i < exponents_.size(); ++i) {
    exponents_[i] = nt::mod(exponents_[i], order_);
    // chi(g)^ord(g) = 1
    if (nt::mod(exponents_[i] * group_->orders[i], order_) != 0)
      throw Error(ErrorKind::InvalidArgument, "exponent map is not a homomorphism");
  }
  // reduce to the exact order
  int64_t g = order_;
  for (int64_t e : exponents_) g = std::gcd(g, e);
  if (g > 1) {
    order_ /= g;
    for (auto& e : exponents_) e /= g;
  }
}

DirichletChar DirichletChar::from_generator_angles(int64_t c, const std::vector<Rational>& angles) {
  int64_t m = 1;
  for (const auto& t : angles) m = std::lcm(m, t.get_den().get_si());
  std::vector<int64_t> e;
  for (const auto& t : angles) {
    Rational s = t * m;
    e.push_back(nt::mod(s.get_num().get_si(), m));
  }
  return DirichletChar(c, m, e);
}

bool DirichletChar::is_even() const {
  if (modulus_ <= 2) return true;
  return *exponent_at(modulus_ - 1) == 0;
}

std::optional<int64_t> DirichletChar::exponent_at(int64_t a) const {
  a = nt::mod(a, modulus_);
  if (std::gcd(a, modulus_) != 1) return std::nullopt;
  const auto& x = group_->dlog[static_cast<size_t>(a)];
  int64_t s = 0;
  for (size_t i = 0; i < x.size(); ++i) s += exponents_[i] * x[i] % order_;
  return s % order_;
}

std::optional<Rational> DirichletChar::angle_at(int64_t a) const {
  auto e = exponent_at(a);
  if (!e) return std::nullopt;
  return make_rational(*e, order_);
}

CycloElem DirichletChar::value(int64_t a) const {
  auto e = exponent_at(a);
  if (!e) return CycloElem(order_);
  return CycloElem::zeta_power(order_, *e);
}

int64_t DirichletChar::conductor() const {
  int64_t cond = 1;
  std::map<int64_t, std::vector<size_t>> by_prime;
  for (size_t i = 0; i < exponents_.size(); ++i) by_prime[group_->primes[i]].push_back(i);
  for (auto& [p, idx] : by_prime) {
    if (p == 2) {
      // idx[0]: -1 (order 2); idx[1]: 5 (order 2^(k-2)) when present
      int64_t local_order_5 = 1;
      if (idx.size() == 2) local_order_5 = order_ / std::gcd(order_, exponents_[idx[1]]);
      const bool minus_nontrivial = exponents_[idx[0]] != 0;
      if (local_order_5 > 1) {
        cond *= 4 * local_order_5;
      } else if (minus_nontrivial) {
        cond *= 4;
      }
    } else {
      const size_t i = idx[0];
      const int64_t local_order = order_ / std::gcd(order_, exponents_[i]);
      if (local_order == 1) continue;
      int64_t pe = p;
      for (int64_t v = nt::valuation(local_order, p); v > 0; --v) pe *= p;
      cond *= pe;
    }
  }
  return cond;
}

DirichletChar DirichletChar::lift(int64_t new_modulus) const {
  const int64_t f = conductor();
  if (new_modulus % f != 0) throw Error(ErrorKind::ConductorNotDividing, "conductor does not divide new modulus");
  const DirichletChar prim = primitive();
  return from_function(new_modulus, [&](int64_t a) { return *prim.angle_at(a); });
}

DirichletChar DirichletChar::primitive() const {
  const int64_t f = conductor();
  if (f == modulus_) return *this;
  return from_function(f, [&](int64_t h) {
    // a = h mod f and a a unit modulo c
    int64_t a = nt::mod(h, f);
    while (std::gcd(a, modulus_) != 1) a += f;
    return *angle_at(a);
  });
}

DirichletChar DirichletChar::conj() const { return power(-1); }

DirichletChar DirichletChar::power(int64_t t) const {
  std::vector<int64_t> e = exponents_;
  for (auto& x : e) x = nt::mod(x * nt::mod(t, order_), order_);
  return DirichletChar(modulus_, order_, e);
}

DirichletChar DirichletChar::operator*(const DirichletChar& o) const {
  if (modulus_ != o.modulus_) throw Error(ErrorKind::LevelMismatch, "characters of different moduli");
  const int64_t m = std::lcm(order_, o.order_);
  std::vector<int64_t> e(exponents_.size());
  for (size_t i = 0; i < e.size(); ++i) e[i] = exponents_[i] * (m / order_) + o.exponents_[i] * (m / o.order_);
  return DirichletChar(modulus_, m, e);
}

bool DirichletChar::operator==(const DirichletChar& o) const {
  return modulus_ == o.modulus_ && order_ == o.order_ && exponents_ == o.exponents_;
}

std::string DirichletChar::to_string() const {
  std::ostringstream os;
  os << "chi(mod " << modulus_ << ", order " << order_ << ", [";
  for (size_t i = 0; i < exponents_.size(); ++i) os << (i ? "," : "") << exponents_[i];
  os << "])";
  return os.str();
}

std::vector<DirichletChar> enumerate_chars(int64_t c, bool even_only) {
  auto g = UnitGroup::get(c);
  const size_t r = g->generators.size();
  int64_t L = 1;
  for (int64_t n : g->orders) L = std::lcm(L, n);
  std::vector<DirichletChar> out;
  std::vector<int64_t> k(r, 0);
  for (;;) {
    std::vector<int64_t> e(r);
    for (size_t i = 0; i < r; ++i) e[i] = k[i] * (L / g->orders[i]);
    DirichletChar chi(c, L, e);
    if (!even_only || chi.is_even()) out.push_back(chi);
    size_t i = 0;
    while (i < r && ++k[i] == g->orders[i]) k[i++] = 0;
    if (i == r) break;
  }
  return out;
}

CycloElem gauss_sum(const DirichletChar& chi, int64_t m) {
  const DirichletChar prim = chi.primitive();
  const int64_t f = prim.modulus();
  if (m < 1 || m % f != 0) throw Error(ErrorKind::ConductorNotDividing, "conductor of chi does not divide m");
  const int64_t ord = prim.order();
  const int64_t level = std::lcm(m, ord);
  CycloAccumulator acc(level);
  for (int64_t a = 0; a < m; ++a) {
    if (std::gcd(a, m) != 1) continue;
    const int64_t e = *prim.exponent_at(a);
    acc.add(e * (level / ord) + a * (level / m), Rational(1));
  }
  return acc.finish();
}

CycloElem tau_star(const DirichletChar& chi, int64_t c) {
  if (!nt::is_squarefree(c)) throw Error(ErrorKind::NotSquarefree, "ambient conductor must be squarefree");
  const DirichletChar prim = chi.primitive();
  const int64_t f = prim.modulus();
  if (c % f != 0) throw Error(ErrorKind::ConductorNotDividing, "conductor of chi does not divide c");
  CycloElem out = gauss_sum(prim, f);
  const int64_t level = out.level();
  for (int64_t ell : nt::prime_divisors(c / f)) {
    // unramified characteristic -chi(l): sigma_l multiplies (Z/c')^x by l
    const int64_t e = *prim.exponent_at(ell);
    out = out * (CycloElem::zeta_power(level, e * (level / prim.order())) * Rational(-1));
  }
  return out;
}

}  // namespace thetalab
