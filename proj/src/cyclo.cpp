#include "thetalab/cyclo.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <sstream>

#include "thetalab/error.hpp"
#include "thetalab/ntheory.hpp"

namespace thetalab {
namespace {

struct LevelData {
  int64_t phi = 1;
  std::vector<Integer> poly;        // Phi_n, degree phi, monic
  std::vector<int64_t> support;     // indices i < phi with poly[i] != 0
};

// Polynomial division of `num` by monic `den` over Z (exact division assumed).
std::vector<Integer> exact_divide(std::vector<Integer> num, const std::vector<Integer>& den) {
  const int64_t dn = static_cast<int64_t>(den.size()) - 1;
  std::vector<Integer> quot(num.size() - dn, 0);
  for (int64_t d = static_cast<int64_t>(num.size()) - 1; d >= dn; --d) {
    const Integer c = num[d];
    quot[d - dn] = c;
    if (c != 0)
      for (int64_t i = 0; i <= dn; ++i) num[d - dn + i] -= c * den[i];
  }
  return quot;
}

std::shared_ptr<const LevelData> level_data(int64_t n) {
  static std::mutex mu;
  static std::map<int64_t, std::shared_ptr<const LevelData>> cache;
  {
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;
  }
  // z^n - 1 divided by Phi_d over proper divisors d of n.
  std::vector<Integer> poly(static_cast<size_t>(n) + 1, 0);
  poly[0] = -1;
  poly[n] = 1;
  for (int64_t d : nt::divisors(n)) {
    if (d == n) continue;
    poly = exact_divide(poly, cyclotomic_polynomial(d));
  }
  auto data = std::make_shared<LevelData>();
  data->phi = static_cast<int64_t>(poly.size()) - 1;
  for (int64_t i = 0; i < data->phi; ++i)
    if (poly[i] != 0) data->support.push_back(i);
  data->poly = std::move(poly);
  std::lock_guard<std::mutex> lock(mu);
  auto [it, inserted] = cache.emplace(n, std::move(data));
  return it->second;
}

// Reduces a raw coefficient vector (any length) modulo Phi_n in place and
// truncates it to phi(n) coordinates.
void reduce_raw(std::vector<Rational>& raw, const LevelData& ld) {
  const int64_t phi = ld.phi;
  for (int64_t d = static_cast<int64_t>(raw.size()) - 1; d >= phi; --d) {
    if (raw[d] == 0) continue;
    const Rational c = raw[d];
    raw[d] = 0;
    for (int64_t i : ld.support) raw[d - phi + i] -= c * ld.poly[i];
  }
  raw.resize(static_cast<size_t>(phi), Rational(0));
}

using Poly = std::vector<Rational>;

void trim(Poly& p) {
  while (!p.empty() && p.back() == 0) p.pop_back();
}

// Returns (quotient, remainder) of a by b over Q; b nonzero and trimmed.
std::pair<Poly, Poly> poly_divmod(Poly a, const Poly& b) {
  trim(a);
  if (a.size() < b.size()) return {Poly{}, a};
  Poly q(a.size() - b.size() + 1, Rational(0));
  const Rational lead = b.back();
  for (int64_t d = static_cast<int64_t>(a.size()) - 1; d >= static_cast<int64_t>(b.size()) - 1; --d) {
    if (a[d] == 0) continue;
    Rational c = a[d] / lead;
    q[d - b.size() + 1] = c;
    for (size_t i = 0; i < b.size(); ++i) a[d - b.size() + 1 + i] -= c * b[i];
  }
  trim(a);
  return {q, a};
}

Poly poly_mul(const Poly& a, const Poly& b) {
  if (a.empty() || b.empty()) return {};
  Poly r(a.size() + b.size() - 1, Rational(0));
  for (size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    for (size_t j = 0; j < b.size(); ++j)
      if (b[j] != 0) r[i + j] += a[i] * b[j];
  }
  return r;
}

Poly poly_sub(Poly a, const Poly& b) {
  if (a.size() < b.size()) a.resize(b.size(), Rational(0));
  for (size_t i = 0; i < b.size(); ++i) a[i] -= b[i];
  trim(a);
  return a;
}

}  // namespace

const std::vector<Integer>& cyclotomic_polynomial(int64_t n) {
  if (n < 1) throw Error(ErrorKind::InvalidArgument, "cyclotomic level must be positive");
  return level_data(n)->poly;
}

CycloElem::CycloElem(int64_t level) : level_(level) {
  if (level < 1) throw Error(ErrorKind::InvalidArgument, "level must be positive");
  coeffs_.assign(static_cast<size_t>(level_data(level)->phi), Rational(0));
}

CycloElem::CycloElem(int64_t level, std::vector<Rational> coeffs) : level_(level) {
  if (level < 1) throw Error(ErrorKind::InvalidArgument, "level must be positive");
  auto ld = level_data(level);
  if (static_cast<int64_t>(coeffs.size()) != ld->phi) reduce_raw(coeffs, *ld);
  coeffs_ = std::move(coeffs);
}

CycloElem CycloElem::from_rational(int64_t level, const Rational& q) {
  CycloElem r(level);
  r.coeffs_[0] = q;
  return r;
}

CycloElem CycloElem::zeta_power(int64_t level, int64_t e) {
  CycloElem r(level);
  r.add_zeta_power(e, Rational(1));
  return r;
}

void CycloElem::add_zeta_power(int64_t e, const Rational& q) {
  const int64_t n = level_;
  e = nt::mod(e, n);
  auto ld = level_data(n);
  auto& coeffs = coeffs_;
  if (e < ld->phi) {
    coeffs[e] += q;
    return;
  }
  // zeta^e for e >= phi: reduce the monomial on a scratch vector.
  std::vector<Rational> raw(static_cast<size_t>(e) + 1, Rational(0));
  raw[e] = q;
  reduce_raw(raw, *ld);
  for (int64_t i = 0; i < ld->phi; ++i)
    if (raw[i] != 0) coeffs[i] += raw[i];
}

bool CycloElem::is_zero() const {
  for (const auto& c : coeffs_)
    if (c != 0) return false;
  return true;
}

bool CycloElem::is_rational() const {
  for (size_t i = 1; i < coeffs_.size(); ++i)
    if (coeffs_[i] != 0) return false;
  return true;
}

int64_t common_level(const CycloElem& a, const CycloElem& b) {
  return std::lcm(a.level(), b.level());
}

CycloElem CycloElem::operator+(const CycloElem& o) const {
  CycloElem r = *this;
  r += o;
  return r;
}

CycloElem CycloElem::operator-(const CycloElem& o) const {
  CycloElem r = *this;
  r -= o;
  return r;
}

CycloElem CycloElem::operator-() const {
  CycloElem r = *this;
  for (auto& c : r.coeffs_) c = -c;
  return r;
}

CycloElem& CycloElem::operator+=(const CycloElem& o) {
  if (o.level_ != level_) throw Error(ErrorKind::LevelMismatch, "add at levels " + std::to_string(level_) + " and " + std::to_string(o.level_));
  for (size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += o.coeffs_[i];
  return *this;
}

CycloElem& CycloElem::operator-=(const CycloElem& o) {
  if (o.level_ != level_) throw Error(ErrorKind::LevelMismatch, "subtract at levels " + std::to_string(level_) + " and " + std::to_string(o.level_));
  for (size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= o.coeffs_[i];
  return *this;
}

CycloElem CycloElem::operator*(const CycloElem& o) const {
  if (o.level_ != level_) throw Error(ErrorKind::LevelMismatch, "multiply at levels " + std::to_string(level_) + " and " + std::to_string(o.level_));
  const size_t phi = coeffs_.size();
  std::vector<Rational> raw(2 * phi - 1, Rational(0));
  for (size_t i = 0; i < phi; ++i) {
    if (coeffs_[i] == 0) continue;
    for (size_t j = 0; j < phi; ++j)
      if (o.coeffs_[j] != 0) raw[i + j] += coeffs_[i] * o.coeffs_[j];
  }
  return CycloElem(level_, std::move(raw));
}

CycloElem CycloElem::operator*(const Rational& q) const {
  CycloElem r = *this;
  for (auto& c : r.coeffs_) c *= q;
  return r;
}

bool CycloElem::operator==(const CycloElem& o) const {
  if (level_ == o.level_) return coeffs_ == o.coeffs_;
  const int64_t m = std::lcm(level_, o.level_);
  return embed(m).coeffs_ == o.embed(m).coeffs_;
}

CycloElem CycloElem::inverse() const {
  if (is_zero()) throw Error(ErrorKind::DivisionByZero, "inverse of zero in Q(zeta_" + std::to_string(level_) + ")");
  auto ld = level_data(level_);
  Poly modulus(ld->poly.begin(), ld->poly.end());
  Poly a = coeffs_;
  trim(a);
  // Extended Euclid tracking only the cofactor of a: s*a = r (mod Phi).
  Poly r0 = modulus, r1 = a;
  Poly s0{}, s1{Rational(1)};
  while (!(r1.size() == 1)) {
    auto [q, rem] = poly_divmod(r0, r1);
    Poly s2 = poly_sub(s0, poly_mul(q, s1));
    r0 = std::move(r1);
    r1 = std::move(rem);
    s0 = std::move(s1);
    s1 = std::move(s2);
    if (r1.empty()) throw Error(ErrorKind::DivisionByZero, "element is a zero divisor");
  }
  const Rational inv_const = 1 / r1[0];
  for (auto& c : s1) c *= inv_const;
  return CycloElem(level_, std::move(s1));
}

CycloElem CycloElem::galois(int64_t t) const {
  if (std::gcd(nt::mod(t, level_), level_) != 1 && level_ > 1)
    throw Error(ErrorKind::NotCoprime, "galois exponent " + std::to_string(t) + " not a unit mod " + std::to_string(level_));
  std::vector<Rational> raw(static_cast<size_t>(level_), Rational(0));
  for (size_t j = 0; j < coeffs_.size(); ++j)
    if (coeffs_[j] != 0) raw[nt::mod(t * static_cast<int64_t>(j), level_)] += coeffs_[j];
  return CycloElem(level_, std::move(raw));
}

CycloElem CycloElem::embed(int64_t m) const {
  if (m % level_ != 0)
    throw Error(ErrorKind::NotDivisible, std::to_string(level_) + " does not divide " + std::to_string(m));
  if (m == level_) return *this;
  const int64_t step = m / level_;
  std::vector<Rational> raw(static_cast<size_t>(m), Rational(0));
  for (size_t j = 0; j < coeffs_.size(); ++j) raw[j * step] = coeffs_[j];
  return CycloElem(m, std::move(raw));
}

Rational CycloElem::norm() const {
  CycloElem prod = CycloElem::from_rational(level_, Rational(1));
  for (int64_t t : nt::units_mod(level_)) prod *= galois(level_ == 1 ? 1 : t);
  if (!prod.is_rational()) throw Error(ErrorKind::InvalidArgument, "norm not rational (internal error)");
  return prod.coeffs_[0];
}

void CycloElem::to_complex(long double& re, long double& im) const {
  re = 0;
  im = 0;
  const long double two_pi = 2 * std::numbers::pi_v<long double>;
  for (size_t j = 0; j < coeffs_.size(); ++j) {
    if (coeffs_[j] == 0) continue;
    const long double c = static_cast<long double>(coeffs_[j].get_d());
    const long double angle = two_pi * static_cast<long double>(j) / static_cast<long double>(level_);
    re += c * std::cos(angle);
    im += c * std::sin(angle);
  }
}

std::string CycloElem::to_string() const {
  std::ostringstream out;
  bool first = true;
  for (size_t j = 0; j < coeffs_.size(); ++j) {
    if (coeffs_[j] == 0) continue;
    if (!first) out << " + ";
    first = false;
    out << "(" << coeffs_[j].get_str() << ")";
    if (j > 0) out << "*z" << level_ << "^" << j;
  }
  if (first) out << "0";
  return out.str();
}

CycloAccumulator::CycloAccumulator(int64_t level)
    : level_(level), raw_(static_cast<size_t>(level), Rational(0)) {}

void CycloAccumulator::add(int64_t e, const Rational& q) { raw_[nt::mod(e, level_)] += q; }

void CycloAccumulator::add(const CycloElem& x, int64_t shift) {
  if (x.level() != level_) throw Error(ErrorKind::LevelMismatch, "accumulator level mismatch");
  for (size_t j = 0; j < x.coeffs().size(); ++j)
    if (x.coeffs()[j] != 0) raw_[nt::mod(static_cast<int64_t>(j) + shift, level_)] += x.coeffs()[j];
}

CycloElem CycloAccumulator::finish() const { return CycloElem(level_, raw_); }

}  // namespace thetalab
