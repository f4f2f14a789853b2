#include "thetalab/padic.hpp"

#include <algorithm>
#include <mutex>
#include <numeric>
#include <random>
#include <sstream>

#include "thetalab/error.hpp"
#include "thetalab/ntheory.hpp"

namespace thetalab {

namespace {

Integer ppow(int64_t p, int64_t e) {
  Integer r;
  mpz_ui_pow_ui(r.get_mpz_t(), static_cast<unsigned long>(p), static_cast<unsigned long>(std::max<int64_t>(e, 0)));
  return r;
}

Integer mod_int(const Integer& a, const Integer& m) {
  Integer r;
  mpz_mod(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t());
  return r;
}

Integer inv_int(const Integer& a, const Integer& m) {
  Integer r;
  if (mpz_invert(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t()) == 0)
    throw Error(ErrorKind::DivisionByZero, "not invertible modulo " + m.get_str());
  return r;
}

// Unit part of q modulo m (q has valuation v at p, removed first).
Integer unit_residue(const Rational& q, int64_t p, int64_t v, const Integer& m) {
  Integer num = q.get_num();
  Integer den = q.get_den();
  if (v > 0) num /= ppow(p, v);
  if (v < 0) den /= ppow(p, -v);
  return mod_int(num * inv_int(mod_int(den, m), m), m);
}

// ---- polynomials over F_p, low to high, trimmed

using Poly = std::vector<int64_t>;

void trim(Poly& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

Poly poly_mod(Poly a, const Poly& m, int64_t p) {
  trim(a);
  const int64_t lead_inv = nt::inv_mod(m.back(), p);
  while (a.size() >= m.size()) {
    const int64_t c = nt::mul_mod(a.back(), lead_inv, p);
    const size_t s = a.size() - m.size();
    for (size_t i = 0; i < m.size(); ++i) a[s + i] = nt::mod(a[s + i] - c * m[i], p);
    trim(a);
  }
  return a;
}

Poly poly_mulmod(const Poly& a, const Poly& b, const Poly& m, int64_t p) {
  if (a.empty() || b.empty()) return {};
  Poly r(a.size() + b.size() - 1, 0);
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < b.size(); ++j) r[i + j] = nt::mod(r[i + j] + a[i] * b[j], p);
  return poly_mod(r, m, p);
}

Poly poly_powmod(Poly a, int64_t e, const Poly& m, int64_t p) {
  Poly r{1};
  a = poly_mod(a, m, p);
  while (e > 0) {
    if (e & 1) r = poly_mulmod(r, a, m, p);
    a = poly_mulmod(a, a, m, p);
    e >>= 1;
  }
  return poly_mod(r, m, p);
}

Poly poly_gcd(Poly a, Poly b, int64_t p) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    Poly r = poly_mod(a, b, p);
    a = std::move(b);
    b = std::move(r);
  }
  return a;
}

// Rabin's test.
bool irreducible_mod_p(const Poly& P, int64_t p) {
  const int64_t f = static_cast<int64_t>(P.size()) - 1;
  if (f == 1) return true;
  auto x_pow_p_pow = [&](int64_t j) {
    Poly x{0, 1};
    for (int64_t i = 0; i < j; ++i) x = poly_powmod(x, p, P, p);
    return x;
  };
  Poly full = x_pow_p_pow(f);
  Poly diff = full;
  diff.resize(std::max<size_t>(diff.size(), 2), 0);
  diff[1] = nt::mod(diff[1] - 1, p);
  trim(diff);
  if (!diff.empty()) return false;
  for (int64_t q : nt::prime_divisors(f)) {
    Poly h = x_pow_p_pow(f / q);
    h.resize(std::max<size_t>(h.size(), 2), 0);
    h[1] = nt::mod(h[1] - 1, p);
    if (poly_gcd(P, h, p).size() != 1) return false;
  }
  return true;
}

// Extended Euclid in F_p[X]: inverse of a modulo m.
Poly poly_invmod(const Poly& a, const Poly& m, int64_t p) {
  Poly r0 = m, r1 = poly_mod(a, m, p);
  Poly s0{}, s1{1};
  while (!r1.empty()) {
    // quotient r0 / r1
    Poly q(r0.size() >= r1.size() ? r0.size() - r1.size() + 1 : 1, 0);
    Poly r = r0;
    const int64_t li = nt::inv_mod(r1.back(), p);
    while (r.size() >= r1.size() && !r.empty()) {
      const int64_t c = nt::mul_mod(r.back(), li, p);
      const size_t s = r.size() - r1.size();
      q[s] = c;
      for (size_t i = 0; i < r1.size(); ++i) r[s + i] = nt::mod(r[s + i] - c * r1[i], p);
      trim(r);
    }
    trim(q);
    // s2 = s0 - q s1
    Poly qs(q.size() + s1.size(), 0);
    for (size_t i = 0; i < q.size(); ++i)
      for (size_t j = 0; j < s1.size(); ++j) qs[i + j] = nt::mod(qs[i + j] + q[i] * s1[j], p);
    Poly s2(std::max(s0.size(), qs.size()), 0);
    for (size_t i = 0; i < s2.size(); ++i)
      s2[i] = nt::mod((i < s0.size() ? s0[i] : 0) - (i < qs.size() ? qs[i] : 0), p);
    trim(s2);
    r0 = std::move(r1);
    r1 = std::move(r);
    s0 = std::move(s1);
    s1 = std::move(s2);
  }
  if (r0.size() != 1) throw Error(ErrorKind::DivisionByZero, "not a unit in the residue field");
  const int64_t c = nt::inv_mod(r0[0], p);
  for (auto& v : s0) v = nt::mul_mod(v, c, p);
  return poly_mod(s0, m, p);
}

std::vector<Integer> to_integers(const Poly& a, size_t f) {
  std::vector<Integer> out(f, 0);
  for (size_t i = 0; i < a.size() && i < f; ++i) out[i] = a[i];
  return out;
}

Poly to_poly(const std::vector<Integer>& a, int64_t p) {
  Poly out(a.size());
  for (size_t i = 0; i < a.size(); ++i) out[i] = mod_int(a[i], Integer(p)).get_si();
  trim(out);
  return out;
}

int64_t floor_log(int64_t n, int64_t p) {
  int64_t k = 0;
  while (n >= p) {
    n /= p;
    ++k;
  }
  return k;
}

}  // namespace

// ------------------------------------------------------------- PadicNum

PadicNum::PadicNum(int64_t p, int64_t precision) : p_(p), prec_(precision), val_(precision), unit_(0) {}

PadicNum PadicNum::from_rational(int64_t p, const Rational& q, int64_t precision) {
  PadicNum r(p, precision);
  if (q == 0) return r;
  const int64_t v = padic_valuation(q, p);
  if (v >= precision) return r;
  r.val_ = v;
  r.unit_ = unit_residue(q, p, v, ppow(p, precision - v));
  return r;
}

void PadicNum::normalize() {
  if (val_ >= prec_ || unit_ == 0) {
    val_ = prec_;
    unit_ = 0;
    return;
  }
  unit_ = mod_int(unit_, ppow(p_, prec_ - val_));
  if (unit_ == 0) {
    val_ = prec_;
    return;
  }
  const int64_t v = padic_valuation(unit_, p_);
  if (v > 0) {
    unit_ /= ppow(p_, v);
    val_ += v;
  }
}

Rational PadicNum::lift() const {
  if (is_zero()) return 0;
  Rational r(unit_);
  if (val_ >= 0) r *= Rational(ppow(p_, val_));
  else r /= Rational(ppow(p_, -val_));
  r.canonicalize();
  return r;
}

Integer PadicNum::residue(int64_t k) const {
  if (k > prec_) throw Error(ErrorKind::PrecisionExhausted, "residue beyond known precision");
  if (is_zero()) return 0;
  if (val_ < 0) throw Error(ErrorKind::NotCoprime, "negative valuation");
  return mod_int(unit_ * ppow(p_, val_), ppow(p_, k));
}

PadicNum PadicNum::operator+(const PadicNum& o) const {
  PadicNum r(p_, std::min(prec_, o.prec_));
  const int64_t v = std::min(val_, o.val_);
  if (v >= r.prec_) return r;
  r.val_ = v;
  r.unit_ = unit_ * ppow(p_, val_ - v) + o.unit_ * ppow(p_, o.val_ - v);
  r.normalize();
  return r;
}

PadicNum PadicNum::operator-() const {
  PadicNum r = *this;
  r.unit_ = -r.unit_;
  r.normalize();
  return r;
}

PadicNum PadicNum::operator-(const PadicNum& o) const { return *this + (-o); }

PadicNum PadicNum::operator*(const PadicNum& o) const {
  PadicNum r(p_, std::min(prec_ + o.val_, o.prec_ + val_));
  r.val_ = val_ + o.val_;
  r.unit_ = unit_ * o.unit_;
  r.normalize();
  return r;
}

PadicNum PadicNum::operator/(const PadicNum& o) const {
  if (o.is_zero()) throw Error(ErrorKind::DivisionByZero, "p-adic zero at precision " + std::to_string(o.prec_));
  if (is_zero()) return PadicNum(p_, prec_ - o.val_);
  const int64_t rel = std::min(prec_ - val_, o.prec_ - o.val_);
  PadicNum r(p_, val_ - o.val_ + rel);
  r.val_ = val_ - o.val_;
  const Integer m = ppow(p_, rel);
  r.unit_ = mod_int(unit_ * inv_int(o.unit_, m), m);
  r.normalize();
  return r;
}

bool PadicNum::operator==(const PadicNum& o) const { return (*this - o).is_zero(); }

PadicNum PadicNum::reduce(int64_t precision) const {
  PadicNum r = *this;
  r.prec_ = std::min(prec_, precision);
  r.normalize();
  return r;
}

std::string PadicNum::to_string() const {
  std::ostringstream os;
  if (is_zero()) os << "0";
  else os << unit_.get_str() << "*" << p_ << "^" << val_;
  os << " + O(" << p_ << "^" << prec_ << ")";
  return os.str();
}

// ------------------------------------------------------------- UnramExt

std::shared_ptr<const UnramExt> UnramExt::make(int64_t p, int64_t f, int64_t max_precision) {
  if (!nt::is_prime(p)) throw Error(ErrorKind::InvalidArgument, std::to_string(p) + " is not prime");
  if (f < 1) throw Error(ErrorKind::InvalidArgument, "degree must be positive");
  static std::mutex mu;
  static std::map<std::tuple<int64_t, int64_t, int64_t>, std::shared_ptr<const UnramExt>> cache;
  const auto key = std::make_tuple(p, f, max_precision);
  {
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
  }
  std::shared_ptr<UnramExt> e(new UnramExt());
  e->p_ = p;
  e->f_ = f;
  e->max_prec_ = max_precision;
  e->work_prec_ = max_precision + 40;
  // first irreducible monic polynomial in digit order
  Integer bound = ppow(p, f);
  for (Integer idx = 0; idx < bound; ++idx) {
    Poly P(static_cast<size_t>(f) + 1, 0);
    Integer t = idx;
    for (int64_t i = 0; i < f; ++i) {
      P[static_cast<size_t>(i)] = mod_int(t, Integer(p)).get_si();
      t /= p;
    }
    P[static_cast<size_t>(f)] = 1;
    if (irreducible_mod_p(P, p)) {
      e->modulus_.assign(P.begin(), P.end());
      break;
    }
  }
  const Integer M = ppow(p, e->work_prec_);
  const size_t fs = static_cast<size_t>(f);
  // Frobenius image: Newton iteration from X^p.
  std::vector<Integer> x(fs, 0);
  if (f > 1) x[1] = 1;
  else x[0] = mod_int(-e->modulus_[0], M);
  std::vector<Integer> beta(fs, 0);
  beta[0] = 1;
  for (int64_t i = 0; i < p; ++i) beta = e->mul(beta, x, M);
  auto eval = [&](const std::vector<Integer>& coeffs, const std::vector<Integer>& at) {
    std::vector<Integer> acc(fs, 0);
    for (size_t k = coeffs.size(); k-- > 0;) {
      acc = e->mul(acc, at, M);
      acc[0] = mod_int(acc[0] + coeffs[k], M);
    }
    return acc;
  };
  std::vector<Integer> deriv;
  for (size_t k = 1; k < e->modulus_.size(); ++k) deriv.push_back(e->modulus_[k] * static_cast<long>(k));
  for (int iter = 0; iter < 64; ++iter) {
    const auto val = eval(e->modulus_, beta);
    if (std::all_of(val.begin(), val.end(), [](const Integer& v) { return v == 0; })) break;
    const auto step = e->mul(val, e->inverse(eval(deriv, beta), M), M);
    for (size_t i = 0; i < fs; ++i) beta[i] = mod_int(beta[i] - step[i], M);
  }
  e->frob_ = beta;
  std::vector<Integer> pw(fs, 0);
  pw[0] = 1;
  for (size_t i = 0; i < fs; ++i) {
    e->frob_powers_.push_back(pw);
    pw = e->mul(pw, beta, M);
  }
  std::lock_guard<std::mutex> lock(mu);
  cache[key] = e;
  return e;
}

std::string UnramExt::to_string() const {
  std::ostringstream os;
  os << "Q_" << p_ << "^" << f_ << " = Q_" << p_ << "[X]/(";
  bool first = true;
  for (size_t k = modulus_.size(); k-- > 0;) {
    if (modulus_[k] == 0) continue;
    if (!first) os << " + ";
    first = false;
    if (k == 0 || modulus_[k] != 1) os << modulus_[k].get_str();
    if (k > 0) os << (k == 0 || modulus_[k] != 1 ? "*" : "") << "X" << (k > 1 ? "^" + std::to_string(k) : "");
  }
  os << ")";
  return os.str();
}

std::vector<Integer> UnramExt::mul(const std::vector<Integer>& a, const std::vector<Integer>& b, const Integer& m) const {
  const size_t fs = static_cast<size_t>(f_);
  std::vector<Integer> r(2 * fs - 1, 0);
  for (size_t i = 0; i < fs; ++i) {
    if (a[i] == 0) continue;
    for (size_t j = 0; j < fs; ++j) r[i + j] += a[i] * b[j];
  }
  for (size_t k = r.size(); k-- > fs;) {
    const Integer c = r[k];
    if (c == 0) continue;
    for (size_t i = 0; i < fs; ++i) r[k - fs + i] -= c * modulus_[i];
    r[k] = 0;
  }
  r.resize(fs);
  for (auto& v : r) v = mod_int(v, m);
  return r;
}

std::vector<Integer> UnramExt::frobenius(const std::vector<Integer>& a, const Integer& m) const {
  const size_t fs = static_cast<size_t>(f_);
  std::vector<Integer> r(fs, 0);
  for (size_t i = 0; i < fs; ++i) {
    if (a[i] == 0) continue;
    for (size_t j = 0; j < fs; ++j) r[j] += a[i] * frob_powers_[i][j];
  }
  for (auto& v : r) v = mod_int(v, m);
  return r;
}

std::vector<Integer> UnramExt::inverse(const std::vector<Integer>& a, const Integer& m) const {
  const size_t fs = static_cast<size_t>(f_);
  Poly P(modulus_.size());
  for (size_t i = 0; i < modulus_.size(); ++i) P[i] = modulus_[i].get_si();
  std::vector<Integer> v = to_integers(poly_invmod(to_poly(a, p_), P, p_), fs);
  for (int iter = 0; iter < 128; ++iter) {
    auto av = mul(a, v, m);
    av[0] = mod_int(av[0] - 1, m);
    if (std::all_of(av.begin(), av.end(), [](const Integer& t) { return t == 0; })) return v;
    // v <- v (1 - (a v - 1))
    auto corr = mul(v, av, m);
    for (size_t i = 0; i < fs; ++i) v[i] = mod_int(v[i] - corr[i], m);
  }
  throw Error(ErrorKind::PrecisionExhausted, "inverse did not converge");
}

// --------------------------------------------------------- UnramExtElem

UnramExtElem::UnramExtElem(std::shared_ptr<const UnramExt> ext, int64_t precision)
    : ext_(std::move(ext)), prec_(precision), shift_(precision), coords_(static_cast<size_t>(ext_->degree()), 0) {}

UnramExtElem UnramExtElem::from_rational(std::shared_ptr<const UnramExt> ext, const Rational& q, int64_t precision) {
  UnramExtElem r(std::move(ext), precision);
  if (q == 0) return r;
  const int64_t p = r.ext_->prime();
  const int64_t v = padic_valuation(q, p);
  if (v >= precision) return r;
  r.shift_ = v;
  r.coords_[0] = unit_residue(q, p, v, ppow(p, precision - v));
  r.normalize();
  return r;
}

UnramExtElem UnramExtElem::from_coords(std::shared_ptr<const UnramExt> ext, std::vector<Integer> coords,
                                       int64_t precision) {
  UnramExtElem r(std::move(ext), precision);
  if (coords.size() != r.coords_.size()) throw Error(ErrorKind::InvalidArgument, "coordinate count");
  r.shift_ = 0;
  r.coords_ = std::move(coords);
  r.normalize();
  return r;
}

UnramExtElem UnramExtElem::generator(std::shared_ptr<const UnramExt> ext, int64_t precision) {
  if (ext->degree() == 1) return from_rational(ext, Rational(-ext->modulus()[0]), precision);
  std::vector<Integer> c(static_cast<size_t>(ext->degree()), 0);
  c[1] = 1;
  return from_coords(std::move(ext), std::move(c), precision);
}

void UnramExtElem::normalize() {
  const int64_t p = ext_->prime();
  if (shift_ >= prec_) {
    shift_ = prec_;
    for (auto& c : coords_) c = 0;
    return;
  }
  const Integer m = ppow(p, prec_ - shift_);
  bool all_zero = true;
  for (auto& c : coords_) {
    c = mod_int(c, m);
    if (c != 0) all_zero = false;
  }
  if (all_zero) {
    shift_ = prec_;
    return;
  }
  int64_t v = kInfiniteValuation;
  for (const auto& c : coords_)
    if (c != 0) v = std::min(v, padic_valuation(c, p));
  if (v > 0) {
    const Integer d = ppow(p, v);
    for (auto& c : coords_) c /= d;
    shift_ += v;
  }
}

PadicNum UnramExtElem::coordinate(size_t i) const {
  const int64_t p = ext_->prime();
  if (is_zero() || coords_[i] == 0) return PadicNum(p, prec_);
  Rational q(coords_[i]);
  if (shift_ >= 0) q *= Rational(ppow(p, shift_));
  else q /= Rational(ppow(p, -shift_));
  return PadicNum::from_rational(p, q, prec_);
}

bool UnramExtElem::in_base_field() const {
  for (size_t i = 1; i < coords_.size(); ++i)
    if (coords_[i] != 0) return false;
  return true;
}

UnramExtElem UnramExtElem::operator+(const UnramExtElem& o) const {
  UnramExtElem r(ext_, std::min(prec_, o.prec_));
  const int64_t s = std::min(shift_, o.shift_);
  if (s >= r.prec_) return r;
  const int64_t p = ext_->prime();
  const Integer ma = ppow(p, shift_ - s), mb = ppow(p, o.shift_ - s);
  r.shift_ = s;
  for (size_t i = 0; i < coords_.size(); ++i) r.coords_[i] = coords_[i] * ma + o.coords_[i] * mb;
  r.normalize();
  return r;
}

UnramExtElem UnramExtElem::operator-() const {
  UnramExtElem r = *this;
  for (auto& c : r.coords_) c = -c;
  r.normalize();
  return r;
}

UnramExtElem UnramExtElem::operator-(const UnramExtElem& o) const { return *this + (-o); }

UnramExtElem UnramExtElem::operator*(const UnramExtElem& o) const {
  UnramExtElem r(ext_, std::min(prec_ + o.shift_, o.prec_ + shift_));
  const int64_t s = shift_ + o.shift_;
  if (s >= r.prec_) return r;
  r.shift_ = s;
  r.coords_ = ext_->mul(coords_, o.coords_, ppow(ext_->prime(), r.prec_ - s));
  r.normalize();
  return r;
}

UnramExtElem UnramExtElem::operator*(const Rational& q) const {
  const int64_t p = ext_->prime();
  if (q == 0) return UnramExtElem(ext_, ext_->working_precision());
  const int64_t v = padic_valuation(q, p);
  UnramExtElem r = *this;
  r.prec_ += v;
  if (is_zero()) {
    r.shift_ = r.prec_;
    return r;
  }
  r.shift_ += v;
  const Integer u = unit_residue(q, p, v, ppow(p, r.prec_ - r.shift_));
  for (auto& c : r.coords_) c *= u;
  r.normalize();
  return r;
}

UnramExtElem UnramExtElem::inverse() const {
  if (is_zero()) throw Error(ErrorKind::DivisionByZero, "zero at precision " + std::to_string(prec_));
  const int64_t rel = prec_ - shift_;
  UnramExtElem r(ext_, -shift_ + rel);
  r.shift_ = -shift_;
  r.coords_ = ext_->inverse(coords_, ppow(ext_->prime(), rel));
  r.normalize();
  return r;
}

UnramExtElem UnramExtElem::pow(int64_t e) const {
  if (e < 0) return inverse().pow(-e);
  UnramExtElem r = from_rational(ext_, 1, ext_->working_precision());
  UnramExtElem b = *this;
  while (e > 0) {
    if (e & 1) r = r * b;
    e >>= 1;
    if (e > 0) b = b * b;
  }
  return r;
}

UnramExtElem UnramExtElem::frobenius(int64_t j) const {
  const int64_t f = ext_->degree();
  j = ((j % f) + f) % f;
  if (is_zero() || j == 0) return *this;
  if (prec_ - shift_ > ext_->working_precision())
    throw Error(ErrorKind::PrecisionExhausted, "relative precision exceeds the Frobenius table");
  UnramExtElem r = *this;
  const Integer m = ppow(ext_->prime(), prec_ - shift_);
  for (int64_t i = 0; i < j; ++i) r.coords_ = ext_->frobenius(r.coords_, m);
  r.normalize();
  return r;
}

UnramExtElem UnramExtElem::reduce(int64_t precision) const {
  UnramExtElem r = *this;
  r.prec_ = std::min(prec_, precision);
  r.normalize();
  return r;
}

bool UnramExtElem::operator==(const UnramExtElem& o) const { return (*this - o).is_zero(); }

bool UnramExtElem::identical(const UnramExtElem& o) const {
  return prec_ == o.prec_ && shift_ == o.shift_ && coords_ == o.coords_;
}

std::string UnramExtElem::to_string() const {
  std::ostringstream os;
  const int64_t p = ext_->prime();
  if (is_zero()) {
    os << "O(" << p << "^" << prec_ << ")";
    return os.str();
  }
  os << "[";
  for (size_t i = 0; i < coords_.size(); ++i) os << (i ? ", " : "") << coords_[i].get_str();
  os << "]*" << p << "^" << shift_ << " + O(" << p << "^" << prec_ << ")";
  return os.str();
}

// ------------------------------------------------------- roots of unity

UnramExtElem root_of_unity_padic(std::shared_ptr<const UnramExt> ext, int64_t m, int64_t precision) {
  const int64_t p = ext->prime();
  if (m % p == 0) throw Error(ErrorKind::RamifiedCase, std::to_string(p) + " divides " + std::to_string(m));
  const Integer q1 = ppow(p, ext->degree()) - 1;
  if (mod_int(q1, Integer(m)) != 0)
    throw Error(ErrorKind::InvalidArgument, "no primitive " + std::to_string(m) + "-th root of unity in " + ext->to_string());
  if (m == 1) return UnramExtElem::from_rational(ext, 1, precision);
  const size_t fs = static_cast<size_t>(ext->degree());
  const Integer P(p);
  auto pow_mod_p = [&](std::vector<Integer> a, Integer e) {
    std::vector<Integer> r(fs, 0);
    r[0] = 1;
    while (e > 0) {
      if (mpz_odd_p(e.get_mpz_t())) r = ext->mul(r, a, P);
      a = ext->mul(a, a, P);
      e /= 2;
    }
    return r;
  };
  auto is_one = [](const std::vector<Integer>& a) {
    if (a[0] != 1) return false;
    for (size_t i = 1; i < a.size(); ++i)
      if (a[i] != 0) return false;
    return true;
  };
  const Integer cof = q1 / m;
  std::vector<Integer> z;
  for (Integer idx = 1; idx <= q1 && z.empty(); ++idx) {
    std::vector<Integer> y(fs, 0);
    Integer t = idx;
    for (size_t i = 0; i < fs; ++i) {
      y[i] = mod_int(t, P);
      t /= p;
    }
    auto cand = pow_mod_p(y, cof);
    bool exact = true;
    for (int64_t q : nt::prime_divisors(m))
      if (is_one(pow_mod_p(cand, Integer(m / q)))) exact = false;
    if (exact) z = cand;
  }
  // Hensel: z <- z - (z^m - 1) / (m z^(m-1))
  const int64_t W = std::max(precision, ext->working_precision());
  UnramExtElem r = UnramExtElem::from_coords(ext, z, W);
  const UnramExtElem one = UnramExtElem::from_rational(ext, 1, W);
  for (int iter = 0; iter < 64; ++iter) {
    const UnramExtElem zm1 = r.pow(m - 1);
    const UnramExtElem err = zm1 * r - one;
    if (err.is_zero()) break;
    r = r - err * (zm1 * Rational(m)).inverse();
    r = r.reduce(W);
  }
  return r.reduce(precision);
}

CyclotomicEmbedding::CyclotomicEmbedding(std::shared_ptr<const UnramExt> ext, int64_t m, int64_t choice)
    : ext_(std::move(ext)), m_(m), choice_(choice), u_(1) {
  const int64_t p = ext_->prime();
  if (m < 1) throw Error(ErrorKind::InvalidArgument, "level must be positive");
  if (m % p == 0) throw Error(ErrorKind::RamifiedCase, std::to_string(p) + " divides " + std::to_string(m));
  const int64_t ord = m == 1 ? 1 : nt::mult_order(p % m, m);
  if (ext_->degree() % ord != 0)
    throw Error(ErrorKind::InvalidArgument, "ord_" + std::to_string(m) + "(" + std::to_string(p) + ") = " +
                                                std::to_string(ord) + " does not divide " + std::to_string(ext_->degree()));
  if (choice < 0 || choice >= choices(p, m)) throw Error(ErrorKind::InvalidArgument, "embedding choice out of range");
  if (m > 1) {
    std::vector<int64_t> reps;
    std::vector<bool> seen(static_cast<size_t>(m), false);
    for (int64_t u : nt::units_mod(m)) {
      if (seen[static_cast<size_t>(u)]) continue;
      reps.push_back(u);
      int64_t v = u;
      do {
        seen[static_cast<size_t>(v)] = true;
        v = nt::mul_mod(v, p, m);
      } while (v != u);
    }
    u_ = reps[static_cast<size_t>(choice)];
  }
  const int64_t W = ext_->working_precision();
  zeta_ = root_of_unity_padic(ext_, m, W).pow(u_).reduce(W);
  UnramExtElem pw = UnramExtElem::from_rational(ext_, 1, W);
  for (int64_t k = 0; k < m; ++k) {
    powers_.push_back(pw);
    pw = (pw * zeta_).reduce(W);
  }
}

int64_t CyclotomicEmbedding::choices(int64_t p, int64_t m) {
  if (m <= 2) return 1;
  return nt::euler_phi(m) / nt::mult_order(p % m, m);
}

UnramExtElem CyclotomicEmbedding::operator()(const CycloElem& x, int64_t precision) const {
  if (m_ % x.level() != 0)
    throw Error(ErrorKind::LevelMismatch, "level " + std::to_string(x.level()) + " does not divide " + std::to_string(m_));
  const int64_t step = m_ / x.level();
  UnramExtElem r(ext_, precision);
  for (size_t j = 0; j < x.coeffs().size(); ++j) {
    const Rational& q = x.coeffs()[j];
    if (q == 0) continue;
    r += powers_[static_cast<size_t>((static_cast<int64_t>(j) * step) % m_)] * q;
  }
  return r.reduce(precision);
}

std::string CyclotomicEmbedding::to_string() const {
  return "zeta_" + std::to_string(m_) + " -> w^" + std::to_string(u_) + " in " + ext_->to_string() + " (choice " +
         std::to_string(choice_) + " of " + std::to_string(choices(ext_->prime(), m_)) + ")";
}

UnramExtElem embed_cyclotomic(const CycloElem& x, std::shared_ptr<const UnramExt> ext, int64_t precision,
                              int64_t choice) {
  return CyclotomicEmbedding(std::move(ext), x.level(), choice)(x, precision);
}

// ------------------------------------------------------------ formal group

namespace {

using Series = std::vector<Integer>;  // truncated at a fixed length

Series series_mul(const Series& a, const Series& b) {
  Series r(a.size(), 0);
  for (size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    for (size_t j = 0; i + j < r.size(); ++j) r[i + j] += a[i] * b[j];
  }
  return r;
}

// w(t) = t^3 + a1 t w + a2 t^2 w + a3 w^2 + a4 t w^2 + a6 w^3, coefficients of t^0..t^D.
Series w_series(const CurveQ& e, int64_t D) {
  const size_t n = static_cast<size_t>(D) + 1;
  Series w(n, 0);
  for (int64_t iter = 0; iter <= D; ++iter) {
    const Series w2 = series_mul(w, w);
    const Series w3 = series_mul(w2, w);
    Series next(n, 0);
    if (n > 3) next[3] = 1;
    for (size_t k = 0; k < n; ++k) {
      if (k >= 1) next[k] += e.a1() * w[k - 1] + e.a4() * w2[k - 1];
      if (k >= 2) next[k] += e.a2() * w[k - 2];
      next[k] += e.a3() * w2[k] + e.a6() * w3[k];
    }
    if (next == w) break;
    w = std::move(next);
  }
  return w;
}

using Bi = std::vector<std::vector<Integer>>;  // c[i][j], i + j <= T

Bi bi_zero(int64_t T) {
  Bi r(static_cast<size_t>(T) + 1);
  for (size_t i = 0; i <= static_cast<size_t>(T); ++i) r[i].assign(static_cast<size_t>(T) + 1 - i, 0);
  return r;
}

Bi bi_add(const Bi& a, const Bi& b, const Integer& cb = 1) {
  Bi r = a;
  for (size_t i = 0; i < r.size(); ++i)
    for (size_t j = 0; j < r[i].size(); ++j) r[i][j] += cb * b[i][j];
  return r;
}

Bi bi_scale(const Bi& a, const Integer& c) {
  Bi r = a;
  for (auto& row : r)
    for (auto& v : row) v *= c;
  return r;
}

Bi bi_mul(const Bi& a, const Bi& b) {
  const size_t T = a.size() - 1;
  Bi r = bi_zero(static_cast<int64_t>(T));
  for (size_t i = 0; i <= T; ++i)
    for (size_t j = 0; i + j <= T; ++j) {
      if (a[i][j] == 0) continue;
      for (size_t k = 0; i + j + k <= T; ++k)
        for (size_t l = 0; i + j + k + l <= T; ++l) r[i + k][j + l] += a[i][j] * b[k][l];
    }
  return r;
}

// Inverse of a series with constant term +1 or -1.
Bi bi_inverse(const Bi& s) {
  const size_t T = s.size() - 1;
  const Integer e = s[0][0];
  if (e != 1 && e != -1) throw Error(ErrorKind::InvalidArgument, "series constant term must be a unit");
  Bi inv = bi_zero(static_cast<int64_t>(T));
  inv[0][0] = e;
  for (size_t d = 1; d <= T; ++d)
    for (size_t i = 0; i <= d; ++i) {
      const size_t j = d - i;
      Integer acc = 0;
      for (size_t k = 0; k <= i; ++k)
        for (size_t l = 0; l <= j; ++l) {
          if (k == 0 && l == 0) continue;
          acc += s[k][l] * inv[i - k][j - l];
        }
      inv[i][j] = -e * acc;
    }
  return inv;
}

}  // namespace

FormalLogSeries formal_group_log(const CurveQ& curve, int64_t truncation) {
  if (truncation < 1) throw Error(ErrorKind::InvalidArgument, "truncation must be positive");
  const int64_t T = truncation;
  const Series w = w_series(curve, T + 2);
  // W = w / t^3 and u = 1 / W, to degree T - 1
  const size_t n = static_cast<size_t>(T);
  std::vector<Rational> W(n, 0), u(n, 0);
  for (size_t k = 0; k < n; ++k) W[k] = Rational(w[k + 3]);
  u[0] = 1;
  for (size_t k = 1; k < n; ++k) {
    Rational acc = 0;
    for (size_t i = 1; i <= k; ++i) acc += W[i] * u[k - i];
    u[k] = -acc;
  }
  // omega / dt = (-2u + t u') / (-2u + a1 t u + a3 t^3)
  std::vector<Rational> num(n, 0), den(n, 0);
  for (size_t k = 0; k < n; ++k) {
    num[k] = -2 * u[k] + Rational(static_cast<long>(k)) * u[k];
    den[k] = -2 * u[k];
    if (k >= 1) den[k] += Rational(curve.a1()) * u[k - 1];
  }
  if (n > 3) den[3] += Rational(curve.a3());
  std::vector<Rational> omega(n, 0);
  for (size_t k = 0; k < n; ++k) {
    Rational acc = num[k];
    for (size_t i = 1; i <= k; ++i) acc -= den[i] * omega[k - i];
    omega[k] = acc / den[0];
  }
  FormalLogSeries s{curve, T, std::vector<Rational>(n + 1, 0)};
  for (size_t k = 1; k <= n; ++k) {
    s.coeffs[k] = omega[k - 1] / Rational(static_cast<long>(k));
    s.coeffs[k].canonicalize();
  }
  return s;
}

UnramExtElem FormalLogSeries::evaluate(const UnramExtElem& t) const {
  const int64_t p = t.ext()->prime();
  if (t.is_zero()) return t;
  const int64_t v = t.valuation();
  if (v < 1) throw Error(ErrorKind::InvalidArgument, "formal parameter must have positive valuation");
  const int64_t target = t.precision();
  int64_t N = 1;
  while ((N + 1) * v - floor_log(N + 1, p) < target) ++N;
  if (N > truncation)
    throw Error(ErrorKind::PrecisionExhausted,
                "series truncated at " + std::to_string(truncation) + ", need " + std::to_string(N));
  UnramExtElem sum(t.ext(), t.ext()->working_precision());
  UnramExtElem tp = t;
  for (int64_t k = 1; k <= N; ++k) {
    const Rational& c = coeffs[static_cast<size_t>(k)];
    if (c != 0) sum += tp * c;
    if (k < N) tp = tp * t;
  }
  return sum.reduce(target);
}

FormalGroupLaw formal_group_law(const CurveQ& curve, int64_t truncation) {
  const int64_t T = truncation;
  const Series w = w_series(curve, T + 1);
  Bi t1 = bi_zero(T), t2 = bi_zero(T), W1 = bi_zero(T), lambda = bi_zero(T), one = bi_zero(T);
  one[0][0] = 1;
  if (T >= 1) {
    t1[1][0] = 1;
    t2[0][1] = 1;
  }
  for (size_t i = 0; i <= static_cast<size_t>(T); ++i) W1[i][0] = w[i];
  // (w(t2) - w(t1)) / (t2 - t1) = sum_n A_n h_{n-1}(t1, t2)
  for (size_t i = 0; i <= static_cast<size_t>(T); ++i)
    for (size_t j = 0; i + j <= static_cast<size_t>(T); ++j)
      if (i + j + 1 < w.size()) lambda[i][j] = w[i + j + 1];
  const Bi nu = bi_add(W1, bi_mul(lambda, t1), -1);
  const Bi l2 = bi_mul(lambda, lambda);
  const Bi l3 = bi_mul(l2, lambda);
  const Bi aden = bi_add(bi_add(bi_add(one, lambda, curve.a2()), l2, curve.a4()), l3, curve.a6());
  // the z^2 coefficient after substituting w = lambda z + nu; z1 + z2 + z3 = -numer / aden
  Bi numer = bi_scale(lambda, curve.a1());
  numer = bi_add(numer, l2, curve.a3());
  numer = bi_add(numer, nu, curve.a2());
  numer = bi_add(numer, bi_mul(lambda, nu), 2 * curve.a4());
  numer = bi_add(numer, bi_mul(l2, nu), 3 * curve.a6());
  Bi t3 = bi_scale(bi_mul(numer, bi_inverse(aden)), -1);
  t3 = bi_add(bi_add(t3, t1, -1), t2, -1);
  const Bi w3 = bi_add(bi_mul(lambda, t3), nu);
  const Bi den = bi_add(bi_add(bi_scale(t3, curve.a1()), w3, curve.a3()), one, -1);
  return FormalGroupLaw{curve, T, bi_mul(t3, bi_inverse(den))};
}

UnramExtElem FormalGroupLaw::evaluate(const UnramExtElem& t1, const UnramExtElem& t2) const {
  const auto& ext = t1.ext();
  const int64_t v1 = t1.valuation(), v2 = t2.valuation();
  if (v1 < 1 || v2 < 1) throw Error(ErrorKind::InvalidArgument, "formal parameters must have positive valuation");
  const int64_t W = ext->working_precision();
  const size_t T = static_cast<size_t>(truncation);
  std::vector<UnramExtElem> p1{UnramExtElem::from_rational(ext, 1, W)}, p2{UnramExtElem::from_rational(ext, 1, W)};
  for (size_t k = 1; k <= T; ++k) {
    p1.push_back(p1.back() * t1);
    p2.push_back(p2.back() * t2);
  }
  UnramExtElem sum(ext, W);
  for (size_t i = 0; i <= T; ++i)
    for (size_t j = 0; i + j <= T; ++j)
      if (coeffs[i][j] != 0) sum += p1[i] * p2[j] * Rational(coeffs[i][j]);
  const int64_t cap = (truncation + 1) * std::min(v1, v2);
  return sum.reduce(std::min({cap, t1.precision(), t2.precision()}));
}

namespace {

std::mutex formal_mu;

FormalLogSeries cached_log(const CurveQ& curve, int64_t needed) {
  static std::map<std::string, FormalLogSeries> cache;
  std::lock_guard<std::mutex> lock(formal_mu);
  const std::string key = curve.ainvs_string();
  auto it = cache.find(key);
  if (it == cache.end() || it->second.truncation < needed) {
    FormalLogSeries s = formal_group_log(curve, ((needed + 15) / 16) * 16);
    if (it == cache.end()) it = cache.emplace(key, std::move(s)).first;
    else it->second = std::move(s);
  }
  return it->second;
}

const FormalGroupLaw& cached_law(const CurveQ& curve, int64_t needed) {
  static std::map<std::pair<std::string, int64_t>, FormalGroupLaw> cache;
  const int64_t T = ((needed + 4) / 5) * 5;
  std::lock_guard<std::mutex> lock(formal_mu);
  auto key = std::make_pair(curve.ainvs_string(), T);
  auto it = cache.find(key);
  if (it == cache.end()) it = cache.emplace(key, formal_group_law(curve, T)).first;
  return it->second;
}

}  // namespace

UnramExtElem formal_log(const CurveQ& curve, const UnramExtElem& t) {
  if (t.is_zero()) return t;
  const int64_t v = std::max<int64_t>(t.valuation(), 1);
  const int64_t p = t.ext()->prime();
  int64_t N = 1;
  while ((N + 1) * v - floor_log(N + 1, p) < t.precision()) ++N;
  return cached_log(curve, N).evaluate(t);
}

UnramExtElem formal_add(const CurveQ& curve, const UnramExtElem& t1, const UnramExtElem& t2) {
  const int64_t vmin = std::max<int64_t>(std::min(t1.valuation(), t2.valuation()), 1);
  const int64_t target = std::min(t1.precision(), t2.precision());
  const int64_t T = std::max<int64_t>((target + vmin - 1) / vmin, 1);
  return cached_law(curve, T).evaluate(t1, t2);
}

UnramExtElem formal_multiply(const CurveQ& curve, int64_t n, const UnramExtElem& t) {
  if (n < 0) throw Error(ErrorKind::InvalidArgument, "negative multiple");
  UnramExtElem acc(t.ext(), t.precision());
  UnramExtElem base = t;
  while (n > 0) {
    if (n & 1) acc = formal_add(curve, acc, base);
    n >>= 1;
    if (n > 0) base = formal_add(curve, base, base);
  }
  return acc;
}

// -------------------------------------------------------- local structure

std::string LocalStructure::to_string() const {
  std::ostringstream os;
  os << "p=" << p << " in " << field.to_string() << ": " << places.size() << " place(s) of degree " << local_degree
     << ", " << (embedding ? embedding->to_string() : ext->to_string());
  return os.str();
}

LocalStructure local_structure(const FieldSpec& F, int64_t p, int64_t precision, int64_t embedding_choice) {
  if (p == 2) throw Error(ErrorKind::EvenPrime, "p must be odd");
  if (!nt::is_prime(p)) throw Error(ErrorKind::InvalidArgument, std::to_string(p) + " is not prime");
  const int64_t c = F.conductor;
  if (c % p == 0) throw Error(ErrorKind::RamifiedPlace, std::to_string(p) + " ramifies in " + F.to_string());
  LocalStructure L;
  L.field = F;
  L.p = p;
  L.precision = precision;
  const AbGroup& G = F.group();
  L.frobenius = c == 1 ? 0 : F.quotient.of(p % c);
  const auto D = G.subgroup({L.frobenius});
  L.local_degree = static_cast<int64_t>(D.size());
  std::vector<bool> covered(G.size(), false);
  for (size_t g = 0; g < G.size(); ++g) {
    if (covered[g]) continue;
    L.places.push_back(g);
    for (size_t d : D) covered[G.add(g, d)] = true;
  }
  L.residues.assign(G.size(), 0);
  std::vector<bool> have(G.size(), false);
  if (c == 1) {
    L.residues[0] = 1;
  } else {
    for (int64_t a = 1; a < c; ++a) {
      if (std::gcd(a, c) != 1) continue;
      const size_t g = F.quotient.of(a);
      if (!have[g]) {
        have[g] = true;
        L.residues[g] = a;
      }
    }
  }
  int64_t e = G.exponent();
  while (e % p == 0) e /= p;
  const int64_t M = std::lcm(c, e);
  const int64_t f = M <= 2 ? 1 : nt::mult_order(p % M, M);
  L.ext = UnramExt::make(p, f, precision + 40);
  L.cyclotomic_level = M;
  L.embedding = std::make_shared<const CyclotomicEmbedding>(L.ext, M, embedding_choice);
  return L;
}

void validate_point(const LocalStructure& L, const SemiLocalPoint& x) {
  if (x.params.size() != L.places.size())
    throw Error(ErrorKind::InvalidArgument, "expected " + std::to_string(L.places.size()) + " local parameter(s)");
  for (const auto& t : x.params) {
    if (t.ext() != L.ext) throw Error(ErrorKind::InvalidArgument, "parameter in the wrong extension");
    if (!t.is_zero() && t.valuation() < 1) throw Error(ErrorKind::InvalidArgument, "parameter of valuation < 1");
    if (!(t.frobenius(L.local_degree) == t))
      throw Error(ErrorKind::InvalidArgument, "parameter not in the completion of F");
  }
}

UnramExtElem point_at(const LocalStructure& L, const SemiLocalPoint& x, size_t g) {
  const AbGroup& G = L.field.group();
  for (int64_t j = 0; j < L.local_degree; ++j) {
    const size_t r = G.add(g, G.times(L.frobenius, j));
    auto it = std::find(L.places.begin(), L.places.end(), r);
    if (it != L.places.end()) return x.params[static_cast<size_t>(it - L.places.begin())].frobenius(j);
  }
  throw Error(ErrorKind::InvalidArgument, "group element outside every coset");
}

SemiLocalPoint act(const LocalStructure& L, size_t h, const SemiLocalPoint& x) {
  const AbGroup& G = L.field.group();
  SemiLocalPoint y;
  for (size_t r : L.places) y.params.push_back(point_at(L, x, G.add(G.neg(h), r)));
  return y;
}

SemiLocalPoint point_add(const CurveQ& curve, const SemiLocalPoint& x, const SemiLocalPoint& y) {
  if (x.params.size() != y.params.size()) throw Error(ErrorKind::InvalidArgument, "points over different fields");
  SemiLocalPoint z;
  for (size_t i = 0; i < x.params.size(); ++i) z.params.push_back(formal_add(curve, x.params[i], y.params[i]));
  return z;
}

SemiLocalPoint point_multiply(const CurveQ& curve, int64_t n, const SemiLocalPoint& x) {
  SemiLocalPoint z;
  for (const auto& t : x.params) z.params.push_back(formal_multiply(curve, n, t));
  return z;
}

SemiLocalPoint random_point(const LocalStructure& L, uint64_t seed) {
  std::mt19937_64 rng(seed);
  const int64_t p = L.p;
  const int64_t k = L.precision;
  const UnramExtElem w = root_of_unity_padic(L.ext, ppow(p, L.local_degree).get_si() - 1, k);
  SemiLocalPoint x;
  for (size_t place = 0; place < L.places.size(); ++place) {
    UnramExtElem t(L.ext, k);
    UnramExtElem wp = UnramExtElem::from_rational(L.ext, 1, k);
    for (int64_t i = 0; i < L.local_degree; ++i) {
      Integer r = 0;
      for (int64_t d = k; d-- > 0;) r = r * p + static_cast<long>(rng() % static_cast<uint64_t>(p));
      t += wp * Rational(r);
      wp = wp * w;
    }
    x.params.push_back((t * Rational(p)).reduce(k));
  }
  return x;
}

// ------------------------------------------------------------- resolvents

int64_t ResolventValue::precision() const {
  int64_t k = kInfiniteValuation;
  for (const auto& c : coords) k = std::min(k, c.precision());
  return k;
}

ResolventValue ResolventValue::operator+(const ResolventValue& o) const {
  if (order != o.order) throw Error(ErrorKind::LevelMismatch, "resolvents of different orders");
  ResolventValue r = *this;
  for (size_t i = 0; i < coords.size(); ++i) r.coords[i] = coords[i] + o.coords[i];
  return r;
}

ResolventValue ResolventValue::operator*(const Rational& q) const {
  ResolventValue r = *this;
  for (auto& c : r.coords) c = c * q;
  return r;
}

bool ResolventValue::operator==(const ResolventValue& o) const {
  if (order != o.order) return false;
  for (size_t i = 0; i < coords.size(); ++i)
    if (!(coords[i] == o.coords[i])) return false;
  return true;
}

UnramExtElem ResolventValue::embed(const CyclotomicEmbedding& emb) const {
  const auto& ext = coords.front().ext();
  if (order % ext->prime() == 0)
    throw Error(ErrorKind::RamifiedCase, "zeta_" + std::to_string(order) + " is ramified at " + std::to_string(ext->prime()));
  const int64_t k = precision();
  UnramExtElem r(ext, k);
  for (size_t j = 0; j < coords.size(); ++j)
    r += coords[j] * emb(CycloElem::zeta_power(order, static_cast<int64_t>(j)), ext->working_precision());
  return r.reduce(k);
}

std::string ResolventValue::to_string() const {
  std::ostringstream os;
  for (size_t j = 0; j < coords.size(); ++j) {
    if (j) os << " + ";
    os << "(" << coords[j].to_string() << ")";
    if (j) os << "*z" << order << "^" << j;
  }
  return os.str();
}

ResolventValue log_resolvent(const CurveQ& curve, const LocalStructure& L, const SemiLocalPoint& x,
                             const DirichletChar& chi_in) {
  const int64_t c = L.field.conductor;
  if (c % chi_in.modulus() != 0)
    throw Error(ErrorKind::CharacterDoesNotFactor, chi_in.to_string() + " is not defined modulo " + std::to_string(c));
  const DirichletChar chi = chi_in.lift(c);
  for (int64_t h : L.field.h_generators)
    if (c > 1 && *chi.exponent_at(nt::mod(h, c)) != 0)
      throw Error(ErrorKind::CharacterDoesNotFactor, chi.to_string() + " is not trivial on H");
  validate_point(L, x);
  const CurveQ model = minimal_model(curve);
  const int64_t n = chi.order();
  const int64_t W = L.ext->working_precision();
  std::vector<UnramExtElem> bucket(static_cast<size_t>(n), UnramExtElem(L.ext, W));
  for (size_t g = 0; g < L.field.group().size(); ++g) {
    const int64_t k = c == 1 ? 0 : *chi.exponent_at(L.residues[g]);
    bucket[static_cast<size_t>(k)] += formal_log(model, point_at(L, x, g));
  }
  const auto& phi = cyclotomic_polynomial(n);
  const size_t deg = phi.size() - 1;
  for (size_t k = bucket.size(); k-- > deg;) {
    const UnramExtElem top = bucket[k];
    for (size_t i = 0; i < deg; ++i)
      if (phi[i] != 0) bucket[k - deg + i] = bucket[k - deg + i] - top * Rational(phi[i]);
  }
  bucket.resize(deg);
  ResolventValue r{n, bucket};
  if (r.precision() < 1) throw Error(ErrorKind::PrecisionExhausted, "resolvent precision below 1");
  return r;
}

std::vector<int64_t> default_places(const CurveQ& curve, const FieldSpec& F, int64_t p) {
  std::vector<int64_t> S{p};
  for (int64_t l : nt::prime_divisors(F.conductor)) S.push_back(l);
  for (int64_t l : nt::prime_divisors(conductor(curve))) S.push_back(l);
  std::sort(S.begin(), S.end());
  S.erase(std::unique(S.begin(), S.end()), S.end());
  return S;
}

PredictionResult first_prediction_sum(const CurveQ& curve, const LocalStructure& L, const SemiLocalPoint& x,
                                      const std::vector<int64_t>& S_in, int64_t precision_floor) {
  const FieldSpec& F = L.field;
  const int64_t c = F.conductor;
  const int64_t p = L.p;
  std::vector<int64_t> S = S_in;
  std::sort(S.begin(), S.end());
  S.erase(std::unique(S.begin(), S.end()), S.end());
  for (int64_t l : default_places(curve, F, p))
    if (!std::binary_search(S.begin(), S.end(), l))
      throw Error(ErrorKind::InvalidArgument, "S must contain " + std::to_string(l));
  const CurveQ model = minimal_model(curve);
  const int64_t N = conductor(model);
  const AbGroup& G = F.group();
  const auto theta = restrict_to_field(theta_element(*curve_functional(model), c, model.label), F);
  const CyclotomicEmbedding& emb = *L.embedding;
  const int64_t W = L.ext->working_precision();

  PredictionResult out;
  out.places_S = S;
  out.embedding = emb.to_string();
  std::vector<DirichletChar> chars = field_characters(F);
  std::vector<UnramExtElem> weighted;  // a_chi LR_chi(x), embedded
  for (const auto& chi : chars) {
    const int64_t n = chi.order();
    if (n % p == 0) throw Error(ErrorKind::RamifiedCase, "character of order divisible by " + std::to_string(p));
    // L_c(A, conj chi, 1) tau*(Q, chi) / Omega^+ = 2 (c_chi / c) (Theta_c)_chi
    CycloElem a = character_component(theta, chi) * make_rational(2 * chi.conductor(), c);
    const DirichletChar cj = chi.conj();
    for (int64_t l : S) {
      if (c % l == 0) continue;
      const int64_t al = N % l == 0 ? tate_local(model, l).ap : ap_count(model, l);
      const CycloElem v = cj.value(l);
      CycloElem factor = CycloElem::from_rational(n, 1) - v * make_rational(al, l);
      if (N % l != 0) factor += v * v * make_rational(1, l);
      a *= factor;
    }
    if (a.is_zero())
      throw Error(ErrorKind::CharacterValueUnavailable, "L_S(A, " + cj.to_string() + ", 1) = 0");
    out.algebraic_parts.emplace_back(chi.to_string(), a);
    const ResolventValue lr = log_resolvent(model, L, x, chi);
    weighted.push_back(emb(a, W) * lr.embed(emb));
  }
  const Rational inv_order = make_rational(1, static_cast<int64_t>(G.size()));
  const int64_t vG = nt::valuation(static_cast<int64_t>(G.size()), p);
  out.precision = kInfiniteValuation;
  out.integral = true;
  out.congruences_hold = true;
  for (size_t g = 0; g < G.size(); ++g) {
    UnramExtElem coef(L.ext, W), cong(L.ext, W);
    for (size_t i = 0; i < chars.size(); ++i) {
      const int64_t r = L.residues[g];
      coef += weighted[i] * emb(chars[i].conj().value(r), W);
      cong += weighted[i] * emb(chars[i].value(r), W);
    }
    coef = coef * inv_order;
    out.precision = std::min(out.precision, coef.precision());
    if (!coef.is_zero() && coef.valuation() < 0) out.integral = false;
    if (!cong.is_zero() && cong.valuation() < vG) out.congruences_hold = false;
    out.coefficients.push_back(coef);
    out.congruence_sums.push_back(cong);
  }
  if (out.precision < precision_floor)
    throw Error(ErrorKind::PrecisionExhausted, "surviving precision " + std::to_string(out.precision) + " below floor " +
                                                   std::to_string(precision_floor));
  for (auto& coef : out.coefficients) coef = coef.reduce(out.precision);
  bool base = std::all_of(out.coefficients.begin(), out.coefficients.end(),
                          [](const UnramExtElem& e) { return e.in_base_field(); });
  if (out.integral && base) {
    std::vector<Rational> q;
    for (const auto& coef : out.coefficients) q.emplace_back(coef.coordinate(0).residue(out.precision));
    out.element = GroupRingElem(G, q, Scalars{p, static_cast<int>(out.precision)});
  }
  return out;
}

}  // namespace thetalab
