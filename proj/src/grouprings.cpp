#include "thetalab/grouprings.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <sstream>

#include "thetalab/characters.hpp"
#include "thetalab/cyclo.hpp"
#include "thetalab/error.hpp"
#include "thetalab/ntheory.hpp"

namespace thetalab {

namespace {

Integer mod_int(const Integer& a, const Integer& m) {
  Integer r = a % m;
  if (r < 0) r += m;
  return r;
}

Integer int_pow(int64_t p, int k) {
  Integer r;
  mpz_ui_pow_ui(r.get_mpz_t(), static_cast<unsigned long>(p), static_cast<unsigned long>(k));
  return r;
}

int64_t valuation_int(const Integer& a, int64_t p, int cap) {
  if (a == 0) return cap;
  Integer t = a;
  int v = 0;
  while (v < cap && mpz_divisible_ui_p(t.get_mpz_t(), static_cast<unsigned long>(p))) {
    t /= p;
    ++v;
  }
  return v;
}

Integer inverse_mod(const Integer& a, const Integer& m) {
  Integer r;
  if (mpz_invert(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t()) == 0)
    throw Error(ErrorKind::NotCoprime, "element not invertible mod " + m.get_str());
  return r;
}

}  // namespace

// ---------------------------------------------------------------- AbGroup

AbGroup::AbGroup(std::vector<int64_t> invariant_factors) {
  for (int64_t d : invariant_factors) {
    if (d < 1) throw Error(ErrorKind::InvalidArgument, "invariant factors must be positive");
    if (d > 1) factors_.push_back(d);
  }
  for (size_t i = 0; i + 1 < factors_.size(); ++i)
    if (factors_[i + 1] % factors_[i] != 0)
      throw Error(ErrorKind::InvalidArgument, "invariant factors must form a divisibility chain");
  size_ = 1;
  for (int64_t d : factors_) size_ *= static_cast<size_t>(d);
}

std::vector<int64_t> AbGroup::coords(size_t index) const {
  std::vector<int64_t> out(factors_.size());
  for (size_t i = 0; i < factors_.size(); ++i) {
    out[i] = static_cast<int64_t>(index % static_cast<size_t>(factors_[i]));
    index /= static_cast<size_t>(factors_[i]);
  }
  return out;
}

size_t AbGroup::index(const std::vector<int64_t>& coords) const {
  size_t idx = 0;
  for (size_t i = factors_.size(); i-- > 0;)
    idx = idx * static_cast<size_t>(factors_[i]) + static_cast<size_t>(nt::mod(coords[i], factors_[i]));
  return idx;
}

size_t AbGroup::add(size_t x, size_t y) const {
  auto a = coords(x), b = coords(y);
  for (size_t i = 0; i < a.size(); ++i) a[i] += b[i];
  return index(a);
}

size_t AbGroup::neg(size_t x) const {
  auto a = coords(x);
  for (auto& v : a) v = -v;
  return index(a);
}

size_t AbGroup::times(size_t x, int64_t n) const {
  auto a = coords(x);
  for (size_t i = 0; i < a.size(); ++i) a[i] = nt::mul_mod(a[i], n, factors_[i]);
  return index(a);
}

int64_t AbGroup::order(size_t x) const {
  int64_t o = 1;
  auto a = coords(x);
  for (size_t i = 0; i < a.size(); ++i) o = std::lcm(o, factors_[i] / std::gcd(a[i], factors_[i]));
  return o;
}

std::vector<size_t> AbGroup::subgroup(const std::vector<size_t>& gens) const {
  std::set<size_t> seen{0};
  std::vector<size_t> frontier{0};
  while (!frontier.empty()) {
    std::vector<size_t> next;
    for (size_t x : frontier)
      for (size_t g : gens) {
        size_t y = add(x, g);
        if (seen.insert(y).second) next.push_back(y);
      }
    frontier.swap(next);
  }
  return {seen.begin(), seen.end()};
}

std::vector<size_t> AbGroup::generators() const {
  std::vector<size_t> out;
  for (size_t i = 0; i < factors_.size(); ++i) {
    std::vector<int64_t> e(factors_.size(), 0);
    e[i] = 1;
    out.push_back(index(e));
  }
  return out;
}

int64_t AbGroup::pairing(size_t k, size_t g) const {
  const int64_t e = exponent();
  auto a = coords(k), b = coords(g);
  int64_t s = 0;
  for (size_t i = 0; i < a.size(); ++i) s = nt::mod(s + nt::mul_mod(a[i] * (e / factors_[i]), b[i], e), e);
  return s;
}

void AbGroup::set_labels(std::vector<std::string> labels) {
  if (!labels.empty() && labels.size() != size_) throw Error(ErrorKind::InvalidArgument, "one label per element");
  labels_ = std::move(labels);
}

std::string AbGroup::label(size_t x) const {
  if (!labels_.empty()) return labels_[x];
  std::ostringstream os;
  os << "(";
  auto a = coords(x);
  for (size_t i = 0; i < a.size(); ++i) os << (i ? "," : "") << a[i];
  os << ")";
  return os.str();
}

std::string AbGroup::to_string() const {
  if (factors_.empty()) return "1";
  std::ostringstream os;
  for (size_t i = 0; i < factors_.size(); ++i) os << (i ? " x " : "") << "Z/" << factors_[i];
  return os.str();
}

// ----------------------------------------------------------- presentations

Presentation present(size_t n, const std::vector<std::vector<int64_t>>& relations) {
  const size_t r = relations.size();
  std::vector<std::vector<Integer>> A(r, std::vector<Integer>(n));
  for (size_t i = 0; i < r; ++i) {
    if (relations[i].size() != n) throw Error(ErrorKind::InvalidArgument, "relation of wrong length");
    for (size_t j = 0; j < n; ++j) A[i][j] = Integer(static_cast<long>(relations[i][j]));
  }
  // P tracks the column operations: x -> x P sends the relation lattice to the diagonal one.
  std::vector<std::vector<Integer>> P(n, std::vector<Integer>(n));
  for (size_t i = 0; i < n; ++i) P[i][i] = 1;

  auto swap_cols = [&](size_t a, size_t b) {
    for (auto& row : A) std::swap(row[a], row[b]);
    for (auto& row : P) std::swap(row[a], row[b]);
  };
  auto col_sub = [&](size_t j, size_t t, const Integer& q) {  // col_j -= q col_t
    for (auto& row : A) row[j] -= q * row[t];
    for (auto& row : P) row[j] -= q * row[t];
  };

  const size_t steps = std::min(r, n);
  for (size_t t = 0; t < steps; ++t) {
    for (;;) {
      // smallest nonzero entry of the remaining block goes to (t, t)
      size_t bi = r, bj = n;
      for (size_t i = t; i < r; ++i)
        for (size_t j = t; j < n; ++j)
          if (A[i][j] != 0 && (bi == r || abs(A[i][j]) < abs(A[bi][bj]))) {
            bi = i;
            bj = j;
          }
      if (bi == r) break;
      std::swap(A[t], A[bi]);
      swap_cols(t, bj);
      bool clean = true;
      for (size_t i = t + 1; i < r; ++i) {
        Integer q;
        mpz_fdiv_q(q.get_mpz_t(), A[i][t].get_mpz_t(), A[t][t].get_mpz_t());
        if (q != 0)
          for (size_t j = t; j < n; ++j) A[i][j] -= q * A[t][j];
        if (A[i][t] != 0) clean = false;
      }
      for (size_t j = t + 1; j < n; ++j) {
        Integer q;
        mpz_fdiv_q(q.get_mpz_t(), A[t][j].get_mpz_t(), A[t][t].get_mpz_t());
        if (q != 0) col_sub(j, t, q);
        if (A[t][j] != 0) clean = false;
      }
      if (!clean) continue;
      bool divides = true;
      for (size_t i = t + 1; i < r && divides; ++i)
        for (size_t j = t + 1; j < n; ++j)
          if (A[i][j] % A[t][t] != 0) {
            for (size_t jj = t; jj < n; ++jj) A[t][jj] += A[i][jj];
            divides = false;
            break;
          }
      if (divides) break;
    }
  }
  std::vector<int64_t> diag(n, 0);
  for (size_t t = 0; t < steps; ++t) diag[t] = Integer(abs(A[t][t])).get_si();
  std::vector<size_t> kept;
  std::vector<int64_t> factors;
  for (size_t t = 0; t < n; ++t) {
    if (diag[t] == 0) throw Error(ErrorKind::InvalidArgument, "presented group is infinite");
    if (diag[t] > 1) {
      kept.push_back(t);
      factors.push_back(diag[t]);
    }
  }
  Presentation out{AbGroup(factors), {}};
  for (size_t i = 0; i < n; ++i) {
    std::vector<int64_t> c;
    for (size_t t : kept) c.push_back(mod_int(P[i][t], Integer(static_cast<long>(diag[t]))).get_si());
    out.generator_images.push_back(out.group.index(c));
  }
  return out;
}

size_t UnitQuotient::of(int64_t a) const {
  const int64_t r = image[static_cast<size_t>(nt::mod(a, modulus))];
  if (r < 0) throw Error(ErrorKind::NotCoprime, std::to_string(a) + " is not a unit mod " + std::to_string(modulus));
  return static_cast<size_t>(r);
}

UnitQuotient unit_quotient(int64_t c, const std::vector<int64_t>& h_gens) {
  const auto U = UnitGroup::get(c);
  const size_t n = U->generators.size();
  std::vector<std::vector<int64_t>> rel;
  for (size_t i = 0; i < n; ++i) {
    std::vector<int64_t> row(n, 0);
    row[i] = U->orders[i];
    rel.push_back(row);
  }
  for (int64_t h : h_gens) {
    if (std::gcd(nt::mod(h, c), c) != 1 && c > 1) throw Error(ErrorKind::NotCoprime, "subgroup generator not a unit");
    if (c > 1) rel.push_back(U->dlog[static_cast<size_t>(nt::mod(h, c))]);
  }
  const Presentation pr = present(n, rel);
  UnitQuotient q{c, pr.group, std::vector<int64_t>(static_cast<size_t>(c), -1)};
  std::vector<std::string> labels(pr.group.size());
  for (int64_t a = 0; a < c; ++a) {
    if (std::gcd(a, c) != 1 && c > 1) continue;
    size_t idx = 0;
    if (c > 1) {
      const auto& dl = U->dlog[static_cast<size_t>(a)];
      for (size_t i = 0; i < n; ++i) idx = pr.group.add(idx, pr.group.times(pr.generator_images[i], dl[i]));
    }
    q.image[static_cast<size_t>(a)] = static_cast<int64_t>(idx);
    if (labels[idx].empty()) labels[idx] = "s" + std::to_string(c == 1 ? 1 : a);
  }
  q.group.set_labels(labels);
  return q;
}

// ---------------------------------------------------------- GroupRingElem

Integer Scalars::modulus() const { return exact() ? Integer(0) : int_pow(p, k); }

std::string Scalars::to_string() const {
  return exact() ? "Q" : "Z/" + std::to_string(p) + "^" + std::to_string(k);
}

GroupRingElem::GroupRingElem(AbGroup group, Scalars scalars)
    : group_(std::move(group)), scalars_(scalars), coeffs_(group_.size()) {}

GroupRingElem::GroupRingElem(AbGroup group, std::vector<Rational> coeffs, Scalars scalars)
    : group_(std::move(group)), scalars_(scalars), coeffs_(std::move(coeffs)) {
  if (coeffs_.size() != group_.size()) throw Error(ErrorKind::InvalidArgument, "one coefficient per group element");
  normalize();
}

GroupRingElem GroupRingElem::one(const AbGroup& group, Scalars scalars) { return element(group, 0, scalars); }

GroupRingElem GroupRingElem::element(const AbGroup& group, size_t g, Scalars scalars) {
  GroupRingElem x(group, scalars);
  x.coeffs_[g] = 1;
  x.normalize();
  return x;
}

void GroupRingElem::normalize() {
  if (scalars_.exact()) return;
  if (scalars_.p < 2 || scalars_.k < 1) throw Error(ErrorKind::InvalidArgument, "Z/p^k needs p >= 2, k >= 1");
  const Integer m = scalars_.modulus();
  for (auto& q : coeffs_) {
    Integer v = q.get_num();
    if (q.get_den() != 1) v *= inverse_mod(Integer(q.get_den()), m);
    q = Rational(mod_int(v, m));
  }
}

void GroupRingElem::set(size_t g, const Rational& q) {
  coeffs_.at(g) = q;
  normalize();
}

void GroupRingElem::check_compatible(const GroupRingElem& o) const {
  if (group_ != o.group_) throw Error(ErrorKind::InvalidArgument, "group ring elements over different groups");
  if (!(scalars_ == o.scalars_)) throw Error(ErrorKind::InvalidArgument, "group ring elements over different scalars");
}

GroupRingElem GroupRingElem::operator+(const GroupRingElem& o) const {
  check_compatible(o);
  GroupRingElem r = *this;
  for (size_t g = 0; g < coeffs_.size(); ++g) r.coeffs_[g] += o.coeffs_[g];
  r.normalize();
  return r;
}

GroupRingElem GroupRingElem::operator-(const GroupRingElem& o) const { return *this + (-o); }

GroupRingElem GroupRingElem::operator-() const {
  GroupRingElem r = *this;
  for (auto& q : r.coeffs_) q = -q;
  r.normalize();
  return r;
}

GroupRingElem GroupRingElem::operator*(const GroupRingElem& o) const {
  check_compatible(o);
  GroupRingElem r(group_, scalars_);
  for (size_t g = 0; g < coeffs_.size(); ++g) {
    if (coeffs_[g] == 0) continue;
    for (size_t h = 0; h < coeffs_.size(); ++h)
      if (o.coeffs_[h] != 0) r.coeffs_[group_.add(g, h)] += coeffs_[g] * o.coeffs_[h];
  }
  r.normalize();
  return r;
}

GroupRingElem GroupRingElem::scaled(const Rational& q) const {
  GroupRingElem r = *this;
  for (auto& c : r.coeffs_) c *= q;
  r.normalize();
  return r;
}

bool GroupRingElem::operator==(const GroupRingElem& o) const {
  return group_ == o.group_ && scalars_ == o.scalars_ && coeffs_ == o.coeffs_;
}

bool GroupRingElem::is_zero() const {
  return std::all_of(coeffs_.begin(), coeffs_.end(), [](const Rational& q) { return q == 0; });
}

Rational GroupRingElem::augmentation() const {
  Rational s = 0;
  for (const auto& q : coeffs_) s += q;
  if (!scalars_.exact()) s = Rational(mod_int(s.get_num(), scalars_.modulus()));
  return s;
}

GroupRingElem GroupRingElem::reduce(int64_t p, int k) const {
  if (!scalars_.exact() && scalars_.p != p) throw Error(ErrorKind::InvalidArgument, "different residue characteristic");
  if (!scalars_.exact() && scalars_.k < k) throw Error(ErrorKind::InvalidArgument, "cannot raise precision");
  return GroupRingElem(group_, coeffs_, Scalars{p, k});
}

GroupRingElem GroupRingElem::involution() const {
  GroupRingElem r(group_, scalars_);
  for (size_t g = 0; g < coeffs_.size(); ++g) r.coeffs_[group_.neg(g)] = coeffs_[g];
  return r;
}

std::string GroupRingElem::to_string() const {
  std::ostringstream os;
  bool first = true;
  for (size_t g = 0; g < coeffs_.size(); ++g) {
    if (coeffs_[g] == 0) continue;
    os << (first ? "" : " + ") << coeffs_[g].get_str() << "*" << group_.label(g);
    first = false;
  }
  if (first) os << "0";
  if (!scalars_.exact()) os << " (mod " << scalars_.p << "^" << scalars_.k << ")";
  return os.str();
}

// -------------------------------------------------------------- operations

GroupRingElem project_quotient(const GroupRingElem& x, const GroupHom& q) {
  const AbGroup& G = q.source;
  const AbGroup& H = q.target;
  if (x.group() != G || q.images.size() != G.size()) throw Error(ErrorKind::InvalidArgument, "map does not match group");
  std::vector<bool> hit(H.size(), false);
  for (size_t g = 0; g < G.size(); ++g) {
    if (q.images[g] >= H.size()) throw Error(ErrorKind::InvalidArgument, "image outside target");
    hit[q.images[g]] = true;
  }
  for (size_t g : G.generators())
    for (size_t h = 0; h < G.size(); ++h)
      if (q.images[G.add(g, h)] != H.add(q.images[g], q.images[h]))
        throw Error(ErrorKind::InvalidArgument, "map is not a homomorphism");
  if (q.images[0] != 0) throw Error(ErrorKind::InvalidArgument, "map is not a homomorphism");
  if (std::find(hit.begin(), hit.end(), false) != hit.end())
    throw Error(ErrorKind::NotSurjective, "projection misses part of the target");
  std::vector<Rational> c(H.size());
  for (size_t g = 0; g < G.size(); ++g) c[q.images[g]] += x[g];
  return GroupRingElem(H, c, x.scalars());
}

UnitVerdict padic_integrality_and_unit(const GroupRingElem& x, int64_t p) {
  if (p == 2) throw Error(ErrorKind::EvenPrime, "p must be odd");
  if (p < 2 || !nt::is_prime(p)) throw Error(ErrorKind::InvalidArgument, "p must be prime");
  if (!x.scalars().exact() && x.scalars().p != p) throw Error(ErrorKind::InvalidArgument, "different residue characteristic");
  UnitVerdict v;
  v.integral = std::all_of(x.coeffs().begin(), x.coeffs().end(),
                           [&](const Rational& q) { return q == 0 || padic_valuation(q, p) >= 0; });
  if (!v.integral) return v;
  const AbGroup& G = x.group();
  const size_t n = G.size();
  std::vector<int64_t> red(n);
  for (size_t g = 0; g < n; ++g) {
    Integer num = x[g].get_num();
    Integer den = x[g].get_den();
    red[g] = mod_int(num * inverse_mod(den, Integer(static_cast<long>(p))), Integer(static_cast<long>(p))).get_si();
  }
  // column g of the regular representation is x * g
  std::vector<std::vector<int64_t>> m(n, std::vector<int64_t>(n));
  for (size_t g = 0; g < n; ++g)
    for (size_t h = 0; h < n; ++h) m[G.add(h, g)][g] = red[h];
  for (size_t col = 0; col < n; ++col) {
    size_t piv = col;
    while (piv < n && m[piv][col] == 0) ++piv;
    if (piv == n) return v;
    std::swap(m[piv], m[col]);
    const int64_t inv = nt::inv_mod(m[col][col], p);
    for (size_t r = col + 1; r < n; ++r) {
      if (m[r][col] == 0) continue;
      const int64_t f = nt::mul_mod(m[r][col], inv, p);
      for (size_t j = col; j < n; ++j) m[r][j] = nt::mod(m[r][j] - nt::mul_mod(f, m[col][j], p), p);
    }
  }
  v.unit = true;
  return v;
}

bool in_span_mod_pk(const std::vector<std::vector<Integer>>& gens, const std::vector<Integer>& v, int64_t p, int k) {
  const Integer m = int_pow(p, k);
  const size_t n = v.size();
  std::vector<std::vector<Integer>> rows;
  for (const auto& g : gens) {
    if (g.size() != n) throw Error(ErrorKind::InvalidArgument, "spanning vector of wrong length");
    std::vector<Integer> r(n);
    bool nz = false;
    for (size_t j = 0; j < n; ++j) {
      r[j] = mod_int(g[j], m);
      nz = nz || r[j] != 0;
    }
    if (nz) rows.push_back(std::move(r));
  }
  struct Pivot {
    size_t col;
    int64_t val;
    std::vector<Integer> row;
  };
  std::vector<Pivot> pivots;
  for (size_t j = 0; j < n && !rows.empty(); ++j) {
    size_t best = rows.size();
    int64_t bv = k;
    for (size_t i = 0; i < rows.size(); ++i) {
      const int64_t val = valuation_int(rows[i][j], p, k);
      if (val < bv) {
        bv = val;
        best = i;
      }
    }
    if (best == rows.size()) continue;
    std::vector<Integer> r = std::move(rows[best]);
    rows.erase(rows.begin() + static_cast<std::ptrdiff_t>(best));
    const Integer pv = int_pow(p, static_cast<int>(bv));
    const Integer u = inverse_mod(Integer(r[j] / pv), m);
    for (auto& e : r) e = mod_int(e * u, m);
    for (auto& s : rows) {
      if (s[j] == 0) continue;
      const Integer f = s[j] / pv;
      for (size_t jj = j; jj < n; ++jj) s[jj] = mod_int(s[jj] - f * r[jj], m);
    }
    if (bv > 0) {
      std::vector<Integer> extra(n);
      const Integer scale = int_pow(p, k - static_cast<int>(bv));
      bool nz = false;
      for (size_t jj = 0; jj < n; ++jj) {
        extra[jj] = mod_int(r[jj] * scale, m);
        nz = nz || extra[jj] != 0;
      }
      if (nz) rows.push_back(std::move(extra));
    }
    rows.erase(std::remove_if(rows.begin(), rows.end(),
                              [](const std::vector<Integer>& s) {
                                return std::all_of(s.begin(), s.end(), [](const Integer& e) { return e == 0; });
                              }),
               rows.end());
    pivots.push_back({j, bv, std::move(r)});
  }
  std::vector<Integer> t(n);
  for (size_t j = 0; j < n; ++j) t[j] = mod_int(v[j], m);
  for (const auto& pv : pivots) {
    const Integer& e = t[pv.col];
    if (e == 0) continue;
    const Integer pp = int_pow(p, static_cast<int>(pv.val));
    if (e % pp != 0) return false;
    const Integer f = e / pp;
    for (size_t jj = pv.col; jj < n; ++jj) t[jj] = mod_int(t[jj] - f * pv.row[jj], m);
  }
  return std::all_of(t.begin(), t.end(), [](const Integer& e) { return e == 0; });
}

std::vector<std::vector<Integer>> ideal_span(const std::vector<GroupRingElem>& gens) {
  std::vector<std::vector<Integer>> out;
  for (const auto& x : gens) {
    const AbGroup& G = x.group();
    for (size_t g = 0; g < G.size(); ++g) {
      std::vector<Integer> v(G.size());
      for (size_t h = 0; h < G.size(); ++h) v[G.add(g, h)] = x[h].get_num();
      out.push_back(std::move(v));
    }
  }
  return out;
}

namespace {

std::vector<Integer> integer_coeffs(const GroupRingElem& x) {
  std::vector<Integer> v;
  for (const auto& q : x.coeffs()) v.push_back(q.get_num());
  return v;
}

void require_padic(const GroupRingElem& x) {
  if (x.scalars().exact()) throw Error(ErrorKind::InvalidArgument, "membership needs Z/p^k scalars");
}

}  // namespace

bool aug_ideal_membership(const GroupRingElem& x, int n) {
  require_padic(x);
  if (n <= 0) return true;
  const AbGroup& G = x.group();
  const Scalars s = x.scalars();
  std::vector<GroupRingElem> basic;
  for (size_t g : G.generators()) basic.push_back(GroupRingElem::element(G, g, s) - GroupRingElem::one(G, s));
  if (basic.empty()) return x.is_zero();
  // products of n generators, as multisets
  std::vector<GroupRingElem> monomials;
  std::vector<size_t> pick(static_cast<size_t>(n), 0);
  for (;;) {
    GroupRingElem m = GroupRingElem::one(G, s);
    for (size_t i : pick) m = m * basic[i];
    monomials.push_back(m);
    int pos = n - 1;
    while (pos >= 0 && pick[static_cast<size_t>(pos)] + 1 == basic.size()) --pos;
    if (pos < 0) break;
    const size_t nv = pick[static_cast<size_t>(pos)] + 1;
    for (size_t j = static_cast<size_t>(pos); j < pick.size(); ++j) pick[j] = nv;
  }
  return in_span_mod_pk(ideal_span(monomials), integer_coeffs(x), s.p, s.k);
}

GroupRingElem determinant(const GroupRingMatrix& m) {
  const size_t n = m.size();
  if (n == 0) throw Error(ErrorKind::InvalidArgument, "empty matrix");
  for (const auto& row : m)
    if (row.size() != n) throw Error(ErrorKind::InvalidArgument, "determinant of a non-square matrix");
  if (n == 1) return m[0][0];
  GroupRingElem det(m[0][0].group(), m[0][0].scalars());
  for (size_t j = 0; j < n; ++j) {
    if (m[0][j].is_zero()) continue;
    GroupRingMatrix minor;
    for (size_t i = 1; i < n; ++i) {
      std::vector<GroupRingElem> row;
      for (size_t jj = 0; jj < n; ++jj)
        if (jj != j) row.push_back(m[i][jj]);
      minor.push_back(row);
    }
    const GroupRingElem term = m[0][j] * determinant(minor);
    det = (j % 2 == 0) ? det + term : det - term;
  }
  return det;
}

bool fitting_membership(const GroupRingElem& x, const GroupRingMatrix& M, int a) {
  require_padic(x);
  const size_t r = M.size();
  const size_t s = r == 0 ? 0 : M[0].size();
  if (a < 0 || static_cast<size_t>(a) >= s) throw Error(ErrorKind::IndexOutOfRange, "Fitting index outside [0, s)");
  for (const auto& row : M) {
    if (row.size() != s) throw Error(ErrorKind::InvalidArgument, "ragged presentation matrix");
    for (const auto& e : row)
      if (e.group() != x.group() || !(e.scalars() == x.scalars()))
        throw Error(ErrorKind::InvalidArgument, "matrix entries over a different ring");
  }
  const size_t m = s - static_cast<size_t>(a);
  if (m > r) return x.is_zero();
  std::vector<GroupRingElem> minors;
  std::vector<bool> rsel(r, false), csel(s, false);
  std::fill(rsel.begin(), rsel.begin() + static_cast<std::ptrdiff_t>(m), true);
  do {
    std::fill(csel.begin(), csel.end(), false);
    std::fill(csel.begin(), csel.begin() + static_cast<std::ptrdiff_t>(m), true);
    do {
      GroupRingMatrix sub;
      for (size_t i = 0; i < r; ++i) {
        if (!rsel[i]) continue;
        std::vector<GroupRingElem> row;
        for (size_t j = 0; j < s; ++j)
          if (csel[j]) row.push_back(M[i][j]);
        sub.push_back(row);
      }
      minors.push_back(determinant(sub));
    } while (std::prev_permutation(csel.begin(), csel.end()));
  } while (std::prev_permutation(rsel.begin(), rsel.end()));
  return in_span_mod_pk(ideal_span(minors), integer_coeffs(x), x.scalars().p, x.scalars().k);
}

UnitSumResult unit_sum_element(int64_t c, const std::function<int64_t(size_t)>& conductor, int64_t p, int i,
                               const AbGroup& group, const std::map<int64_t, std::vector<size_t>>& subgroups) {
  if (!nt::is_squarefree(c)) throw Error(ErrorKind::NotSquarefree, "c must be squarefree");
  if (p == 2) throw Error(ErrorKind::EvenPrime, "p must be odd");
  if (i != 1 && i != 2) throw Error(ErrorKind::InvalidArgument, "i must be 1 or 2");
  const size_t n = group.size();
  std::vector<int64_t> cond(n);
  for (size_t k = 0; k < n; ++k) {
    cond[k] = conductor(k);
    if (cond[k] < 1 || c % cond[k] != 0)
      throw Error(ErrorKind::HypothesisViolated, "c_psi must divide c for every character");
  }
  for (int64_t d : nt::divisors(c)) {
    auto it = subgroups.find(d);
    if (it == subgroups.end()) throw Error(ErrorKind::HypothesisViolated, "no subgroup H_" + std::to_string(d));
    const auto& H = it->second;
    const std::set<size_t> hs(H.begin(), H.end());
    if (group.subgroup(H) != std::vector<size_t>(hs.begin(), hs.end()))
      throw Error(ErrorKind::HypothesisViolated, "H_" + std::to_string(d) + " is not a subgroup");
    for (size_t k = 0; k < n; ++k) {
      const bool in_kernel = std::all_of(H.begin(), H.end(), [&](size_t h) { return group.pairing(k, h) == 0; });
      if ((d % cond[k] == 0) != in_kernel)
        throw Error(ErrorKind::HypothesisViolated, "condition (i) fails for d = " + std::to_string(d));
    }
    int64_t bound = 1;
    for (int64_t ell : nt::prime_divisors(c / d)) bound *= ell + (i == 1 ? -1 : 1);
    if (bound % static_cast<int64_t>(hs.size()) != 0)
      throw Error(ErrorKind::HypothesisViolated, "condition (ii) fails for d = " + std::to_string(d));
  }
  const int64_t e = group.exponent();
  std::vector<Rational> weight(n);
  for (size_t k = 0; k < n; ++k) {
    Rational w = make_rational(cond[k], c);
    if (c % p == 0 && cond[k] % p != 0) w *= p;
    weight[k] = i == 1 ? w : w * w;
  }
  std::vector<Rational> coeffs(n);
  for (size_t g = 0; g < n; ++g) {
    CycloAccumulator acc(e);
    for (size_t k = 0; k < n; ++k) acc.add(nt::mod(-group.pairing(k, g), e), weight[k]);
    const CycloElem v = acc.finish();
    if (!v.is_rational()) throw Error(ErrorKind::InvalidArgument, "character sum is not rational");
    coeffs[g] = v.rational_part() / static_cast<long>(n);
  }
  UnitSumResult out{GroupRingElem(group, coeffs), {}};
  out.verdict = padic_integrality_and_unit(out.element, p);
  return out;
}

}  // namespace thetalab
