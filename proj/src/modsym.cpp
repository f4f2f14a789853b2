#include "thetalab/modsym.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numeric>

#include "thetalab/characters.hpp"
#include "thetalab/error.hpp"
#include "thetalab/lvalues.hpp"
#include "thetalab/ntheory.hpp"

namespace thetalab {

namespace {

// Union-find over generators with signs: x = sign * parent.
struct SignedUnionFind {
  std::vector<size_t> parent;
  std::vector<int> sign;
  std::vector<bool> zero;

  explicit SignedUnionFind(size_t n) : parent(n), sign(n, 1), zero(n, false) {
    std::iota(parent.begin(), parent.end(), size_t{0});
  }

  std::pair<size_t, int> find(size_t x) {
    int s = 1;
    size_t r = x;
    while (parent[r] != r) {
      s *= sign[r];
      r = parent[r];
    }
    // path compression
    int t = s;
    while (parent[x] != x) {
      const size_t next = parent[x];
      const int sx = sign[x];
      parent[x] = r;
      sign[x] = t;
      t *= sx;
      x = next;
    }
    return {r, s};
  }

  // impose x = t * y
  void unite(size_t x, size_t y, int t) {
    auto [rx, sx] = find(x);
    auto [ry, sy] = find(y);
    const int rel = sx * t * sy;  // rx = rel * ry
    if (rx == ry) {
      if (rel == -1) zero[rx] = true;
      return;
    }
    parent[rx] = ry;
    sign[rx] = rel;
    if (zero[rx]) zero[ry] = true;
  }
};

int64_t cusp_inverse(int64_t p, int64_t q) {
  if (q == 0) return p;  // p = +-1
  if (q == 1) return 0;
  return nt::inv_mod(p, q);
}

}  // namespace

ManinSymbolSpace::ManinSymbolSpace(int64_t N, int64_t max_level) : level_(N) {
  if (N < 1) throw Error(ErrorKind::InvalidArgument, "level must be positive");
  if (N > max_level) throw Error(ErrorKind::LevelTooLarge, "level " + std::to_string(N) + " exceeds " + std::to_string(max_level));

  // P^1(Z/N) by orbits under scaling by units
  const auto units = nt::units_mod(N);
  table_.assign(static_cast<size_t>(N * N), -1);
  for (int64_t c = 0; c < N; ++c)
    for (int64_t d = 0; d < N; ++d) {
      if (table_[c * N + d] != -1) continue;
      if (std::gcd(std::gcd(c, d), N) != 1) continue;
      const auto idx = static_cast<int32_t>(gens_.size());
      gens_.emplace_back(c, d);
      for (int64_t u : units) table_[nt::mul_mod(u, c, N) * N + nt::mul_mod(u, d, N)] = idx;
    }
  const size_t n = gens_.size();

  // two-term relations and the star involution
  SignedUnionFind uf(n);
  for (size_t i = 0; i < n; ++i) {
    const auto [c, d] = gens_[i];
    uf.unite(i, index_of(d, -c), -1);
    uf.unite(i, index_of(-c, d), 1);
  }
  std::vector<long> root_col(n, -1);
  size_t ncols = 0;
  for (size_t i = 0; i < n; ++i) {
    auto [r, s] = uf.find(i);
    if (r == i && !uf.zero[i]) root_col[i] = static_cast<long>(ncols++);
  }
  auto column_of = [&](size_t i, int& sign) -> long {
    auto [r, s] = uf.find(i);
    sign = s;
    return uf.zero[r] ? -1 : root_col[r];
  };

  // three-term relations (c:d) + (d:-c-d) + (-c-d:c) on the reduced columns
  std::vector<bool> seen(n, false);
  std::vector<std::vector<Rational>> rows;
  for (size_t i = 0; i < n; ++i) {
    if (seen[i]) continue;
    const auto [c, d] = gens_[i];
    const size_t trio[3] = {i, index_of(d, -c - d), index_of(-c - d, c)};
    std::vector<Rational> row(ncols);
    bool nonzero = false;
    for (size_t j : trio) {
      seen[j] = true;
      int s;
      const long col = column_of(j, s);
      if (col < 0) continue;
      row[static_cast<size_t>(col)] += s;
    }
    for (const auto& x : row) nonzero = nonzero || x != 0;
    if (nonzero) rows.push_back(std::move(row));
  }
  QMatrix rel(rows.size(), ncols);
  for (size_t r = 0; r < rows.size(); ++r)
    for (size_t c = 0; c < ncols; ++c) rel(r, c) = rows[r][c];
  const auto pivots = rref(rel);
  std::vector<long> pivot_row(ncols, -1);
  for (size_t r = 0; r < pivots.size(); ++r) pivot_row[pivots[r]] = static_cast<long>(r);
  std::vector<size_t> free_cols;
  std::vector<long> free_index(ncols, -1);
  for (size_t c = 0; c < ncols; ++c)
    if (pivot_row[c] < 0) {
      free_index[c] = static_cast<long>(free_cols.size());
      free_cols.push_back(c);
    }
  // generator behind each column
  std::vector<size_t> col_gen(ncols);
  for (size_t i = 0; i < n; ++i)
    if (root_col[i] >= 0) col_gen[static_cast<size_t>(root_col[i])] = i;
  for (size_t c : free_cols) basis_gens_.push_back(col_gen[c]);

  std::vector<SparseVec> col_image(ncols);
  for (size_t c = 0; c < ncols; ++c) {
    if (free_index[c] >= 0) {
      col_image[c] = {{static_cast<size_t>(free_index[c]), Rational(1)}};
      continue;
    }
    const size_t r = static_cast<size_t>(pivot_row[c]);
    for (size_t f : free_cols)
      if (rel(r, f) != 0) col_image[c].emplace_back(static_cast<size_t>(free_index[f]), -rel(r, f));
  }
  images_.resize(n);
  for (size_t i = 0; i < n; ++i) {
    int s;
    const long col = column_of(i, s);
    if (col < 0) continue;
    images_[i] = col_image[static_cast<size_t>(col)];
    if (s < 0)
      for (auto& [k, v] : images_[i]) v = -v;
  }

  // boundary map and cuspidal subspace
  std::vector<std::pair<size_t, size_t>> ends;
  for (size_t g : basis_gens_) {
    const auto m = lift_to_sl2(gens_[g].first, gens_[g].second);
    // g{0, oo} = {b/d, a/c}
    const size_t to = find_or_add_cusp(m[0], m[2]);
    const size_t from = find_or_add_cusp(m[1], m[3]);
    ends.emplace_back(to, from);
  }
  boundary_ = QMatrix(cusps_.size(), basis_gens_.size());
  for (size_t j = 0; j < ends.size(); ++j) {
    boundary_(ends[j].first, j) += 1;
    boundary_(ends[j].second, j) -= 1;
  }
  cuspidal_ = kernel(boundary_);
}

std::shared_ptr<const ManinSymbolSpace> ManinSymbolSpace::get(int64_t N) {
  static std::mutex mu;
  static std::map<int64_t, std::shared_ptr<const ManinSymbolSpace>> cache;
  {
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(N);
    if (it != cache.end()) return it->second;
  }
  auto space = std::make_shared<const ManinSymbolSpace>(N);
  std::lock_guard<std::mutex> lock(mu);
  return cache.emplace(N, space).first->second;
}

size_t ManinSymbolSpace::index_of(int64_t c, int64_t d) const {
  const int64_t N = level_;
  const int32_t i = table_[nt::mod(c, N) * N + nt::mod(d, N)];
  if (i < 0) throw Error(ErrorKind::NotCoprime, "(c:d) is not a point of P^1(Z/N)");
  return static_cast<size_t>(i);
}

std::vector<Rational> ManinSymbolSpace::dense_image(int64_t c, int64_t d) const {
  std::vector<Rational> v(dimension());
  for (const auto& [k, x] : images_[index_of(c, d)]) v[k] += x;
  return v;
}

IntMat2 ManinSymbolSpace::lift_to_sl2(int64_t c, int64_t d) const {
  const int64_t N = level_;
  c = nt::mod(c, N);
  d = nt::mod(d, N);
  if (N == 1) return {1, 0, 0, 1};
  int64_t cc = c == 0 ? N : c;
  int64_t dd = d;
  while (std::gcd(cc, dd) != 1) dd += N;
  int64_t x, y;
  nt::ext_gcd(dd, cc, x, y);  // x dd + y cc = 1
  return {x, -y, cc, dd};
}

bool ManinSymbolSpace::cusps_equivalent(int64_t p1, int64_t q1, int64_t p2, int64_t q2) const {
  const int64_t s1 = cusp_inverse(p1, q1), s2 = cusp_inverse(p2, q2);
  const int64_t m = std::gcd(static_cast<int64_t>(static_cast<__int128>(q1) * q2 % level_), level_);
  const int64_t modulus = m == 0 ? level_ : m;
  return nt::mod(static_cast<int64_t>((static_cast<__int128>(s1) * q2 - static_cast<__int128>(s2) * q1) % modulus),
                 modulus) == 0;
}

size_t ManinSymbolSpace::find_or_add_cusp(int64_t p, int64_t q) {
  int64_t g = std::gcd(p, q);
  p /= g;
  q /= g;
  if (q < 0 || (q == 0 && p < 0)) {
    p = -p;
    q = -q;
  }
  for (size_t i = 0; i < cusps_.size(); ++i) {
    const auto [a, b] = cusps_[i];
    if (cusps_equivalent(p, q, a, b) || cusps_equivalent(-p, q, a, b)) return i;
  }
  cusps_.emplace_back(p, q);
  return cusps_.size() - 1;
}

size_t ManinSymbolSpace::cusp_index(int64_t p, int64_t q) const {
  int64_t g = std::gcd(p, q);
  p /= g;
  q /= g;
  if (q < 0 || (q == 0 && p < 0)) {
    p = -p;
    q = -q;
  }
  for (size_t i = 0; i < cusps_.size(); ++i) {
    const auto [a, b] = cusps_[i];
    if (cusps_equivalent(p, q, a, b) || cusps_equivalent(-p, q, a, b)) return i;
  }
  throw Error(ErrorKind::InvalidArgument, "unknown cusp");
}

std::vector<std::pair<size_t, int>> ManinSymbolSpace::manin_expansion(int64_t a, int64_t c) const {
  // consecutive convergents p/q -> p'/q' of a/c, starting from 0/1, 1/0
  std::vector<std::pair<size_t, int>> out;
  int64_t pp = 0, qp = 1, p = 1, q = 0;
  auto push = [&](int64_t p0, int64_t q0, int64_t p1, int64_t q1) {
    const int64_t eps = p1 * q0 - p0 * q1;  // +-1
    out.emplace_back(index_of(eps * q1, q0), 1);
  };
  push(pp, qp, p, q);
  int64_t num = a, den = c;
  while (den != 0) {
    int64_t t = num / den;
    if ((num % den != 0) && ((num < 0) != (den < 0))) --t;  // floor
    const int64_t r = num - t * den;
    const int64_t pn = t * p + pp, qn = t * q + qp;
    push(p, q, pn, qn);
    pp = p;
    qp = q;
    p = pn;
    q = qn;
    num = den;
    den = r;
  }
  return out;
}

std::vector<Rational> ManinSymbolSpace::path_from_infinity(int64_t a, int64_t c) const {
  if (c < 1) throw Error(ErrorKind::InvalidArgument, "denominator must be positive");
  if (std::gcd(a, c) != 1) throw Error(ErrorKind::NotCoprime, "gcd(a, c) != 1");
  std::vector<Rational> v(dimension());
  for (auto [i, s] : manin_expansion(a, c))
    for (const auto& [k, x] : images_[i]) v[k] += s * x;
  // {oo, a/c} = {0, a/c} - {0, oo}
  for (const auto& [k, x] : images_[index_of(0, 1)]) v[k] -= x;
  return v;
}

std::vector<IntMat2> heilbronn_matrices(int64_t ell) {
  std::vector<IntMat2> out;
  out.push_back({1, 0, 0, ell});
  if (ell == 2) {
    out.push_back({2, 0, 0, 1});
    out.push_back({2, 1, 0, 1});
    out.push_back({1, 0, 1, 2});
    return out;
  }
  for (int64_t r = -(ell / 2); r <= ell / 2; ++r) {
    int64_t x1 = ell, x2 = -r, y1 = 0, y2 = 1, a = -ell, b = r;
    out.push_back({x1, x2, y1, y2});
    while (b != 0) {
      const int64_t q = static_cast<int64_t>(std::llround(static_cast<double>(a) / static_cast<double>(b)));
      const int64_t c = a - b * q;
      a = -b;
      b = c;
      const int64_t x3 = q * x2 - x1;
      x1 = x2;
      x2 = x3;
      const int64_t y3 = q * y2 - y1;
      y1 = y2;
      y2 = y3;
      out.push_back({x1, x2, y1, y2});
    }
  }
  return out;
}

QMatrix ManinSymbolSpace::hecke_on_quotient(int64_t ell) const {
  if (!nt::is_prime(ell)) throw Error(ErrorKind::InvalidArgument, "Hecke index must be prime");
  if (level_ % ell == 0) throw Error(ErrorKind::PrimeDividesLevel, std::to_string(ell) + " divides the level");
  const auto hs = heilbronn_matrices(ell);
  const size_t dim = dimension();
  QMatrix t(dim, dim);
  for (size_t j = 0; j < dim; ++j) {
    const auto [c, d] = gens_[basis_gens_[j]];
    for (const auto& h : hs) {
      // (c:d) h = (c h00 + d h10 : c h01 + d h11)
      const int64_t u = c * h[0] + d * h[2], v = c * h[1] + d * h[3];
      for (const auto& [k, x] : images_[index_of(u, v)]) t(k, j) += x;
    }
  }
  return t;
}

QMatrix hecke_operator(const ManinSymbolSpace& space, int64_t ell) {
  const QMatrix t = space.hecke_on_quotient(ell);
  const auto& basis = space.cuspidal_basis();
  QMatrix out(basis.size(), basis.size());
  for (size_t j = 0; j < basis.size(); ++j) {
    std::vector<Rational> x;
    if (!solve_in_span(basis, t.apply(basis[j]), x))
      throw Error(ErrorKind::InvalidArgument, "Hecke operator does not preserve the cuspidal subspace");
    for (size_t i = 0; i < basis.size(); ++i) out(i, j) = x[i];
  }
  return out;
}

int64_t sturm_bound(int64_t N) {
  int64_t index = N;
  for (int64_t p : nt::prime_divisors(N)) index = index / p * (p + 1);
  return (index + 5) / 6;
}

ModularSymbolFunctional eigen_functional(std::shared_ptr<const ManinSymbolSpace> space, const CurveQ& curve,
                                         int64_t bound) {
  const int64_t N = space->level();
  const size_t dim = space->dimension();
  if (bound <= 0) bound = sturm_bound(N);
  const CurveQ e = minimal_model(curve);
  const Integer disc = e.discriminant();
  auto good = [&](int64_t ell) { return N % ell != 0 && mpz_divisible_ui_p(disc.get_mpz_t(), static_cast<unsigned long>(ell)) == 0; };

  // functionals f with f T = a f, kept as a basis of row vectors
  std::vector<std::vector<Rational>> span;
  for (size_t i = 0; i < dim; ++i) {
    std::vector<Rational> v(dim);
    v[i] = 1;
    span.push_back(v);
  }
  std::map<int64_t, QMatrix> hecke;
  for (int64_t ell : nt::primes_up_to(bound)) {
    if (!good(ell) || span.empty()) continue;
    const QMatrix t = space->hecke_on_quotient(ell) - QMatrix::identity(dim).scaled(ap_count(e, ell));
    QMatrix cond(dim, span.size());
    for (size_t j = 0; j < span.size(); ++j) {
      const auto img = t.apply_left(span[j]);
      for (size_t i = 0; i < dim; ++i) cond(i, j) = img[i];
    }
    std::vector<std::vector<Rational>> next;
    for (const auto& x : kernel(cond)) {
      std::vector<Rational> v(dim);
      for (size_t j = 0; j < span.size(); ++j)
        if (x[j] != 0)
          for (size_t i = 0; i < dim; ++i) v[i] += x[j] * span[j][i];
      next.push_back(v);
    }
    span = std::move(next);
  }
  if (span.empty()) throw Error(ErrorKind::NoEigenline, "no simultaneous eigenline for " + curve.ainvs_string() + " at level " + std::to_string(N));
  if (span.size() > 1)
    throw Error(ErrorKind::AmbiguousEigenline, std::to_string(span.size()) + "-dimensional eigenspace up to bound " + std::to_string(bound));

  ModularSymbolFunctional f;
  f.level = N;
  f.space = space;
  f.dual_vector = primitive_integral(span[0]);
  // the line must also carry the right eigenvalues past the bound
  for (int64_t ell : nt::primes_up_to(50)) {
    if (ell <= bound || !good(ell)) continue;
    const auto img = space->hecke_on_quotient(ell).apply_left(f.dual_vector);
    const Rational a = ap_count(e, ell);
    for (size_t i = 0; i < dim; ++i)
      if (img[i] != a * f.dual_vector[i])
        throw Error(ErrorKind::NoEigenline, "eigenvalue mismatch at " + std::to_string(ell));
  }
  f.symbol_values.resize(space->generators().size());
  for (size_t g = 0; g < f.symbol_values.size(); ++g)
    for (const auto& [k, x] : space->image(g)) f.symbol_values[g] += x * f.dual_vector[k];
  return f;
}

namespace {

Rational raw_value(const ModularSymbolFunctional& f, int64_t a, int64_t c) {
  if (c < 1) throw Error(ErrorKind::InvalidArgument, "denominator must be positive");
  if (c > 1 && std::gcd(a, c) != 1) throw Error(ErrorKind::NotCoprime, "gcd(a, c) != 1");
  const auto& space = *f.space;
  a = nt::mod(a, c);
  Rational s = 0;
  for (auto [i, sign] : space.manin_expansion(a, c)) s += sign * f.symbol_values[i];
  s -= f.symbol_values[space.index_of(0, 1)];
  return s;
}

Rational raw_regularized(const ModularSymbolFunctional& f, int64_t a, int64_t c) {
  if (!nt::is_squarefree(c)) throw Error(ErrorKind::NotSquarefree, "regularized symbols need squarefree c");
  if (std::gcd(a, c) != 1) throw Error(ErrorKind::NotCoprime, "gcd(a, c) != 1");
  Rational s = 0;
  for (int64_t t : nt::divisors(c)) {
    const int mu = nt::mobius(c / t);
    if (mu == 0) continue;
    const int64_t b = t == 1 ? 0 : nt::mul_mod(a, nt::inv_mod(c / t, t), t);
    s += mu * raw_value(f, b, t);
  }
  return s;
}

}  // namespace

Rational eval_plus_symbol(const ModularSymbolFunctional& f, int64_t a, int64_t c) { return f.scaling * raw_value(f, a, c); }

Rational regularized_symbol(const ModularSymbolFunctional& f, int64_t a, int64_t c) {
  if (c >= 1 && std::gcd(c, f.level) != 1)
    throw Error(ErrorKind::NotCoprimeToLevel, "c = " + std::to_string(c) + " shares a prime with N");
  return f.scaling * raw_regularized(f, a, c);
}

ModularSymbolFunctional normalize_functional(const ModularSymbolFunctional& f, const CurveQ& curve, int digits,
                                             int64_t max_c0) {
  const int64_t N = f.level;
  const Real tol = digits >= 24 ? Real("1e-20") : Real("1e-12");
  const Real vanish = Real("1e-10");
  const RealPeriods per = real_period(curve, std::min(digits, 30));
  const LSeriesData data = an_coeffs(curve, 1000);
  ModularSymbolFunctional out = f;

  const ApproxValue L = twisted_lvalue(data, DirichletChar(1), {}, tol);
  if (L.value.abs() > vanish) {
    bool found = false;
    const Real ratio = L.value.re / per.omega_plus;
    const Rational target = reconstruct_rational(static_cast<long double>(ratio), 1'000'000, 1e-12L, found);
    const Rational raw = raw_value(f, 0, 1);
    if (!found || raw == 0) throw Error(ErrorKind::ReconstructionFailed, "L(E,1)/Omega+ = " + to_decimal(ratio));
    out.scaling = target / raw;
    out.normalized = true;
    out.anchor = "L(E,1)/Omega+ = " + target.get_str();
    return out;
  }

  for (int64_t c0 = 2; c0 <= max_c0; ++c0) {
    if (!nt::is_squarefree(c0) || std::gcd(c0, N) != 1) continue;
    for (const auto& chi : enumerate_chars(c0, true)) {
      if (chi.is_trivial()) continue;
      const DirichletChar prim = chi.primitive();
      const ApproxValue Lc = twisted_lvalue(data, chi.conj(), nt::prime_divisors(c0), tol);
      if (Lc.value.abs() <= vanish) continue;
      // numeric tau_{c0}(chi)
      Complex tau;
      for (int64_t a = 1; a < c0; ++a)
        if (std::gcd(a, c0) == 1) tau += root_of_unity(*prim.exponent_at(a), prim.order()) * root_of_unity(a, c0);
      const Complex rhs = Lc.value * tau * (Real(c0) / Real(prim.modulus())) * (Real(1) / per.omega_plus);
      Complex lhs;
      for (int64_t a = 1; a < c0; ++a)
        if (std::gcd(a, c0) == 1)
          lhs += root_of_unity(*chi.exponent_at(a), chi.order()) * Real(raw_regularized(f, a, c0).get_d());
      if (lhs.abs() < Real("1e-9")) continue;
      const Complex ratio = rhs / lhs;
      bool found = false;
      const Rational s = reconstruct_rational(static_cast<long double>(ratio.re), 1'000'000, 1e-9L, found);
      if (!found || boost::multiprecision::abs(ratio.im) > Real("1e-9"))
        throw Error(ErrorKind::ReconstructionFailed, "twisted anchor at c0 = " + std::to_string(c0));
      out.scaling = s;
      out.normalized = true;
      out.anchor = "chi mod " + std::to_string(c0) + " " + chi.to_string();
      return out;
    }
  }
  throw Error(ErrorKind::AllTwistsVanish, "no nonvanishing even twist with c0 <= " + std::to_string(max_c0));
}

Integer denominator_bound(const ModularSymbolFunctional& f, int64_t max_c) {
  Integer D = 1;
  for (int64_t c = 1; c <= max_c; ++c)
    for (int64_t a = 0; a < c; ++a) {
      if (c > 1 && std::gcd(a, c) != 1) continue;
      const Rational v = eval_plus_symbol(f, a, c);
      mpz_lcm(D.get_mpz_t(), D.get_mpz_t(), v.get_den().get_mpz_t());
    }
  return D;
}

}  // namespace thetalab
