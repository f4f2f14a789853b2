#include "thetalab/lvalues.hpp"

#include <algorithm>
#include <numeric>

#include "thetalab/error.hpp"
#include "thetalab/ntheory.hpp"

namespace thetalab {

namespace mp = boost::multiprecision;

namespace {

std::vector<int64_t> compute_an(const CurveQ& e, const std::vector<int64_t>& bad, int64_t M) {
  std::vector<int64_t> an(static_cast<size_t>(M) + 1, 0);
  if (M < 1) return an;
  std::vector<int64_t> spf(static_cast<size_t>(M) + 1, 0);
  for (int64_t i = 2; i <= M; ++i) {
    if (spf[i] != 0) continue;
    for (int64_t j = i; j <= M; j += i)
      if (spf[j] == 0) spf[j] = i;
  }
  an[1] = 1;
  for (int64_t p = 2; p <= M; ++p) {
    if (spf[p] != p) continue;
    const bool is_bad = std::binary_search(bad.begin(), bad.end(), p);
    const int64_t ap = is_bad ? tate_local(e, p).ap : ap_count(e, p);
    int64_t prev2 = 1, prev = ap;
    an[p] = ap;
    for (int64_t q = p; q <= M / p;) {
      q *= p;
      const int64_t next = is_bad ? prev * ap : ap * prev - p * prev2;
      an[q] = next;
      prev2 = prev;
      prev = next;
    }
  }
  for (int64_t n = 2; n <= M; ++n) {
    const int64_t p = spf[n];
    int64_t q = 1, m = n;
    while (m % p == 0) {
      m /= p;
      q *= p;
    }
    if (m > 1) an[n] = an[q] * an[m];
  }
  return an;
}

Real analytic_scale(int64_t level, int64_t f) { return Real(f) * mp::sqrt(Real(level)); }

std::vector<Complex> char_table(const DirichletChar& chi) {
  const int64_t f = chi.modulus();
  std::vector<Complex> t(static_cast<size_t>(f));
  for (int64_t a = 0; a < f; ++a) {
    auto e = chi.exponent_at(a);
    if (e) t[a] = root_of_unity(*e, chi.order());
  }
  return t;
}

}  // namespace

LSeriesData an_coeffs(const CurveQ& curve, int64_t M) {
  if (M > kMaxCoefficients) throw Error(ErrorKind::BoundTooLarge, "coefficient bound " + std::to_string(M));
  const CurveQ e = minimal_model(curve);
  LSeriesData d{e, conductor(e), {}, bad_primes(e)};
  // enough terms to separate the two signs of the functional equation
  const int64_t m_root = terms_needed(d.level, 1, Real("1e-24")) * 3 / 2 + 10;
  d.an = compute_an(e, d.bad, std::max(M, m_root));
  d.root_number = numerical_root_number(d);
  d.an.resize(static_cast<size_t>(std::max<int64_t>(M, 1)) + 1);
  return d;
}

int64_t terms_needed(int64_t level, int64_t chi_conductor, const Real& tol) {
  const Real X = analytic_scale(level, chi_conductor);
  const Real step = 2 * real_pi() / X;
  const Real q = mp::exp(-step);
  // 4 q^(M+1) / (1 - q) < tol / 2
  const Real need = mp::log(8 / (tol * (1 - q))) / step;
  const Real m = mp::ceil(need);
  if (m > Real(kMaxCoefficients)) return kMaxCoefficients + 1;
  return std::max<int64_t>(static_cast<int64_t>(m), 1);
}

Complex twist_root_number(int root_number, int64_t level, const DirichletChar& chi) {
  const DirichletChar prim = chi.primitive();
  const int64_t f = prim.modulus();
  if (std::gcd(f, level) != 1) throw Error(ErrorKind::ChiNotCoprimeToLevel, "conductor of chi shares a prime with N");
  const auto table = char_table(prim);
  Complex tau;
  for (int64_t a = 1; a <= f; ++a) tau += table[nt::mod(a, f)] * root_of_unity(a, f);
  const Complex chiN = table[nt::mod(level, f)];
  return chiN * tau * tau * Real(root_number) * (Real(1) / Real(f));
}

Complex split_lvalue(const LSeriesData& data, const DirichletChar& prim, const Complex& w, const Real& A) {
  const int64_t f = prim.modulus();
  const Real X = analytic_scale(data.level, f);
  const auto table = char_table(prim);
  const Real q1 = mp::exp(-2 * real_pi() * A / X), q2 = mp::exp(-2 * real_pi() / (A * X));
  Complex s1, s2;
  Real p1 = 1, p2 = 1;
  for (int64_t n = 1; n <= data.bound(); ++n) {
    p1 *= q1;
    p2 *= q2;
    if (data.an[n] == 0) continue;
    const Complex& c = table[nt::mod(n, f)];
    const Real a = Real(data.an[n]) / Real(n);
    s1 += c * (a * p1);
    s2 += c.conj() * (a * p2);
  }
  return s1 + w * s2;
}

int numerical_root_number(const LSeriesData& data) {
  const DirichletChar triv(1);
  Real best_gap = -1;
  int best = 0;
  for (int w : {1, -1}) {
    const Complex a = split_lvalue(data, triv, Complex(Real(w)), Real(1));
    const Complex b = split_lvalue(data, triv, Complex(Real(w)), Real("1.25"));
    const Real gap = (a - b).abs();
    if (best_gap < 0 || gap < best_gap) {
      best_gap = gap;
      best = w;
    }
  }
  if (best_gap > Real("1e-15"))
    throw Error(ErrorKind::ToleranceUnreachable, "functional equation not satisfied for either sign");
  return best;
}

ApproxValue twisted_lvalue(const LSeriesData& data, const DirichletChar& chi, const std::vector<int64_t>& truncate_at,
                           const Real& tol) {
  const DirichletChar prim = chi.primitive();
  const int64_t f = prim.modulus();
  if (std::gcd(f, data.level) != 1) throw Error(ErrorKind::ChiNotCoprimeToLevel, "conductor of chi shares a prime with N");
  if (tol < Real("1e-28")) throw Error(ErrorKind::ToleranceUnreachable, "tolerance below working precision");
  const int64_t M = terms_needed(data.level, f, tol);
  if (M > kMaxCoefficients) throw Error(ErrorKind::ToleranceUnreachable, "too many terms required");
  const LSeriesData* use = &data;
  LSeriesData longer = data;
  if (data.bound() < M) {
    longer.an = compute_an(data.curve, data.bad, M);
    use = &longer;
  }
  LSeriesData trimmed = *use;
  trimmed.an.resize(static_cast<size_t>(M) + 1);
  const Complex w = twist_root_number(data.root_number, data.level, prim);
  ApproxValue out;
  out.value = split_lvalue(trimmed, prim, w, Real(1));
  const Real q = mp::exp(-2 * real_pi() / analytic_scale(data.level, f));
  out.error_bound = 4 * mp::pow(q, M + 1) / (1 - q) + Real("1e-30") * Real(M);

  std::vector<int64_t> primes = truncate_at;
  std::sort(primes.begin(), primes.end());
  primes.erase(std::unique(primes.begin(), primes.end()), primes.end());
  for (int64_t ell : primes) {
    if (f % ell == 0) continue;
    const Complex c = root_of_unity(*prim.exponent_at(ell), prim.order());
    const bool is_bad = std::binary_search(data.bad.begin(), data.bad.end(), ell);
    const int64_t al = is_bad ? tate_local(data.curve, ell).ap : ap_count(data.curve, ell);
    Complex factor = Complex(1) - c * (Real(al) / Real(ell));
    if (!is_bad) factor += c * c * (Real(1) / Real(ell));
    out.value = out.value * factor;
    out.error_bound *= factor.abs();
  }
  return out;
}

Complex embed_complex(const CycloElem& x) {
  Complex z;
  for (size_t j = 0; j < x.coeffs().size(); ++j) {
    const Rational& q = x.coeffs()[j];
    if (q == 0) continue;
    const Real r = Real(q.get_num().get_str()) / Real(q.get_den().get_str());
    z += root_of_unity(static_cast<long long>(j), x.level()) * r;
  }
  return z;
}

CycloElem recognize_cyclotomic(const Complex& v, int64_t n, int64_t max_den, const Real& tol) {
  const size_t deg = static_cast<size_t>(nt::euler_phi(n));
  const size_t d = deg + 1;
  const Real K = Real("1e18");
  // rows: (unit vector | K Re, K Im) of v, -1, -zeta, ..., -zeta^(deg-1)
  std::vector<std::vector<Real>> b(d, std::vector<Real>(d + 2, Real(0)));
  for (size_t i = 0; i < d; ++i) b[i][i] = 1;
  b[0][d] = K * v.re;
  b[0][d + 1] = K * v.im;
  for (size_t j = 0; j < deg; ++j) {
    const Complex z = root_of_unity(static_cast<long long>(j), n);
    b[j + 1][d] = -K * z.re;
    b[j + 1][d + 1] = -K * z.im;
  }
  auto dot = [](const std::vector<Real>& x, const std::vector<Real>& y) {
    Real s = 0;
    for (size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
    return s;
  };
  // LLL with delta = 0.99, Gram-Schmidt recomputed after each change (small dimension)
  std::vector<std::vector<Real>> bs;
  std::vector<std::vector<Real>> mu;
  auto gram_schmidt = [&]() {
    bs = b;
    mu.assign(d, std::vector<Real>(d, Real(0)));
    for (size_t i = 0; i < d; ++i)
      for (size_t j = 0; j < i; ++j) {
        mu[i][j] = dot(b[i], bs[j]) / dot(bs[j], bs[j]);
        for (size_t t = 0; t < bs[i].size(); ++t) bs[i][t] -= mu[i][j] * bs[j][t];
      }
  };
  gram_schmidt();
  size_t k = 1;
  int guard = 0;
  while (k < d && ++guard < 100000) {
    for (size_t j = k; j-- > 0;) {
      const Real q = boost::multiprecision::round(mu[k][j]);
      if (q != 0) {
        for (size_t t = 0; t < b[k].size(); ++t) b[k][t] -= q * b[j][t];
        gram_schmidt();
      }
    }
    if (dot(bs[k], bs[k]) >= (Real("0.99") - mu[k][k - 1] * mu[k][k - 1]) * dot(bs[k - 1], bs[k - 1])) {
      ++k;
    } else {
      std::swap(b[k], b[k - 1]);
      gram_schmidt();
      k = std::max<size_t>(k - 1, 1);
    }
  }
  bool found = false;
  CycloElem best(n);
  Real best_err = 0;
  for (const auto& row : b) {
    const Real a0 = boost::multiprecision::round(row[0]);
    if (a0 == 0 || boost::multiprecision::abs(a0) > max_den) continue;
    std::vector<Rational> coeffs(deg);
    const long den = static_cast<long>(a0);
    for (size_t j = 0; j < deg; ++j) {
      const long num = static_cast<long>(boost::multiprecision::round(row[j + 1]));
      coeffs[j] = Rational(num, den);
      coeffs[j].canonicalize();
    }
    const CycloElem x(n, coeffs);
    const Real err = (embed_complex(x) - v).abs();
    if (!found || err < best_err) {
      found = true;
      best = x;
      best_err = err;
    }
  }
  if (!found || best_err > tol)
    throw Error(ErrorKind::RecognitionFailed, "no element of Q(zeta_" + std::to_string(n) + ") with denominator <= " +
                                                  std::to_string(max_den) + " within tolerance");
  return best;
}

EquivarianceResult galois_equivariance_check(const CurveQ& curve, const std::vector<DirichletChar>& orbit,
                                             const Real& tol, int64_t max_den) {
  if (orbit.empty()) throw Error(ErrorKind::InvalidArgument, "empty orbit");
  const DirichletChar& chi = orbit.front();
  const int64_t n = chi.order();
  EquivarianceResult r;
  for (const auto& psi : orbit) {
    if (!psi.is_even() || psi.modulus() != chi.modulus()) throw Error(ErrorKind::InvalidArgument, "orbit of even characters mod c");
    int64_t t = -1;
    for (int64_t u : nt::units_mod(n == 1 ? 2 : n))
      if (chi.power(u) == psi) {
        t = u;
        break;
      }
    if (t < 0) throw Error(ErrorKind::InvalidArgument, psi.to_string() + " is not conjugate to " + chi.to_string());
    r.exponents.push_back(n == 1 ? 1 : t);
  }
  const LSeriesData data = an_coeffs(curve, 10);
  const Real omega = real_period(curve).omega_plus;
  for (const auto& psi : orbit) {
    const ApproxValue L = twisted_lvalue(data, psi.conj(), {}, Real("1e-25"));
    if (L.value.abs() < std::max(10 * L.error_bound, tol))
      throw Error(ErrorKind::ValueVanishes, "L(A, " + psi.conj().to_string() + ", 1) vanishes numerically");
    r.values.push_back(L.value * embed_complex(tau_star(psi.primitive(), psi.conductor())) * (Real(1) / omega));
  }
  r.recognized = recognize_cyclotomic(r.values.front(), n, max_den, Real("1e-15"));
  r.pass = true;
  for (size_t i = 0; i < orbit.size(); ++i) {
    const Real gap = (embed_complex(r.recognized.galois(r.exponents[i])) - r.values[i]).abs();
    r.discrepancy.push_back(gap);
    if (!(gap < tol)) r.pass = false;
  }
  return r;
}

}  // namespace thetalab
