#include "thetalab/curve.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "thetalab/error.hpp"
#include "thetalab/ntheory.hpp"

namespace thetalab {

namespace {

int64_t mod_small(const Integer& a, int64_t p) {
  Integer r;
  mpz_fdiv_r_ui(r.get_mpz_t(), a.get_mpz_t(), static_cast<unsigned long>(p));
  return r.get_si();
}

int64_t val(const Integer& a, int64_t p) { return padic_valuation(a, p); }

Integer ipow(int64_t p, unsigned long e) {
  Integer r;
  mpz_ui_pow_ui(r.get_mpz_t(), static_cast<unsigned long>(p), e);
  return r;
}

Integer exact_div(const Integer& a, const Integer& b) {
  if (!mpz_divisible_p(a.get_mpz_t(), b.get_mpz_t()))
    throw Error(ErrorKind::InvalidCurve, "internal: Tate step lost integrality");
  Integer q;
  mpz_divexact(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return q;
}

Integer fdiv(const Integer& a, long b) {
  Integer q;
  Integer bb(b);
  mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), bb.get_mpz_t());
  return q;
}

// Roots in F_p of a polynomial (lowest degree first) with their
// multiplicities, by Taylor shift at every residue.
std::vector<std::pair<int64_t, int>> roots_mod_p(const std::vector<Integer>& poly, int64_t p) {
  std::vector<int64_t> c;
  for (const auto& x : poly) c.push_back(mod_small(x, p));
  std::vector<std::pair<int64_t, int>> out;
  const size_t deg = c.size() - 1;
  for (int64_t a = 0; a < p; ++a) {
    // Taylor coefficients of P at a, by repeated division by (T - a)
    std::vector<int64_t> work = c;
    int mult = 0;
    for (size_t k = 0; k <= deg; ++k) {
      int64_t rem = 0;
      std::vector<int64_t> quot(work.size() > 1 ? work.size() - 1 : 0);
      for (size_t i = work.size(); i-- > 0;) {
        const int64_t cur = nt::mod(work[i] + nt::mul_mod(rem, a, p), p);
        if (i > 0) quot[i - 1] = cur;
        rem = cur;
      }
      if (rem != 0) break;
      ++mult;
      work = quot;
      if (work.empty()) break;
    }
    if (mult > 0) out.push_back({a, mult});
  }
  return out;
}

std::optional<int64_t> double_root(const std::vector<Integer>& poly, int64_t p) {
  if (poly.size() == 3 && p > 2 && mod_small(poly[2], p) != 0) {
    // a x^2 + b x + c has a double root iff b^2 - 4ac vanishes mod p
    const Integer disc = poly[1] * poly[1] - 4 * poly[0] * poly[2];
    if (mod_small(disc, p) != 0) return std::nullopt;
    const int64_t a = mod_small(poly[2], p), b = mod_small(poly[1], p);
    return nt::mod(-b * nt::inv_mod(nt::mod(2 * a, p), p) % p, p);
  }
  for (auto [r, m] : roots_mod_p(poly, p))
    if (m >= 2) return r;
  return std::nullopt;
}

bool has_root(const std::vector<Integer>& poly, int64_t p) {
  if (poly.size() == 3 && p > 2 && mod_small(poly[2], p) != 0) {
    const Integer disc = poly[1] * poly[1] - 4 * poly[0] * poly[2];
    return nt::legendre(mod_small(disc, p), p) >= 0;
  }
  return !roots_mod_p(poly, p).empty();
}

std::vector<int64_t> prime_factors(Integer n) {
  if (n < 0) n = -n;
  std::vector<int64_t> out;
  if (n == 0) return out;
  for (int64_t d = 2; d < 10000000; ++d) {
    if (n == 1) break;
    if (mpz_probab_prime_p(n.get_mpz_t(), 30) != 0 && mpz_fits_slong_p(n.get_mpz_t())) break;
    if (Integer(d) * d > n) {
      out.push_back(n.get_si());
      n = 1;
      break;
    }
    if (mpz_divisible_ui_p(n.get_mpz_t(), static_cast<unsigned long>(d))) {
      out.push_back(d);
      while (mpz_divisible_ui_p(n.get_mpz_t(), static_cast<unsigned long>(d))) n /= d;
    }
  }
  if (n != 1) {
    if (!mpz_fits_slong_p(n.get_mpz_t()) || mpz_probab_prime_p(n.get_mpz_t(), 30) == 0)
      throw Error(ErrorKind::BoundTooLarge, "discriminant has a large composite cofactor");
    out.push_back(n.get_si());
  }
  return out;
}

struct TateResult {
  ReductionData data;
  bool minimal = true;
};

// Tate's algorithm at p. When the model is not minimal at p the curve is
// replaced by the scaled model and the loop restarts, unless `allow_scale`
// is false.
TateResult tate(CurveQ& e, int64_t p, bool allow_scale) {
  TateResult res;
  res.data.prime = p;
  for (;;) {
    const Integer disc = e.discriminant();
    const int64_t n = val(disc, p);
    res.data.discriminant_valuation = n;
    if (n == 0) {
      res.data.kodaira = "I0";
      res.data.kind = ReductionKind::Good;
      res.data.conductor_exponent = 0;
      res.data.tamagawa = 1;
      return res;
    }

    // move the singular point of the reduction to (0,0)
    {
      std::optional<std::pair<int64_t, int64_t>> sing;
      const int64_t a1 = mod_small(e.a1(), p), a2 = mod_small(e.a2(), p), a3 = mod_small(e.a3(), p);
      const int64_t a4 = mod_small(e.a4(), p), a6 = mod_small(e.a6(), p);
      if (p >= 5) {
        // double root of the short model x^3 - 27 c4 x - 54 c6, mapped back
        // through x' = 36 x + 3 b2
        const int64_t c4 = mod_small(e.c4(), p), c6 = mod_small(e.c6(), p), b2 = mod_small(e.b2(), p);
        const int64_t xs = c4 == 0 ? 0 : nt::mod(-3 * nt::mul_mod(c6, nt::inv_mod(c4, p), p), p);
        const int64_t x = nt::mul_mod(nt::mod(xs - 3 * b2, p), nt::inv_mod(36 % p, p), p);
        const int64_t y = nt::mul_mod(nt::mod(-(nt::mul_mod(a1, x, p) + a3), p), nt::inv_mod(2, p), p);
        const int64_t f = nt::mod(nt::mul_mod(y, y, p) + nt::mul_mod(nt::mul_mod(a1, x, p), y, p) + nt::mul_mod(a3, y, p) -
                                      nt::mul_mod(nt::mul_mod(x, x, p), nt::mod(x + a2, p), p) - nt::mul_mod(a4, x, p) - a6,
                                  p);
        if (f != 0) throw Error(ErrorKind::InvalidCurve, "internal: singular point off the curve");
        sing = {x, y};
      }
      for (int64_t x = 0; x < p && !sing; ++x) {
        std::vector<int64_t> ys;
        if (p == 2) {
          ys = {0, 1};
        } else {
          ys = {nt::mod(-(a1 * x + a3) * nt::inv_mod(2, p), p)};
        }
        for (int64_t y : ys) {
          const int64_t f = nt::mod(y * y + a1 * x % p * y + a3 * y - x * x % p * x - a2 * x % p * x - a4 * x - a6, p);
          const int64_t fx = nt::mod(a1 * y - 3 * x % p * x - 2 * a2 * x - a4, p);
          const int64_t fy = nt::mod(2 * y + a1 * x + a3, p);
          if (f == 0 && fx == 0 && fy == 0) {
            sing = {x, y};
            break;
          }
        }
      }
      if (!sing) throw Error(ErrorKind::InvalidCurve, "internal: no singular point modulo p");
      e = change_coordinates(e, Integer(sing->first), 0, Integer(sing->second));
    }

    if (mod_small(e.b2(), p) != 0) {
      const bool split = has_root({-e.a2(), e.a1(), Integer(1)}, p);
      res.data.kind = split ? ReductionKind::SplitMultiplicative : ReductionKind::NonsplitMultiplicative;
      res.data.kodaira = "I" + std::to_string(n);
      res.data.conductor_exponent = 1;
      res.data.tamagawa = split ? n : (n % 2 == 1 ? 1 : 2);
      return res;
    }
    res.data.kind = ReductionKind::Additive;
    if (val(e.a6(), p) < 2) {
      res.data.kodaira = "II";
      res.data.conductor_exponent = static_cast<int>(n);
      res.data.tamagawa = 1;
      return res;
    }
    if (val(e.b8(), p) < 3) {
      res.data.kodaira = "III";
      res.data.conductor_exponent = static_cast<int>(n - 1);
      res.data.tamagawa = 2;
      return res;
    }
    const Integer P = p, P2 = ipow(p, 2), P3 = ipow(p, 3);
    if (val(e.b6(), p) < 3) {
      res.data.kodaira = "IV";
      res.data.conductor_exponent = static_cast<int>(n - 2);
      res.data.tamagawa = has_root({-exact_div(e.a6(), P2), exact_div(e.a3(), P), Integer(1)}, p) ? 3 : 1;
      return res;
    }

    // p | a1, a2; p^2 | a3, a4; p^3 | a6
    {
      auto alpha = double_root({-e.a2(), e.a1(), Integer(1)}, p);
      if (!alpha) throw Error(ErrorKind::InvalidCurve, "internal: tangent cone is not a square");
      e = change_coordinates(e, 0, Integer(*alpha), 0);
      auto beta = double_root({-exact_div(e.a6(), P2), exact_div(e.a3(), P), Integer(1)}, p);
      if (!beta) throw Error(ErrorKind::InvalidCurve, "internal: expected a double root");
      e = change_coordinates(e, 0, 0, P * *beta);
    }

    std::vector<Integer> cubic = {exact_div(e.a6(), P3), exact_div(e.a4(), P2), exact_div(e.a2(), P), Integer(1)};
    auto roots = roots_mod_p(cubic, p);
    int maxmult = 0;
    int64_t multiple_root = 0;
    for (auto [r, m] : roots)
      if (m > maxmult) {
        maxmult = m;
        multiple_root = r;
      }

    if (maxmult <= 1) {
      res.data.kodaira = "I0*";
      res.data.conductor_exponent = static_cast<int>(n - 4);
      res.data.tamagawa = 1 + static_cast<int64_t>(roots.size());
      return res;
    }
    if (maxmult == 2) {
      e = change_coordinates(e, P * multiple_root, 0, 0);
      int ix = 3, iy = 3;
      Integer mx = P2, my = P2;
      int64_t c = 0;
      for (;;) {
        Integer a2t = exact_div(e.a2(), P), a3t = exact_div(e.a3(), my);
        Integer a6t = exact_div(e.a6(), mx * my);
        auto b = double_root({-a6t, a3t, Integer(1)}, p);
        if (!b) {
          c = has_root({-a6t, a3t, Integer(1)}, p) ? 4 : 2;
          break;
        }
        e = change_coordinates(e, 0, 0, my * *b);
        my *= p;
        ++iy;
        a2t = exact_div(e.a2(), P);
        Integer a4t = exact_div(e.a4(), P * mx);
        a6t = exact_div(e.a6(), mx * my);
        auto g = double_root({a6t, a4t, a2t}, p);
        if (!g) {
          c = has_root({a6t, a4t, a2t}, p) ? 4 : 2;
          break;
        }
        e = change_coordinates(e, mx * *g, 0, 0);
        mx *= p;
        ++ix;
      }
      const int m = ix + iy - 5;
      res.data.kodaira = "I" + std::to_string(m) + "*";
      res.data.conductor_exponent = static_cast<int>(n - m - 4);
      res.data.tamagawa = c;
      return res;
    }

    // triple root
    e = change_coordinates(e, P * multiple_root, 0, 0);
    const Integer P4 = ipow(p, 4);
    std::vector<Integer> quad = {-exact_div(e.a6(), P4), exact_div(e.a3(), P2), Integer(1)};
    auto b = double_root(quad, p);
    if (!b) {
      res.data.kodaira = "IV*";
      res.data.conductor_exponent = static_cast<int>(n - 6);
      res.data.tamagawa = has_root(quad, p) ? 3 : 1;
      return res;
    }
    e = change_coordinates(e, 0, 0, P2 * *b);
    if (val(e.a4(), p) < 4) {
      res.data.kodaira = "III*";
      res.data.conductor_exponent = static_cast<int>(n - 7);
      res.data.tamagawa = 2;
      return res;
    }
    if (val(e.a6(), p) < 6) {
      res.data.kodaira = "II*";
      res.data.conductor_exponent = static_cast<int>(n - 8);
      res.data.tamagawa = 1;
      return res;
    }
    res.minimal = false;
    if (!allow_scale) return res;
    std::array<Integer, 5> scaled = {exact_div(e.a1(), P), exact_div(e.a2(), P2), exact_div(e.a3(), P3),
                                     exact_div(e.a4(), P4), exact_div(e.a6(), ipow(p, 6))};
    e = CurveQ(scaled, e.label);
    res.minimal = true;
  }
}

CurveQ normalize_small(const CurveQ& curve) {
  CurveQ e = curve;
  e = change_coordinates(e, 0, -fdiv(e.a1(), 2), 0);
  e = change_coordinates(e, -fdiv(e.a2() + 1, 3), 0, 0);
  e = change_coordinates(e, 0, 0, -fdiv(e.a3(), 2));
  return e;
}

}  // namespace

CurveQ::CurveQ(std::array<Integer, 5> a, std::string lbl) : label(std::move(lbl)), ainvs(std::move(a)) {
  if (discriminant() == 0) throw Error(ErrorKind::SingularCurve, "discriminant is zero for " + ainvs_string());
}

CurveQ CurveQ::from_ints(std::array<long, 5> a, std::string lbl) {
  return CurveQ({Integer(a[0]), Integer(a[1]), Integer(a[2]), Integer(a[3]), Integer(a[4])}, std::move(lbl));
}

Integer CurveQ::b2() const { return a1() * a1() + 4 * a2(); }
Integer CurveQ::b4() const { return 2 * a4() + a1() * a3(); }
Integer CurveQ::b6() const { return a3() * a3() + 4 * a6(); }
Integer CurveQ::b8() const {
  return a1() * a1() * a6() + 4 * a2() * a6() - a1() * a3() * a4() + a2() * a3() * a3() - a4() * a4();
}
Integer CurveQ::c4() const { return b2() * b2() - 24 * b4(); }
Integer CurveQ::c6() const { return -b2() * b2() * b2() + 36 * b2() * b4() - 216 * b6(); }
Integer CurveQ::discriminant() const {
  const Integer B2 = b2(), B4 = b4(), B6 = b6(), B8 = b8();
  return -B2 * B2 * B8 - 8 * B4 * B4 * B4 - 27 * B6 * B6 + 9 * B2 * B4 * B6;
}

std::string CurveQ::ainvs_string() const {
  std::ostringstream os;
  os << "[";
  for (size_t i = 0; i < 5; ++i) os << (i ? "," : "") << ainvs[i].get_str();
  os << "]";
  return os.str();
}

CurveQ change_coordinates(const CurveQ& e, const Integer& r, const Integer& s, const Integer& t) {
  const Integer &a1 = e.a1(), &a2 = e.a2(), &a3 = e.a3(), &a4 = e.a4(), &a6 = e.a6();
  std::array<Integer, 5> n;
  n[0] = a1 + 2 * s;
  n[1] = a2 - s * a1 + 3 * r - s * s;
  n[2] = a3 + r * a1 + 2 * t;
  n[3] = a4 - s * a3 + 2 * r * a2 - (t + r * s) * a1 + 3 * r * r - 2 * s * t;
  n[4] = a6 + r * a4 + r * r * a2 + r * r * r - t * a3 - t * t - r * t * a1;
  return CurveQ(n, e.label);
}

std::string to_string(ReductionKind kind) {
  switch (kind) {
    case ReductionKind::Good: return "good";
    case ReductionKind::SplitMultiplicative: return "split";
    case ReductionKind::NonsplitMultiplicative: return "nonsplit";
    case ReductionKind::Additive: return "additive";
  }
  return "unknown";
}

CurveQ minimal_model(const CurveQ& curve) {
  CurveQ e = curve;
  for (int64_t p : prime_factors(curve.discriminant())) {
    if (val(e.discriminant(), p) < 12) continue;
    tate(e, p, true);
  }
  return normalize_small(e);
}

ReductionData tate_local(const CurveQ& curve, int64_t ell) {
  if (!nt::is_prime(ell)) throw Error(ErrorKind::InvalidArgument, "tate_local needs a prime");
  CurveQ e = curve;
  TateResult r = tate(e, ell, false);
  if (!r.minimal) throw Error(ErrorKind::NotMinimalAtPrime, "model is not minimal at " + std::to_string(ell));
  switch (r.data.kind) {
    case ReductionKind::Good: r.data.ap = ap_count(curve, ell); break;
    case ReductionKind::SplitMultiplicative: r.data.ap = 1; break;
    case ReductionKind::NonsplitMultiplicative: r.data.ap = -1; break;
    case ReductionKind::Additive: r.data.ap = 0; break;
  }
  return r.data;
}

std::vector<int64_t> bad_primes(const CurveQ& curve) {
  const CurveQ e = minimal_model(curve);
  return prime_factors(e.discriminant());
}

int64_t conductor(const CurveQ& curve) {
  const CurveQ e = minimal_model(curve);
  int64_t n = 1;
  for (int64_t p : prime_factors(e.discriminant())) {
    CurveQ copy = e;
    const auto r = tate(copy, p, false);
    for (int i = 0; i < r.data.conductor_exponent; ++i) n *= p;
  }
  return n;
}

int64_t count_points(const CurveQ& curve, int64_t ell) {
  if (mod_small(curve.discriminant(), ell) == 0)
    throw Error(ErrorKind::BadReduction, "bad reduction at " + std::to_string(ell));
  const int64_t a1 = mod_small(curve.a1(), ell), a2 = mod_small(curve.a2(), ell), a3 = mod_small(curve.a3(), ell);
  const int64_t a4 = mod_small(curve.a4(), ell), a6 = mod_small(curve.a6(), ell);
  int64_t count = 1;
  if (ell == 2) {
    for (int64_t x = 0; x < 2; ++x)
      for (int64_t y = 0; y < 2; ++y)
        if (nt::mod(y * y + a1 * x * y + a3 * y - x * x * x - a2 * x * x - a4 * x - a6, 2) == 0) ++count;
    return count;
  }
  // y^2 = x^3 + (b2/4) x^2 + (b4/2) x + b6/4 after completing the square
  std::vector<int8_t> chi(static_cast<size_t>(ell), -1);
  chi[0] = 0;
  for (int64_t y = 1; y < ell; ++y) chi[static_cast<size_t>(nt::mul_mod(y, y, ell))] = 1;
  const int64_t b2 = nt::mod(a1 * a1 + 4 * a2, ell), b4 = nt::mod(2 * a4 + a1 * a3, ell);
  const int64_t b6 = nt::mod(a3 * a3 + 4 * a6, ell);
  for (int64_t x = 0; x < ell; ++x) {
    // 4x^3 + b2 x^2 + 2 b4 x + b6
    int64_t v = nt::mul_mod(4, x, ell);
    v = nt::mul_mod(nt::mod(v + b2, ell), x, ell);
    v = nt::mul_mod(nt::mod(v + 2 * b4, ell), x, ell);
    v = nt::mod(v + b6, ell);
    count += 1 + chi[static_cast<size_t>(v)];
  }
  return count;
}

int64_t ap_count(const CurveQ& curve, int64_t ell) { return ell + 1 - count_points(curve, ell); }

Integer count_points_extension(int64_t ell, int64_t ap, int64_t f) {
  Integer s0 = 2, s1 = ap;
  for (int64_t k = 1; k < f; ++k) {
    Integer s2 = Integer(ap) * s1 - Integer(ell) * s0;
    s0 = s1;
    s1 = s2;
  }
  return ipow(ell, static_cast<unsigned long>(f)) + 1 - (f == 0 ? Integer(0) : s1);
}

namespace {

struct AffinePoint {
  Rational x, y;
};

// Group law on y^2 = x^3 + A x + B; nullopt is the point at infinity.
std::optional<AffinePoint> add_points(const std::optional<AffinePoint>& P, const std::optional<AffinePoint>& Q,
                                      const Rational& A) {
  if (!P) return Q;
  if (!Q) return P;
  Rational lambda;
  if (P->x == Q->x) {
    if (P->y + Q->y == 0) return std::nullopt;
    lambda = (3 * P->x * P->x + A) / (2 * P->y);
  } else {
    lambda = (Q->y - P->y) / (Q->x - P->x);
  }
  AffinePoint R;
  R.x = lambda * lambda - P->x - Q->x;
  R.y = lambda * (P->x - R.x) - P->y;
  return R;
}

Integer icbrt_ceil(const Integer& n) {
  Integer r;
  mpz_root(r.get_mpz_t(), n.get_mpz_t(), 3);
  return r + 1;
}

}  // namespace

int64_t torsion_order(const CurveQ& curve) {
  const CurveQ e = minimal_model(curve);
  const Integer disc = e.discriminant();
  int64_t bound = 0;
  int used = 0;
  for (int64_t ell : nt::primes_up_to(2000)) {
    if (ell == 2 || mod_small(disc, ell) == 0) continue;
    bound = std::gcd(bound, count_points(e, ell));
    if (++used >= 20 || bound == 1) break;
  }
  if (bound == 1) return 1;

  const Integer A = -27 * e.c4(), B = -54 * e.c6();
  const Integer D = 4 * A * A * A + 27 * B * B;
  Integer absA = abs(A), absB = abs(B), absD = abs(D);
  Integer sqA;
  mpz_sqrt(sqA.get_mpz_t(), absA.get_mpz_t());
  Integer hi = std::max(Integer(2 * (sqA + 1)), icbrt_ceil(4 * (absD + absB) / 3 + 1)) + 1;
  Integer lo = -(std::max(Integer(2 * (sqA + 1)), icbrt_ceil(4 * absB / 3 + 1)) + 1);
  if (hi - lo > 50000000) throw Error(ErrorKind::BoundTooLarge, "torsion search range too large");

  // Torsion points of an integral model have 4x integral, so the scaled
  // coordinate 36x + 3b2 is congruent to 3b2 modulo 9.
  const int64_t residue = mod_small(3 * e.b2(), 9);
  Integer start = lo + ((residue - mod_small(lo, 9)) % 9 + 9) % 9;
  std::vector<AffinePoint> candidates;
  auto record = [&](const Integer& x, const Integer& y) {
    candidates.push_back({Rational(x), Rational(y)});
    if (y != 0) candidates.push_back({Rational(x), Rational(-y)});
  };
  const bool native = mpz_sizeinbase(A.get_mpz_t(), 2) < 38 && mpz_sizeinbase(B.get_mpz_t(), 2) < 56 &&
                      mpz_sizeinbase(hi.get_mpz_t(), 2) < 38 && mpz_sizeinbase(lo.get_mpz_t(), 2) < 38;
  if (native) {
    using i128 = __int128;
    const i128 a = A.get_si(), b = B.get_si();
    const i128 d = 4 * a * a * a + 27 * b * b;
    for (int64_t x = start.get_si(); x <= hi.get_si(); x += 9) {
      const i128 v = static_cast<i128>(x) * x * x + a * x + b;
      if (v < 0 || (v != 0 && d % v != 0)) continue;
      auto y = static_cast<i128>(std::sqrt(static_cast<long double>(v)));
      while (y * y > v) --y;
      while ((y + 1) * (y + 1) <= v) ++y;
      if (y * y != v) continue;
      record(Integer(static_cast<long>(x)), Integer(static_cast<long>(y)));
    }
  } else {
    for (Integer x = start; x <= hi; x += 9) {
      const Integer v = x * x * x + A * x + B;
      if (v < 0) continue;
      if (v != 0 && !mpz_divisible_p(D.get_mpz_t(), v.get_mpz_t())) continue;
      if (!mpz_perfect_square_p(v.get_mpz_t())) continue;
      Integer y;
      mpz_sqrt(y.get_mpz_t(), v.get_mpz_t());
      record(x, y);
    }
  }
  const Rational Aq(A);
  int64_t count = 1;
  for (const auto& pt : candidates) {
    std::optional<AffinePoint> P = pt, Q = pt;
    bool finite = false;
    for (int k = 1; k <= 12; ++k) {
      Q = add_points(Q, P, Aq);
      if (!Q) {
        finite = true;
        break;
      }
      if (Q->x.get_den() != 1 || Q->y.get_den() != 1) break;
    }
    if (finite) ++count;
  }
  if (bound % count != 0) throw Error(ErrorKind::InvalidCurve, "torsion search disagrees with reduction bound");
  return count;
}

namespace {

Real agm(Real a, Real b) {
  using boost::multiprecision::abs;
  using boost::multiprecision::sqrt;
  for (int i = 0; i < 200; ++i) {
    const Real an = (a + b) / 2;
    const Real bn = sqrt(a * b);
    if (abs(an - bn) <= abs(an) * std::numeric_limits<Real>::epsilon()) return an;
    a = an;
    b = bn;
  }
  return a;
}

Real to_real(const Integer& n) { return Real(n.get_str().c_str()); }

}  // namespace

RealPeriods real_period(const CurveQ& curve, int digits) {
  using boost::multiprecision::acos;
  using boost::multiprecision::cbrt;
  using boost::multiprecision::cos;
  using boost::multiprecision::sqrt;
  if (digits > kRealDigits - 3)
    throw Error(ErrorKind::PrecisionUnreachable,
                "at most " + std::to_string(kRealDigits - 3) + " digits with binary128 arithmetic");
  const Integer disc = curve.discriminant();
  // roots of X^3 + p X + q, X = x + b2/12 on 4x^3 + b2 x^2 + 2 b4 x + b6
  const Real p = -to_real(curve.c4()) / 48;
  const Real q = -to_real(curve.c6()) / 864;
  const Real pi = real_pi();
  auto polish = [&](Real x) {
    for (int i = 0; i < 4; ++i) {
      const Real f = (x * x + p) * x + q;
      const Real df = 3 * x * x + p;
      if (df == 0) break;
      x -= f / df;
    }
    return x;
  };
  RealPeriods out;
  out.precision = digits;
  if (disc > 0) {
    const Real rad = 2 * sqrt(-p / 3);
    const Real theta = acos((3 * q / (2 * p)) * sqrt(-3 / p)) / 3;
    std::array<Real, 3> r;
    for (int k = 0; k < 3; ++k) r[static_cast<size_t>(k)] = polish(rad * cos(theta - 2 * pi * k / 3));
    std::sort(r.begin(), r.end(), [](const Real& a, const Real& b) { return a > b; });
    out.omega_plus = pi / agm(sqrt(r[0] - r[2]), sqrt(r[0] - r[1]));
    out.omega_minus = pi / agm(sqrt(r[0] - r[2]), sqrt(r[1] - r[2]));
    out.c_infty = 2;
  } else {
    const Real d = q * q / 4 + p * p * p / 27;
    const Real x1 = polish(cbrt(-q / 2 + sqrt(d)) + cbrt(-q / 2 - sqrt(d)));
    const Real beta = sqrt(3 * x1 * x1 + p);
    const Real alpha = 3 * x1;
    out.omega_plus = 2 * pi / agm(2 * sqrt(beta), sqrt(2 * beta + alpha));
    out.omega_minus = 2 * pi / agm(2 * sqrt(beta), sqrt(2 * beta - alpha));
    out.c_infty = 1;
  }
  return out;
}

}  // namespace thetalab
