#pragma once

// Small-integer number theory helpers. Moduli handled here are desk-sized
// (well below 2^31), so plain int64 arithmetic with 128-bit products suffices.

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <tuple>
#include <utility>
#include <vector>

namespace thetalab::nt {

inline int64_t mod(int64_t a, int64_t m) {
  int64_t r = a % m;
  return r < 0 ? r + m : r;
}

inline int64_t mul_mod(int64_t a, int64_t b, int64_t m) {
  return static_cast<int64_t>((static_cast<__int128>(mod(a, m)) * mod(b, m)) % m);
}

inline int64_t pow_mod(int64_t base, int64_t e, int64_t m) {
  if (m == 1) return 0;
  int64_t result = 1;
  base = mod(base, m);
  while (e > 0) {
    if (e & 1) result = mul_mod(result, base, m);
    base = mul_mod(base, base, m);
    e >>= 1;
  }
  return result;
}

/// Extended gcd: returns g and sets x, y with a*x + b*y = g.
inline int64_t ext_gcd(int64_t a, int64_t b, int64_t& x, int64_t& y) {
  int64_t x0 = 1, y0 = 0, x1 = 0, y1 = 1;
  while (b != 0) {
    int64_t q = a / b;
    std::tie(a, b) = std::make_pair(b, a - q * b);
    std::tie(x0, x1) = std::make_pair(x1, x0 - q * x1);
    std::tie(y0, y1) = std::make_pair(y1, y0 - q * y1);
  }
  if (a < 0) {
    a = -a;
    x0 = -x0;
    y0 = -y0;
  }
  x = x0;
  y = y0;
  return a;
}

/// Inverse of a modulo m; returns 0 when gcd(a, m) != 1 (and m > 1).
inline int64_t inv_mod(int64_t a, int64_t m) {
  if (m == 1) return 0;
  int64_t x, y;
  if (ext_gcd(mod(a, m), m, x, y) != 1) return 0;
  return mod(x, m);
}

inline bool is_prime(int64_t n) {
  if (n < 2) return false;
  for (int64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

/// Prime factorization as (prime, exponent) pairs in increasing order.
inline std::vector<std::pair<int64_t, int>> factor(int64_t n) {
  std::vector<std::pair<int64_t, int>> out;
  if (n < 0) n = -n;
  for (int64_t d = 2; d * d <= n; ++d) {
    if (n % d != 0) continue;
    int e = 0;
    while (n % d == 0) {
      n /= d;
      ++e;
    }
    out.emplace_back(d, e);
  }
  if (n > 1) out.emplace_back(n, 1);
  return out;
}

inline std::vector<int64_t> prime_divisors(int64_t n) {
  std::vector<int64_t> out;
  for (auto [q, e] : factor(n)) out.push_back(q);
  return out;
}

inline bool is_squarefree(int64_t n) {
  if (n <= 0) return false;
  for (auto [q, e] : factor(n))
    if (e > 1) return false;
  return true;
}

inline int mobius(int64_t n) {
  int sign = 1;
  for (auto [q, e] : factor(n)) {
    if (e > 1) return 0;
    sign = -sign;
  }
  return sign;
}

inline int64_t euler_phi(int64_t n) {
  int64_t r = n;
  for (auto [q, e] : factor(n)) r = r / q * (q - 1);
  return r;
}

inline std::vector<int64_t> divisors(int64_t n) {
  std::vector<int64_t> out;
  for (int64_t d = 1; d * d <= n; ++d) {
    if (n % d != 0) continue;
    out.push_back(d);
    if (d * d != n) out.push_back(n / d);
  }
  std::sort(out.begin(), out.end());
  return out;
}

inline std::vector<int64_t> primes_up_to(int64_t bound) {
  std::vector<int64_t> out;
  if (bound < 2) return out;
  std::vector<bool> sieve(static_cast<size_t>(bound) + 1, true);
  for (int64_t i = 2; i <= bound; ++i) {
    if (!sieve[i]) continue;
    out.push_back(i);
    for (int64_t j = i * i; j <= bound; j += i) sieve[j] = false;
  }
  return out;
}

/// Multiplicative order of a modulo m (requires gcd(a, m) = 1).
inline int64_t mult_order(int64_t a, int64_t m) {
  if (m == 1) return 1;
  a = mod(a, m);
  int64_t k = 1, x = a;
  while (x != 1) {
    x = mul_mod(x, a, m);
    ++k;
  }
  return k;
}

/// Units of Z/m in increasing order (m = 1 gives {0}).
inline std::vector<int64_t> units_mod(int64_t m) {
  std::vector<int64_t> out;
  if (m == 1) return {0};
  for (int64_t a = 1; a < m; ++a)
    if (std::gcd(a, m) == 1) out.push_back(a);
  return out;
}

inline int64_t valuation(int64_t n, int64_t p) {
  if (n == 0) return 1 << 30;
  int64_t v = 0;
  while (n % p == 0) {
    n /= p;
    ++v;
  }
  return v;
}

/// Kronecker-style Legendre symbol (a/p) for an odd prime p.
inline int legendre(int64_t a, int64_t p) {
  a = mod(a, p);
  if (a == 0) return 0;
  return pow_mod(a, (p - 1) / 2, p) == 1 ? 1 : -1;
}

}  // namespace thetalab::nt
