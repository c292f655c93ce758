#pragma once

/**
 * @file numthy.hpp
 * @brief Solving and counting x^2 = 2 (mod n).
 *
 * Moduli are 64-bit; products go through 128-bit intermediates. Factorization
 * is plain trial division, practical for n <= 10^12.
 */

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "knnmap/errors.hpp"

namespace knnmap::numthy {

using u64 = std::uint64_t;
using i64 = std::int64_t;
using u128 = unsigned __int128;

struct PrimePower {
  u64 p;
  unsigned a;
  friend bool operator==(const PrimePower&, const PrimePower&) = default;
};

struct Factorization {
  u64 n = 1;
  std::vector<PrimePower> factors;  // increasing p
};

/// All x in [0, modulus) with x^2 = 2 (mod modulus), ascending.
struct CongruenceSolutions {
  u64 modulus = 1;
  std::vector<u64> solutions;
};

inline u64 mulmod(u64 a, u64 b, u64 m) { return static_cast<u64>((static_cast<u128>(a) * b) % m); }

inline u64 powmod(u64 base, u64 e, u64 m) {
  u64 r = 1 % m;
  base %= m;
  while (e > 0) {
    if (e & 1) r = mulmod(r, base, m);
    base = mulmod(base, base, m);
    e >>= 1;
  }
  return r;
}

/// Least nonnegative residue of a modulo m.
inline u64 reduce(i64 a, u64 m) {
  if (a >= 0) return static_cast<u64>(a) % m;
  const u64 r = static_cast<u64>(-(a + 1)) % m;  // avoids overflow at INT64_MIN
  return (m - 1 - r) % m;
}

/// Inverse of a modulo m; requires gcd(a, m) = 1.
inline u64 invmod(u64 a, u64 m) {
  i64 old_r = static_cast<i64>(a % m), r = static_cast<i64>(m);
  i64 old_s = 1, s = 0;
  while (r != 0) {
    const i64 q = old_r / r;
    std::tie(old_r, r) = std::pair{r, old_r - q * r};
    std::tie(old_s, s) = std::pair{s, old_s - q * s};
  }
  if (old_r != 1) throw DomainError("invmod: not a unit");
  return reduce(old_s, m);
}

inline bool is_prime(u64 n) {
  if (n < 2) return false;
  if (n % 2 == 0) return n == 2;
  for (u64 d = 3; d * d <= n; d += 2)
    if (n % d == 0) return false;
  return true;
}

inline Factorization factorize(u64 n) {
  if (n == 0) throw DomainError("factorize: n must be positive");
  Factorization f{n, {}};
  u64 rest = n;
  for (u64 p = 2; p * p <= rest; p += (p == 2 ? 1 : 2)) {
    unsigned a = 0;
    while (rest % p == 0) {
      rest /= p;
      ++a;
    }
    if (a > 0) f.factors.push_back({p, a});
  }
  if (rest > 1) f.factors.push_back({rest, 1});
  return f;
}

/// Least k >= 1 with u^k = 1 (mod n), or 0 when u is not a unit mod n.
inline u64 multiplicative_order(u64 u, u64 n) {
  if (n == 1) return 1;
  u %= n;
  if (std::gcd(u, n) != 1) return 0;
  u64 k = 1;
  for (u64 x = u; x != 1; x = mulmod(x, u, n)) ++k;
  return k;
}

namespace detail {
inline void require_odd_prime(u64 p, const char* who) {
  if (p % 2 == 0 || !is_prime(p)) throw DomainError(std::string(who) + ": modulus must be an odd prime");
}
}  // namespace detail

/**
 * Gauss' lemma: reduce a, 2a, ..., ((p-1)/2)a into (-(p-1)/2, (p-1)/2] and
 * count the negatives; x^2 = a (mod p) is solvable iff that count is even.
 */
inline bool gauss_criterion(i64 a, u64 p) {
  detail::require_odd_prime(p, "gauss_criterion");
  const u64 ar = reduce(a, p);
  if (ar == 0) throw DomainError("gauss_criterion: p divides a");
  const u64 half = (p - 1) / 2;
  u64 negatives = 0;
  for (u64 j = 1; j <= half; ++j)
    if (mulmod(j, ar, p) > half) ++negatives;
  return negatives % 2 == 0;
}

namespace detail {

// Tonelli-Shanks; only used above the exhaustive-scan threshold.
inline std::vector<u64> tonelli_shanks(u64 a, u64 p) {
  if (a == 0) return {0};
  if (powmod(a, (p - 1) / 2, p) != 1) return {};
  u64 q = p - 1;
  unsigned s = 0;
  while (q % 2 == 0) {
    q /= 2;
    ++s;
  }
  u64 z = 2;
  while (powmod(z, (p - 1) / 2, p) != p - 1) ++z;
  u64 m = s, c = powmod(z, q, p), t = powmod(a, q, p), r = powmod(a, (q + 1) / 2, p);
  while (t != 1) {
    u64 i = 0;
    for (u64 tt = t; tt != 1; tt = mulmod(tt, tt, p)) ++i;
    u64 b = c;
    for (u64 j = 0; j + i + 1 < m; ++j) b = mulmod(b, b, p);
    m = i;
    c = mulmod(b, b, p);
    t = mulmod(t, c, p);
    r = mulmod(r, b, p);
  }
  std::vector<u64> out{r, p - r};
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace detail

inline constexpr u64 kExhaustiveSqrtLimit = 1'000'000;

/// All x in [0, p) with x^2 = a (mod p), ascending. Exhaustive for p <= 10^6.
inline std::vector<u64> sqrt_mod_prime(i64 a, u64 p) {
  detail::require_odd_prime(p, "sqrt_mod_prime");
  const u64 ar = reduce(a, p);
  if (p > kExhaustiveSqrtLimit) return detail::tonelli_shanks(ar, p);
  std::vector<u64> out;
  for (u64 x = 0; x < p; ++x)
    if (mulmod(x, x, p) == ar) out.push_back(x);
  return out;
}

/// All x mod p^m with x^2 = a (mod p^m), by Newton-lifting each root mod p.
inline std::vector<u64> hensel_lift(i64 a, u64 p, unsigned m) {
  detail::require_odd_prime(p, "hensel_lift");
  if (m == 0) throw DomainError("hensel_lift: exponent must be positive");
  if (reduce(a, p) == 0) throw DomainError("hensel_lift: p divides a");
  std::vector<u64> roots = sqrt_mod_prime(a, p);
  u64 mod = p;
  for (unsigned k = 1; k < m; ++k) {
    mod *= p;
    const u64 ar = reduce(a, mod);
    for (u64& x : roots) {
      // x <- x - (x^2 - a) / (2x)
      const u64 fx = (mulmod(x, x, mod) + mod - ar) % mod;
      const u64 step = mulmod(fx, invmod(mulmod(2, x, mod), mod), mod);
      x = (x + mod - step) % mod;
    }
  }
  std::sort(roots.begin(), roots.end());
  return roots;
}

/// Solutions of x^2 = 2 modulo a prime power.
inline std::vector<u64> sqrt2_mod_prime_power(u64 p, unsigned a) {
  if (p == 2) {
    if (a == 1) return {0};
    return {};  // 2 is not a square mod 4
  }
  return hensel_lift(2, p, a);
}

/// Solves x^2 = 2 (mod n) per prime power and recombines by CRT.
inline CongruenceSolutions solve_x2_eq_2(u64 n) {
  if (n == 0) throw DomainError("solve_x2_eq_2: n must be positive");
  std::vector<u64> acc{0};
  u64 mod = 1;
  for (const auto& [p, a] : factorize(n).factors) {
    u64 pa = 1;
    for (unsigned k = 0; k < a; ++k) pa *= p;
    const auto local = sqrt2_mod_prime_power(p, a);
    if (local.empty()) return {n, {}};
    // x = r (mod mod), x = s (mod pa)  ->  x = r + mod * ((s - r) * mod^-1 mod pa)
    const u64 inv = invmod(mod % pa, pa);
    std::vector<u64> next;
    next.reserve(acc.size() * local.size());
    for (u64 r : acc)
      for (u64 s : local) {
        const u64 diff = (s + pa - r % pa) % pa;
        next.push_back(r + mod * mulmod(diff, inv, pa));
      }
    acc = std::move(next);
    mod *= pa;
  }
  std::sort(acc.begin(), acc.end());
  return {n, std::move(acc)};
}

/**
 * Number of nonorientable regular embeddings of K_{n,n} up to isomorphism:
 * 1 for n = 2; 0 unless n = 2 (mod 4); for n = 2 p1^a1 ... pk^ak it is 2^k
 * when every pi = +-1 (mod 8), else 0.
 */
inline u64 predicted_count(u64 n) {
  if (n < 2) throw DomainError("predicted_count: n must be at least 2");
  if (n == 2) return 1;
  if (n % 4 != 2) return 0;
  u64 count = 1;
  for (const auto& [p, a] : factorize(n / 2).factors) {
    if (p % 8 != 1 && p % 8 != 7) return 0;
    count *= 2;
  }
  return count;
}

}  // namespace knnmap::numthy
