#pragma once

#include <cstdint>
#include <numeric>
#include <vector>

#include "x0models/errors.hpp"
#include "x0models/rational.hpp"

namespace x0models {

/// One prime-power block of a level: N = p^n * M with p coprime to M.
struct PrimeBlock {
  std::uint64_t p = 0;
  int n = 0;
  std::uint64_t M = 1;
};

struct FactoredLevel {
  std::uint64_t N = 1;
  std::vector<PrimeBlock> blocks;  // ascending p, product of p^n equals N
  bool coprime_to_6 = false;
  bool excluded = false;  // N in {5,7,13,25}
  bool genus_ge_2 = false;
};

/// The multiplicative invariants of X_0(N) together with its genus.
struct Invariants {
  Integer d;
  Integer eps2;
  Integer eps3;
  Integer epsinf;
  Integer g;
};

/// Deterministic primality by trial division. No probabilistic shortcuts:
/// factorisations feed exact tests and must not depend on randomness.
inline bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  if (n % 2 == 0) return n == 2;
  if (n % 3 == 0) return n == 3;
  for (std::uint64_t f = 5; f * f <= n; f += 6) {
    if (n % f == 0 || n % (f + 2) == 0) return false;
  }
  return true;
}

/// Legendre symbol (a|p) for an odd prime p, computed by the standard
/// Jacobi-symbol reciprocity loop.
inline int kronecker_symbol(Integer a, std::uint64_t p) {
  if (p < 3 || p % 2 == 0 || !is_prime(p))
    throw invalid_input("kronecker_symbol: modulus must be an odd prime, got " +
                        std::to_string(p));
  Integer n = p;
  a %= n;
  if (a < 0) a += n;
  int t = 1;
  while (a != 0) {
    while (a % 2 == 0) {
      a /= 2;
      const Integer r = n % 8;
      if (r == 3 || r == 5) t = -t;
    }
    std::swap(a, n);
    if (a % 4 == 3 && n % 4 == 3) t = -t;
    a %= n;
  }
  return n == 1 ? t : 0;
}

/// xi(m) = (1 - (m|p))/2 for m in {-1,-3}; the two indicator bits that
/// steer the shape of every special fibre.
inline int xi(int m, std::uint64_t p) {
  if (m != -1 && m != -3) throw invalid_input("xi: m must be -1 or -3");
  if (p == 2 || p == 3 || !is_prime(p))
    throw invalid_input("xi: p must be a prime not dividing 6m, got " +
                        std::to_string(p));
  return (1 - kronecker_symbol(m, p)) / 2;
}

inline Integer euler_phi_prime_power(std::uint64_t p, int e) {
  if (e == 0) return 1;
  return ipow(Integer(p), static_cast<unsigned>(e - 1)) * (Integer(p) - 1);
}

inline Integer d_prime_power(std::uint64_t p, int n) {
  return ipow(Integer(p), static_cast<unsigned>(n - 1)) * (Integer(p) + 1);
}

inline Integer epsinf_prime_power(std::uint64_t p, int n) {
  if (n % 2 == 0)
    return ipow(Integer(p), static_cast<unsigned>(n / 2 - 1)) * (Integer(p) + 1);
  return 2 * ipow(Integer(p), static_cast<unsigned>((n - 1) / 2));
}

inline Integer eps2_prime_power(std::uint64_t p, int n) {
  // The cusp-width convention at p = 2: one elliptic point of order 2 on
  // X_0(2), none for higher powers of 2.
  if (p == 2) return n == 1 ? 1 : 0;
  return 1 + kronecker_symbol(-1, p);
}

inline Integer eps3_prime_power(std::uint64_t p, int n) {
  if (p == 2) return 0;
  if (p == 3) return n == 1 ? 1 : 0;
  return 1 + kronecker_symbol(-3, p);
}

/// d, eps2, eps3, epsinf as products over the prime blocks, and the genus
/// g = 1 + d/12 - eps2/4 - eps3/3 - epsinf/2, evaluated in exact rationals
/// with integrality asserted. g is defined as 0 for N <= 2.
inline Invariants invariants(const FactoredLevel& level) {
  Invariants inv{1, 1, 1, 1, 0};
  for (const PrimeBlock& b : level.blocks) {
    inv.d *= d_prime_power(b.p, b.n);
    inv.eps2 *= eps2_prime_power(b.p, b.n);
    inv.eps3 *= eps3_prime_power(b.p, b.n);
    inv.epsinf *= epsinf_prime_power(b.p, b.n);
  }
  const Rational g = Rational(1) + Rational(inv.d, 12) - Rational(inv.eps2, 4) -
                     Rational(inv.eps3, 3) - Rational(inv.epsinf, 2);
  if (level.N <= 2) {
    if (g != 0) throw internal_error("genus formula nonzero for N <= 2");
    inv.g = 0;
    return inv;
  }
  inv.g = to_integer(g, "genus");
  if (inv.g < 0) throw internal_error("negative genus for N = " + std::to_string(level.N));
  return inv;
}

/// Trial-division factorisation of a level, with the flags the rest of the
/// library keys on.
inline FactoredLevel factor_level(std::uint64_t N) {
  if (N == 0) throw invalid_input("factor_level: N must be positive");
  FactoredLevel level;
  level.N = N;
  std::uint64_t rest = N;
  auto take = [&](std::uint64_t p) {
    if (rest % p != 0) return;
    int n = 0;
    while (rest % p == 0) {
      rest /= p;
      ++n;
    }
    std::uint64_t pn = 1;
    for (int i = 0; i < n; ++i) pn *= p;
    level.blocks.push_back(PrimeBlock{p, n, N / pn});
  };
  take(2);
  take(3);
  for (std::uint64_t f = 5; f * f <= rest; f += 6) {
    take(f);
    take(f + 2);
  }
  if (rest > 1) take(rest);
  level.coprime_to_6 = (N % 2 != 0) && (N % 3 != 0);
  level.excluded = (N == 5 || N == 7 || N == 13 || N == 25);
  level.genus_ge_2 = invariants(level).g >= 2;
  return level;
}

/// k = (p-1)/12 d(M) - 1/2 xi(-1) eps2(M) - 1/3 xi(-3) eps3(M): the number
/// of points where all Igusa components of the fibre over p meet.
inline Integer k_count(std::uint64_t p, std::uint64_t M) {
  if (p < 5 || !is_prime(p))
    throw invalid_input("k_count: p must be a prime >= 5");
  if (M == 0 || M % p == 0 || std::gcd(M, std::uint64_t{6}) != 1)
    throw invalid_input("k_count: M must be coprime to 6p");
  const Invariants im = invariants(factor_level(M));
  const Rational k = Rational(Integer(p) - 1, 12) * im.d -
                     Rational(xi(-1, p), 2) * im.eps2 -
                     Rational(xi(-3, p), 3) * im.eps3;
  const Integer ki = to_integer(k, "k");
  if (ki < 0) throw internal_error("negative k for p=" + std::to_string(p) +
                                   ", M=" + std::to_string(M));
  return ki;
}

/// mu(a,a') = min(|n-2a|, |n-2a'|), the exponent in the Igusa-Igusa
/// intersection numbers.
inline int mu(int a, int a2, int n) {
  if (a < 0 || a > n || a2 < 0 || a2 > n)
    throw invalid_input("mu: indices must lie in [0, n]");
  const int x = n - 2 * a;
  const int y = n - 2 * a2;
  return std::min(x < 0 ? -x : x, y < 0 ? -y : y);
}

}  // namespace x0models
