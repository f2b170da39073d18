#include <catch2/catch_amalgamated.hpp>

#include <numeric>
#include <random>

#include "oracles.hpp"
#include "x0models/arith.hpp"

using namespace x0models;

TEST_CASE("kronecker symbol on the pinned examples") {
  CHECK(kronecker_symbol(-1, 13) == 1);   // Euler: (-1)^6 = 1 mod 13
  CHECK(kronecker_symbol(13, 13) == 0);
  CHECK(kronecker_symbol(-3, 11) == -1);  // squares mod 11: {1,3,4,5,9}
  CHECK(oracles::legendre_by_squares(-3, 11) == -1);
  CHECK_THROWS_AS(kronecker_symbol(1, 2), invalid_input);
  CHECK_THROWS_AS(kronecker_symbol(1, 15), invalid_input);
}

TEST_CASE("kronecker symbol agrees with Euler's criterion") {
  for (const std::uint64_t p : oracles::primes_up_to(97)) {
    if (p < 3) continue;
    for (long long a = -10; a <= 10; ++a)
      CHECK(kronecker_symbol(a, p) == oracles::legendre_euler(a, p));
  }
}

TEST_CASE("xi on the pinned examples") {
  CHECK(xi(-1, 13) == 0);  // 13 = 1 mod 4
  CHECK(xi(-1, 23) == 1);  // 23 = 3 mod 4
  CHECK(xi(-3, 5) == 1);   // 5 = 2 mod 3
  CHECK_THROWS_AS(xi(-2, 7), invalid_input);
  CHECK_THROWS_AS(xi(-1, 3), invalid_input);
}

TEST_CASE("invariants on the pinned levels") {
  const Invariants i169 = invariants(factor_level(169));
  CHECK(i169.d == 182);
  CHECK(i169.eps2 == 2);
  CHECK(i169.eps3 == 2);
  CHECK(i169.epsinf == 14);
  CHECK(i169.g == 8);

  const Invariants i1 = invariants(factor_level(1));
  CHECK(i1.d == 1);
  CHECK(i1.eps2 == 1);
  CHECK(i1.eps3 == 1);
  CHECK(i1.epsinf == 1);
  CHECK(i1.g == 0);

  const Invariants i23 = invariants(factor_level(23));
  CHECK(i23.d == 24);
  CHECK(i23.eps2 == 0);
  CHECK(i23.eps3 == 0);
  CHECK(i23.epsinf == 2);
  CHECK(i23.g == 2);
}

TEST_CASE("invariants agree with brute-force coset counting up to 300") {
  for (std::uint64_t N = 1; N <= 300; ++N) {
    if (N % 2 == 0 || N % 3 == 0) continue;
    const Invariants inv = invariants(factor_level(N));
    const auto brute = oracles::brute_invariants(N);
    INFO("N = " << N);
    CHECK(inv.d == brute.d);
    CHECK(inv.eps2 == brute.eps2);
    CHECK(inv.eps3 == brute.eps3);
    CHECK(inv.epsinf == brute.epsinf);
    CHECK(12 * inv.g == brute.genus_times_12());
  }
}

TEST_CASE("multiplicative over coprime factors") {
  std::mt19937 rng(20240517);
  std::uniform_int_distribution<std::uint64_t> dist(1, 10000);
  int checked = 0;
  while (checked < 4000) {
    const std::uint64_t a = dist(rng), b = dist(rng);
    if (std::gcd(a, b) != 1) continue;
    ++checked;
    const Invariants ia = invariants(factor_level(a));
    const Invariants ib = invariants(factor_level(b));
    const Invariants iab = invariants(factor_level(a * b));
    CHECK(iab.d == ia.d * ib.d);
    CHECK(iab.eps2 == ia.eps2 * ib.eps2);
    CHECK(iab.eps3 == ia.eps3 * ib.eps3);
    CHECK(iab.epsinf == ia.epsinf * ib.epsinf);
  }
}

TEST_CASE("genus is a nonnegative integer across levels coprime to 6") {
  // invariants() itself asserts integrality in exact rationals.
  for (std::uint64_t N = 1; N <= 100000; ++N) {
    if (N % 2 == 0 || N % 3 == 0) continue;
    CHECK_NOTHROW(invariants(factor_level(N)));
  }
}

TEST_CASE("k_count pinned examples and supersingular oracle") {
  CHECK(k_count(23, 1) == 1);
  CHECK(k_count(11, 1) == 0);
  CHECK(k_count(13, 1) == 1);  // floor(13/12), both xi vanish
  for (const std::uint64_t p : oracles::primes_up_to(60)) {
    if (p < 5) continue;
    INFO("p = " << p);
    CHECK(k_count(p, 1) == oracles::count_supersingular_j_outside(p));
  }
}

TEST_CASE("k_count integral and nonnegative on a (p, M) lattice") {
  for (const std::uint64_t p : oracles::primes_up_to(200)) {
    if (p < 5) continue;
    for (std::uint64_t M = 1; M <= 120; ++M) {
      if (std::gcd(M, 6 * p) != 1) continue;
      CHECK_NOTHROW(k_count(p, M));  // throws internal_error if non-integral
    }
  }
  CHECK_THROWS_AS(k_count(4, 1), invalid_input);
  CHECK_THROWS_AS(k_count(7, 14), invalid_input);
}

TEST_CASE("mu") {
  CHECK(mu(0, 1, 3) == 1);
  CHECK(mu(1, 1, 2) == 0);
  CHECK(mu(0, 2, 5) == 1);
  CHECK_THROWS_AS(mu(-1, 0, 3), invalid_input);
  CHECK_THROWS_AS(mu(0, 4, 3), invalid_input);
}

TEST_CASE("factor_level") {
  const FactoredLevel l175 = factor_level(175);
  REQUIRE(l175.blocks.size() == 2);
  CHECK(l175.blocks[0].p == 5);
  CHECK(l175.blocks[0].n == 2);
  CHECK(l175.blocks[0].M == 7);
  CHECK(l175.blocks[1].p == 7);
  CHECK(l175.blocks[1].n == 1);
  CHECK(l175.blocks[1].M == 25);
  CHECK(l175.coprime_to_6);
  CHECK_FALSE(l175.excluded);

  const FactoredLevel l23 = factor_level(23);
  REQUIRE(l23.blocks.size() == 1);
  CHECK(l23.blocks[0].p == 23);
  CHECK(l23.genus_ge_2);

  CHECK(factor_level(1).blocks.empty());
  CHECK(factor_level(25).excluded);
  CHECK_FALSE(factor_level(15).coprime_to_6);
  CHECK_THROWS_AS(factor_level(0), invalid_input);
}
