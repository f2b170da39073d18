#include <catch2/catch_amalgamated.hpp>

#include "x0models/divisors.hpp"
#include "x0models/minimal.hpp"

using namespace x0models;

namespace {

struct Level {
  FiberModel fib;
  Invariants inv;
};

Level correct_model(std::uint64_t p, int n, std::uint64_t M) {
  Level lvl{minimal_model(p, n, M), {}};
  lvl.inv = invariants(factor_level(lvl.fib.level()));
  return lvl;
}

Rational coeff_of(const VerticalDivisor& d, const FiberModel& fib, const char* label) {
  for (std::size_t i = 0; i < fib.components.size(); ++i)
    if (component_label(fib.components[i].kind) == label) return d.coefficients[i];
  FAIL("no component " << label);
  return 0;
}

}  // namespace

TEST_CASE("rhs vectors for X0(23)") {
  const auto [fib, inv] = correct_model(23, 1, 1);
  const RationalVector rhs0 = rhs_vector(fib, inv.g, CuspSide::zero);
  CHECK(rhs0 == RationalVector({{1, -1, 0, 0, 0}}));
  const RationalVector rhsi = rhs_vector(fib, inv.g, CuspSide::infinity);
  CHECK(rhsi == RationalVector({{-1, 1, 0, 0, 0}}));
  CHECK(dot(rhs0, fib.multiplicity_vector()) == 0);
  CHECK(dot(rhsi, fib.multiplicity_vector()) == 0);
}

TEST_CASE("solve_vm is gauge-fixed at C0 and exact") {
  const auto [fib, inv] = correct_model(23, 1, 1);
  const VerticalDivisor u = solve_vm(fib, inv.g, CuspSide::zero);
  CHECK(u.coefficients[0] == 0);
  CHECK(mat_vec(fib.matrix, u.coefficients) == rhs_vector(fib, inv.g, CuspSide::zero));

  // Adding t w still solves; the difference u - v solves with rhs0 - rhsi.
  const VerticalDivisor v = solve_vm(fib, inv.g, CuspSide::infinity);
  const RationalVector w = fib.multiplicity_vector();
  const RationalVector shifted = add(u.coefficients, scale(Rational(5, 7), w));
  CHECK(mat_vec(fib.matrix, shifted) == rhs_vector(fib, inv.g, CuspSide::zero));
  const RationalVector diff = add(u.coefficients, scale(Rational(-1), v.coefficients));
  const RationalVector rhs_diff =
      add(rhs_vector(fib, inv.g, CuspSide::zero),
          scale(Rational(-1), rhs_vector(fib, inv.g, CuspSide::infinity)));
  CHECK(mat_vec(fib.matrix, diff) == rhs_diff);
  CHECK(u.coefficients != v.coefficients);
}

TEST_CASE("closed forms for X0(23): the pinned coefficients") {
  const auto [fib, inv] = correct_model(23, 1, 1);
  const VerticalDivisor w = closed_form_kernel(fib);
  CHECK(w.coefficients == fib.multiplicity_vector());

  const VerticalDivisor u = closed_form_vm(fib, inv, CuspSide::zero);
  CHECK(coeff_of(u, fib, "C0") == 0);
  CHECK(coeff_of(u, fib, "C1") == Rational(6, 11));
  CHECK(coeff_of(u, fib, "Einf_1") == Rational(3, 11));
  CHECK(coeff_of(u, fib, "F0_1") == Rational(2, 11));
  CHECK(coeff_of(u, fib, "F1_1") == Rational(4, 11));

  const VerticalDivisor v = closed_form_vm(fib, inv, CuspSide::infinity);
  CHECK(coeff_of(v, fib, "C0") == 0);
  CHECK(coeff_of(v, fib, "C1") == Rational(-6, 11));
  CHECK(coeff_of(v, fib, "Einf_1") == Rational(-3, 11));
  CHECK(coeff_of(v, fib, "F0_1") == Rational(-2, 11));
  CHECK(coeff_of(v, fib, "F1_1") == Rational(-4, 11));
}

TEST_CASE("w matches the multiplicity vector everywhere") {
  for (const std::uint64_t p : {5ull, 13ull, 17ull, 23ull}) {
    for (int n = 1; n <= 3; ++n) {
      for (const std::uint64_t M : {1ull, 7ull, 11ull}) {
        if (M % p == 0) continue;
        const FiberModel fib = build_edixhoven(p, n, M);
        CHECK(closed_form_kernel(fib).coefficients == fib.multiplicity_vector());
      }
    }
  }
}

TEST_CASE("verify_closed_form on the pinned cases") {
  {
    const auto [fib, inv] = correct_model(23, 1, 1);
    CHECK(verify_closed_form(fib, inv));
  }
  {
    // Reduced system after the blow-downs of the X0(169) fibre.
    const auto [fib, inv] = correct_model(13, 2, 1);
    REQUIRE(fib.components.size() == 2);
    CHECK(verify_closed_form(fib, inv));
    const VerticalDivisor u = closed_form_vm(fib, inv, CuspSide::zero);
    CHECK(u.coefficients == RationalVector({{0, 1}}));
    const VerticalDivisor v = closed_form_vm(fib, inv, CuspSide::infinity);
    CHECK(v.coefficients == RationalVector({{0, -1}}));
  }
  {
    const auto [fib, inv] = correct_model(5, 3, 7);
    CHECK(verify_closed_form(fib, inv));
  }
}

TEST_CASE("closed form equals the exact solve after gauge fixing") {
  struct Case {
    std::uint64_t p;
    int n;
    std::uint64_t M;
  };
  for (const Case c : {Case{23, 1, 1}, Case{5, 3, 7}, Case{5, 2, 7}, Case{13, 3, 1},
                       Case{13, 2, 1}, Case{11, 2, 1}, Case{13, 4, 1}, Case{17, 2, 1},
                       Case{17, 2, 13}, Case{11, 1, 13}, Case{19, 2, 1}, Case{23, 2, 1}}) {
    const auto [fib, inv] = correct_model(c.p, c.n, c.M);
    INFO("p=" << c.p << " n=" << c.n << " M=" << c.M);
    for (const CuspSide m : {CuspSide::zero, CuspSide::infinity}) {
      const VerticalDivisor solved = solve_vm(fib, inv.g, m);
      const VerticalDivisor closed = closed_form_vm(fib, inv, m);
      CHECK(solved.coefficients == closed.coefficients);
    }
  }
}

TEST_CASE("genus-1 levels still verify") {
  for (const std::uint64_t N : {11ull, 17ull, 19ull, 49ull}) {
    const FactoredLevel level = factor_level(N);
    const auto& b = level.blocks[0];
    const auto [fib, inv] = correct_model(b.p, b.n, b.M);
    REQUIRE(inv.g == 1);
    CHECK(verify_closed_form(fib, inv));
  }
}

TEST_CASE("closed_form_coefficient rejects absent components") {
  const auto [fib, inv] = correct_model(23, 1, 1);
  CHECK_THROWS_AS(
      closed_form_coefficient(fib, inv, ComponentKind{ComponentFamily::e, 1, 1},
                              CuspSide::zero),
      invalid_input);
}

TEST_CASE("u_{C_a} closed form coefficient for general a") {
  // For every fibre, w_{C_a} = phi(p^min(a, n-a)) is the multiplicity.
  const FiberModel fib = build_edixhoven(13, 4, 1);
  for (int a = 0; a <= 4; ++a) {
    const int i = fib.index_of(ComponentKind{ComponentFamily::igusa, a, 0});
    CHECK(fib.components[i].multiplicity ==
          euler_phi_prime_power(13, std::min(a, 4 - a)));
  }
}
