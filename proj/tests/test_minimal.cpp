#include <catch2/catch_amalgamated.hpp>

#include "x0models/divisors.hpp"
#include "x0models/minimal.hpp"

using namespace x0models;

namespace {

Integer genus_of(std::uint64_t N) { return invariants(factor_level(N)).g; }

}  // namespace

TEST_CASE("find_exceptional") {
  const auto exc169 = find_exceptional(build_edixhoven(13, 2, 1));
  REQUIRE(exc169.size() == 1);
  CHECK(exc169[0] == ComponentKind{ComponentFamily::igusa, 1, 0});

  CHECK(find_exceptional(build_edixhoven(23, 1, 1)).empty());
  CHECK(find_exceptional(build_edixhoven(5, 1, 7)).empty());

  // The levels the library refuses: both end components sit at -1.
  const auto exc5 = find_exceptional(build_edixhoven(5, 1, 1));
  REQUIRE(exc5.size() == 2);
}

TEST_CASE("composite blow-down of the X0(169) fibre") {
  const Integer g = genus_of(169);
  const FiberModel minimal = blow_down_composite(build_edixhoven(13, 2, 1), g);
  REQUIRE(minimal.components.size() == 2);
  CHECK(component_label(minimal.components[0].kind) == "C0");
  CHECK(component_label(minimal.components[1].kind) == "C2");
  CHECK(minimal.components[0].multiplicity == 1);
  CHECK(minimal.components[1].multiplicity == 1);
  CHECK(minimal.components[0].genus == 1);
  CHECK(minimal.components[1].genus == 1);
  CHECK(minimal.matrix.at(0, 1) == 7);
  CHECK(minimal.matrix.at(0, 0) == -7);
  CHECK(minimal.matrix.at(1, 1) == -7);
  const RationalVector kc = canonical_intersections(minimal, g);
  CHECK(kc[0] == 7);
  CHECK(kc[1] == 7);
  CHECK(fiber_canonical_degree_check(minimal, g) == Rational(14));
}

TEST_CASE("pullback coefficients across the four residue classes") {
  // (6k, 3k, 2k) plus the class-dependent offsets (0,0,0), (2,1,1),
  // (3,2,1), (5,3,2) for p = 1, 5, 7, 11 mod 12.
  struct Case {
    std::uint64_t p;
    int offset[3];
  };
  for (const Case c : {Case{13, {0, 0, 0}}, Case{17, {2, 1, 1}}, Case{7, {3, 2, 1}},
                       Case{11, {5, 3, 2}}}) {
    const FiberModel fib = build_edixhoven(c.p, 2, 1);
    const BlowdownRecord rec = blow_down_record(fib);
    REQUIRE(rec.contracted.size() == 3);
    CHECK(rec.contracted[0] == ComponentKind{ComponentFamily::igusa, 1, 0});
    const Integer k = k_count(c.p, 1);
    for (std::size_t s = 0; s < rec.survivors.size(); ++s) {
      if (rec.survivors[s].family != ComponentFamily::igusa) continue;
      INFO("p = " << c.p);
      CHECK(rec.pullback_coeffs[s][0] == Rational(6 * k + c.offset[0]));
      CHECK(rec.pullback_coeffs[s][1] == Rational(3 * k + c.offset[1]));
      CHECK(rec.pullback_coeffs[s][2] == Rational(2 * k + c.offset[2]));
    }
  }
}

TEST_CASE("iterative contraction of the X0(169) fibre") {
  const FiberModel result = blow_down_iterative(build_edixhoven(13, 2, 1));
  REQUIRE(result.components.size() == 2);
  CHECK(result.matrix.at(0, 1) == 7);
  CHECK(result.matrix.at(0, 0) == -7);
  CHECK(result.components[0].genus == 1);

  // A minimal fibre passes through unchanged.
  const FiberModel fib23 = build_edixhoven(23, 1, 1);
  CHECK(blow_down_iterative(fib23) == fib23);
}

TEST_CASE("composite and iterative blow-downs agree") {
  for (const std::uint64_t p :
       {13ull, 37ull, 61ull, 5ull, 17ull, 29ull, 7ull, 19ull, 31ull, 11ull, 23ull, 59ull}) {
    for (const int n : {2, 4}) {
      if (p == 5 && n == 2) continue;  // level 25 is excluded
      const FiberModel edix = build_edixhoven(p, n, 1);
      const Integer g = genus_of(edix.level());
      const FiberModel composite = blow_down_composite(edix, g);
      const FiberModel iterative = blow_down_iterative(edix);
      INFO("p = " << p << ", n = " << n);
      CHECK(composite == iterative);
      CHECK(find_exceptional(composite).empty());
      CHECK(fiber_canonical_degree_check(composite, g) == Rational(2 * g - 2));
      // The survivor multiplicities still span the kernel.
      const auto kernel = kernel_basis(composite.matrix);
      REQUIRE(kernel.size() == 1);
      CHECK(mat_vec(composite.matrix, composite.multiplicity_vector()) ==
            RationalVector(composite.components.size()));
    }
  }
}

TEST_CASE("canonical_intersections") {
  const FiberModel fib23 = build_edixhoven(23, 1, 1);
  const RationalVector kc = canonical_intersections(fib23, genus_of(23));
  REQUIRE(kc.dim() == 5);
  CHECK(kc[0] == 1);
  CHECK(kc[1] == 1);
  CHECK(kc[2] == 0);
  CHECK(kc[3] == 0);
  CHECK(kc[4] == 0);

  // Surviving E and F components of a blown-down fibre: K.E = 0, K.F = 1.
  const FiberModel min134 = blow_down_composite(build_edixhoven(13, 4, 1), genus_of(28561));
  const RationalVector kc134 = canonical_intersections(min134, genus_of(28561));
  for (std::size_t i = 0; i < min134.components.size(); ++i) {
    if (min134.components[i].kind.family == ComponentFamily::e) CHECK(kc134[i] == 0);
    if (min134.components[i].kind.family == ComponentFamily::f) CHECK(kc134[i] == 1);
  }
}

TEST_CASE("blow-down error paths") {
  const Integer g35 = genus_of(35);
  CHECK_THROWS_AS(blow_down_composite(build_edixhoven(5, 1, 7), g35), invalid_input);
  CHECK_THROWS_AS(blow_down_composite(build_edixhoven(5, 3, 1), genus_of(125)),
                  invalid_input);
  CHECK_THROWS_AS(blow_down_composite(build_edixhoven(5, 2, 1), genus_of(25)),
                  unsupported_level);
  CHECK_THROWS_AS(minimal_model(5, 1, 1), unsupported_level);
  CHECK_THROWS_AS(minimal_model(7, 1, 1), unsupported_level);
  CHECK_THROWS_AS(minimal_model(13, 1, 1), unsupported_level);
  CHECK_THROWS_AS(minimal_model(5, 2, 1), unsupported_level);
  CHECK_NOTHROW(minimal_model(5, 1, 7));
}
