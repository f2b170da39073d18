#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "x0models/arith.hpp"
#include "x0models/errors.hpp"
#include "x0models/fiber.hpp"
#include "x0models/linalg.hpp"

namespace x0models {

/// The components contracted by the composite blow-down and, for every
/// surviving component, the coefficients of the contracted ones in its
/// pullback.
struct BlowdownRecord {
  std::vector<ComponentKind> contracted;            // contraction order
  std::vector<ComponentKind> survivors;             // canonical order
  std::vector<std::vector<Rational>> pullback_coeffs;  // survivors x contracted
};

/// Components with genus 0 and self-intersection -1.
inline std::vector<ComponentKind> find_exceptional(const FiberModel& fib) {
  std::vector<ComponentKind> out;
  for (std::size_t i = 0; i < fib.components.size(); ++i)
    if (fib.components[i].genus == 0 && fib.matrix.at(i, i) == -1)
      out.push_back(fib.components[i].kind);
  return out;
}

/// K.Gamma per component by adjunction (2 g_C - 2 - C^2), with the degree
/// identity sum m_i K.Gamma_i = 2g - 2 asserted.
inline RationalVector canonical_intersections(const FiberModel& fib, const Integer& g) {
  RationalVector kc(fib.components.size());
  Rational degree = 0;
  for (std::size_t i = 0; i < fib.components.size(); ++i) {
    kc[i] = Rational(2 * fib.components[i].genus - 2) - fib.matrix.at(i, i);
    degree += Rational(fib.components[i].multiplicity) * kc[i];
  }
  if (degree != Rational(2 * g - 2))
    throw internal_error("canonical degree of the fibre is not 2g-2");
  return kc;
}

namespace detail {

inline void require_blowdown_case(const FiberModel& fib) {
  if (fib.model != ModelTag::edixhoven)
    throw invalid_input("blow-down expects an Edixhoven-model fibre");
  if (fib.M != 1 || fib.n % 2 != 0)
    throw invalid_input("the model is already minimal: blow-downs apply only to M = 1 with n even");
  if (fib.level() == 25)
    throw unsupported_level("level 25 is not supported: the standard blow-downs do not reach a minimal model");
}

inline std::vector<ComponentKind> contracted_kinds(const FiberModel& fib) {
  const int half = fib.n / 2;
  const int xi1 = xi(-1, fib.p);
  const int xi3 = xi(-3, fib.p);
  return {
      ComponentKind{ComponentFamily::igusa, half, 0},
      ComponentKind{ComponentFamily::e, xi1 == 0 ? half : index_infinity, 1},
      ComponentKind{ComponentFamily::f, xi3 == 0 ? half : index_infinity, 1},
  };
}

}  // namespace detail

/// Pullback data of the composite of the three blow-downs (M = 1, n even):
/// the coefficients d_i in pi*(C) = C' + sum d_i D_i are determined by
/// D_i . pi*(C) = 0 and are integers.
inline BlowdownRecord blow_down_record(const FiberModel& fib) {
  detail::require_blowdown_case(fib);
  BlowdownRecord rec;
  rec.contracted = detail::contracted_kinds(fib);

  std::vector<int> cidx;
  for (const auto& kind : rec.contracted) {
    const int i = fib.index_of(kind);
    if (i < 0) throw internal_error("contracted component missing from fibre");
    cidx.push_back(i);
  }

  RationalMatrix gram(3);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j)
      gram.at(i, j) = fib.matrix.at(cidx[i], cidx[j]);

  for (std::size_t s = 0; s < fib.components.size(); ++s) {
    if (std::find(cidx.begin(), cidx.end(), static_cast<int>(s)) != cidx.end()) continue;
    rec.survivors.push_back(fib.components[s].kind);
    RationalVector rhs(3);
    for (std::size_t j = 0; j < 3; ++j) rhs[j] = -fib.matrix.at(cidx[j], s);
    const RationalVector d = solve_singular(gram, rhs);
    for (std::size_t j = 0; j < 3; ++j)
      to_integer(d[j], "pullback coefficient");
    rec.pullback_coeffs.push_back({d[0], d[1], d[2]});
  }
  return rec;
}

/// The composite blow-down for M = 1 and n even: contracts C_{n/2} and the
/// E/F component at n/2 or infinity, recomputes every intersection via
/// pullbacks, and updates the genera. The surviving Igusa pairwise bumps
/// 6k^2 + (6k+2)xi(-1) + (4k+1)xi(-3) + 2 xi(-1) xi(-3) and the genus value
/// 3k^2 + (3 xi(-1) + 2 xi(-3) - 2)k + xi(-1)xi(-3) are asserted against the
/// pullback computation, as is K.C_a = -(C'_a)^2 - 4k - 2 - 2xi(-1) - xi(-3).
inline FiberModel blow_down_composite(const FiberModel& fib, const Integer& g) {
  const BlowdownRecord rec = blow_down_record(fib);
  const std::size_t dim = fib.components.size();
  const std::size_t sdim = rec.survivors.size();
  const int xi1 = xi(-1, fib.p);
  const int xi3 = xi(-3, fib.p);
  const Integer k = k_count(fib.p, 1);
  const Integer igusa_bump = 6 * k * k + (6 * k + 2) * xi1 + (4 * k + 1) * xi3 +
                             Integer(2 * xi1 * xi3);
  const Integer igusa_genus = 3 * k * k + (3 * xi1 + 2 * xi3 - 2) * k + Integer(xi1 * xi3);

  // Pullback of each survivor as a vector in the Edixhoven component space.
  std::vector<RationalVector> pullbacks;
  pullbacks.reserve(sdim);
  std::vector<int> sidx;
  for (std::size_t s = 0; s < sdim; ++s) {
    const int si = fib.index_of(rec.survivors[s]);
    sidx.push_back(si);
    RationalVector v(dim);
    v[si] = 1;
    for (std::size_t j = 0; j < 3; ++j) {
      const int cj = fib.index_of(rec.contracted[j]);
      v[cj] = rec.pullback_coeffs[s][j];
    }
    pullbacks.push_back(std::move(v));
  }

  FiberModel out;
  out.p = fib.p;
  out.n = fib.n;
  out.M = fib.M;
  out.model = ModelTag::minimal;
  out.matrix = RationalMatrix(sdim);
  for (std::size_t i = 0; i < sdim; ++i) {
    FiberComponent c;
    c.kind = rec.survivors[i];
    c.multiplicity = fib.components[sidx[i]].multiplicity;
    c.genus = c.kind.family == ComponentFamily::igusa ? igusa_genus : 0;
    out.components.push_back(std::move(c));
  }
  for (std::size_t i = 0; i < sdim; ++i)
    for (std::size_t j = i; j < sdim; ++j) {
      const Rational v = quadratic_form(pullbacks[i], fib.matrix, pullbacks[j]);
      to_integer(v, "contracted intersection number");
      out.matrix.at(i, j) = v;
      out.matrix.at(j, i) = v;
    }

  // Cross-check the closed-form updates.
  for (std::size_t i = 0; i < sdim; ++i)
    for (std::size_t j = i; j < sdim; ++j) {
      const bool both_igusa = rec.survivors[i].family == ComponentFamily::igusa &&
                              rec.survivors[j].family == ComponentFamily::igusa;
      const Rational before = fib.matrix.at(sidx[i], sidx[j]);
      const Rational expected = both_igusa ? before + Rational(igusa_bump) : before;
      if (out.matrix.at(i, j) != expected)
        throw internal_error("contracted matrix disagrees with the closed-form update");
    }
  const RationalVector kc = canonical_intersections(out, g);
  for (std::size_t i = 0; i < sdim; ++i) {
    Rational expected;
    switch (rec.survivors[i].family) {
      case ComponentFamily::igusa:
        expected = -fib.matrix.at(sidx[i], sidx[i]) - Rational(4 * k + 2 + 2 * xi1 + xi3);
        break;
      case ComponentFamily::e:
        expected = 0;
        break;
      case ComponentFamily::f:
        expected = 1;
        break;
    }
    if (kc[i] != expected)
      throw internal_error("canonical intersection disagrees with the contracted closed form");
  }

  detail::check_fiber_invariants(out);
  return out;
}

/// Generic contraction loop: repeatedly remove the first component (in the
/// canonical order) with genus 0 and self-intersection -1, updating
/// C.D += (C.E)(D.E) and genus(C) += r(r-1)/2 with r = C.E. Serves as the
/// independent oracle for blow_down_composite.
inline FiberModel blow_down_iterative(const FiberModel& input) {
  FiberModel fib = input;
  bool contracted_any = false;
  for (;;) {
    std::size_t target = fib.components.size();
    for (std::size_t i = 0; i < fib.components.size(); ++i)
      if (fib.components[i].genus == 0 && fib.matrix.at(i, i) == -1) {
        target = i;
        break;
      }
    if (target == fib.components.size()) break;
    contracted_any = true;

    const std::size_t dim = fib.components.size();
    FiberModel next;
    next.p = fib.p;
    next.n = fib.n;
    next.M = fib.M;
    next.model = ModelTag::minimal;
    std::vector<std::size_t> keep;
    for (std::size_t i = 0; i < dim; ++i)
      if (i != target) keep.push_back(i);
    next.matrix = RationalMatrix(keep.size());
    for (std::size_t a = 0; a < keep.size(); ++a) {
      const Rational r = fib.matrix.at(keep[a], target);
      FiberComponent c = fib.components[keep[a]];
      c.genus += to_integer(r * (r - 1) / 2, "genus bump");
      next.components.push_back(std::move(c));
      for (std::size_t b = 0; b < keep.size(); ++b)
        next.matrix.at(a, b) =
            fib.matrix.at(keep[a], keep[b]) + r * fib.matrix.at(keep[b], target);
    }
    fib = std::move(next);
  }
  if (contracted_any) detail::check_fiber_invariants(fib);
  return fib;
}

/// The minimal regular model's fibre over p for N = p^n M: Edixhoven's
/// model, blown down when M = 1 and n is even. Levels N in {5,7,13,25} are
/// refused; their blow-downs fall outside the supported family.
inline FiberModel minimal_model(std::uint64_t p, int n, std::uint64_t M) {
  FiberModel fib = build_edixhoven(p, n, M);
  const std::uint64_t N = fib.level();
  if (N == 5 || N == 7 || N == 13 || N == 25)
    throw unsupported_level("level " + std::to_string(N) + " is not supported");
  if (M == 1 && n % 2 == 0) {
    const Integer g = invariants(factor_level(N)).g;
    fib = blow_down_composite(fib, g);
  } else {
    fib.model = ModelTag::minimal;
  }
  return fib;
}

}  // namespace x0models
