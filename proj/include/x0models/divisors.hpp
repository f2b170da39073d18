#pragma once

#include <cstdint>

#include "x0models/arith.hpp"
#include "x0models/errors.hpp"
#include "x0models/fiber.hpp"
#include "x0models/linalg.hpp"
#include "x0models/minimal.hpp"

namespace x0models {

/// Which cusp a horizontal section runs through. H_0 meets the Igusa
/// component of index 0, H_infinity the one of index n, each transversally;
/// nothing else about the horizontal divisors enters the computation.
enum class CuspSide : std::uint8_t { zero, infinity };

/// Exact rational coefficients over a fibre's components, in the fibre's
/// canonical order. Only meaningful together with its FiberModel.
struct VerticalDivisor {
  std::uint64_t p = 0;
  RationalVector coefficients;
  friend bool operator==(const VerticalDivisor&, const VerticalDivisor&) = default;
};

/// Right-hand side of the fibre system for m in {0, infinity}:
/// per component (2g-2) [H_m meets it] - K.Gamma. The result has degree
/// zero on the fibre, i.e. is orthogonal to the multiplicity vector.
inline RationalVector rhs_vector(const FiberModel& fib, const Integer& g, CuspSide m) {
  if (g < 1) throw invalid_input("rhs_vector: genus must be at least 1");
  const RationalVector kc = canonical_intersections(fib, g);
  RationalVector rhs(fib.components.size());
  const int cusp_index = m == CuspSide::zero ? 0 : fib.n;
  for (std::size_t i = 0; i < fib.components.size(); ++i) {
    const auto& kind = fib.components[i].kind;
    const bool meets = kind.family == ComponentFamily::igusa && kind.index == cusp_index;
    rhs[i] = (meets ? Rational(2 * g - 2) : Rational(0)) - kc[i];
  }
  if (dot(rhs, fib.multiplicity_vector()) != 0)
    throw internal_error("rhs_vector is not orthogonal to the multiplicity vector");
  return rhs;
}

/// Particular solution of matrix . x = rhs_m, gauge-fixed so that the
/// coefficient of the Igusa component of index 0 vanishes.
inline VerticalDivisor solve_vm(const FiberModel& fib, const Integer& g, CuspSide m) {
  const RationalVector rhs = rhs_vector(fib, g, m);
  RationalVector x = solve_singular(fib.matrix, rhs);
  const int c0 = fib.index_of(ComponentKind{ComponentFamily::igusa, 0, 0});
  if (c0 < 0) throw internal_error("fibre has no Igusa component of index 0");
  const RationalVector w = fib.multiplicity_vector();
  const Rational shift = x[c0] / w[c0];
  for (std::size_t i = 0; i < x.dim(); ++i) x[i] -= shift * w[i];
  return VerticalDivisor{fib.p, std::move(x)};
}

/// The kernel generator w: the multiplicity vector itself.
inline VerticalDivisor closed_form_kernel(const FiberModel& fib) {
  return VerticalDivisor{fib.p, fib.multiplicity_vector()};
}

namespace detail {

// The closed forms for u (m = 0) and v (m = infinity). Brackets of the
// shape (g-1)(...) + (...) are kept expanded so the expressions stay
// defined at g = 1. The invariants of N and of the cofactor M both enter.
struct ClosedFormContext {
  Integer p, n;
  Integer dN, eps2N, eps3N, epsinfN, g;
  Integer dM, epsinfM;
  Integer epsinf_pn;
  Integer pm1;  // p - 1

  Integer phi_min(int a, int n_int) const {
    return euler_phi_prime_power(p.convert_to<std::uint64_t>(),
                                 std::min(a, n_int - a));
  }
};

inline Rational closed_form_entry(const ClosedFormContext& c, const ComponentKind& kind,
                                  int n_int, CuspSide m) {
  const bool u = m == CuspSide::zero;
  const Integer& g = c.g;
  const Rational denom = Rational(c.dN * c.pm1);

  // Shared bracket for the interior columns a in {1..n-1}.
  auto interior_paren = [&](int a) -> Rational {
    const Integer base = Integer(6 * a) * c.pm1 + 6;
    const Integer lead = u ? base : Integer(-base);
    const Integer tail =
        c.dN - 3 * (Integer(std::min(a, n_int - a)) * c.pm1 + 1) * c.epsinfN;
    return Rational((g - 1) * lead + tail);
  };

  switch (kind.family) {
    case ComponentFamily::igusa: {
      if (kind.index == 0) return 0;
      if (kind.index == n_int) {
        const Integer base = 6 * c.n * c.pm1 + 12;
        const Integer lead = u ? base : Integer(-base);
        return Rational(2 * (g - 1) * lead) / denom;
      }
      return Rational(2 * c.phi_min(kind.index, n_int)) * interior_paren(kind.index) / denom;
    }
    case ComponentFamily::e: {
      if (kind.index != index_infinity)
        return Rational(c.phi_min(kind.index, n_int)) * interior_paren(kind.index) / denom;
      const Integer lead = u ? Integer(6 * c.n * c.pm1 + 36) : Integer(-6 * c.n * c.pm1 + 12);
      const Integer tail = -3 * (c.n * c.pm1 - 2) * c.epsinfN + 8 * c.eps3N;
      return Rational(c.epsinf_pn) * Rational((g - 1) * lead + tail) / (2 * denom) -
             Rational(2, c.pm1) + Rational(6 * c.epsinfM, c.dM * c.pm1);
    }
    case ComponentFamily::f: {
      if (kind.index == index_infinity) {
        const Integer lead = u ? Integer(2 * c.n * c.pm1 + 12) : Integer(-2 * c.n * c.pm1 + 4);
        const Integer tail = -(c.n * c.pm1 - 2) * c.epsinfN + 2 * c.eps2N;
        return Rational(1, 3) +
               Rational(c.epsinf_pn) * Rational((g - 1) * lead + tail) / denom -
               Rational(4, 3 * c.pm1) + Rational(4 * c.epsinfM, c.dM * c.pm1);
      }
      if (kind.index == 0 || kind.index == n_int) {
        // The 2(p+1) term enters with opposite signs on the two cusp sides.
        const Integer swing = Integer((kind.index == 0) == u ? -2 : 2) * (c.p + 1);
        const Integer lead = u ? Integer(6 * c.n * c.pm1 + swing + 36)
                               : Integer(-6 * c.n * c.pm1 + swing + 12);
        const Integer tail = -3 * (c.n * c.pm1 - 2) * c.epsinfN + 6 * c.eps2N;
        return Rational(c.epsinf_pn) * Rational((g - 1) * lead + tail) / (2 * denom) -
               Rational(2, c.pm1) + Rational(6 * c.epsinfM, c.dM * c.pm1);
      }
      return Rational(1, 3) + Rational(2 * c.phi_min(kind.index, n_int)) *
                                  interior_paren(kind.index) / (3 * denom);
    }
  }
  throw internal_error("unreachable component family");
}

inline ClosedFormContext make_closed_form_context(const FiberModel& fib,
                                                  const Invariants& invN) {
  const Invariants invM = invariants(factor_level(fib.M));
  ClosedFormContext c;
  c.p = fib.p;
  c.n = fib.n;
  c.dN = invN.d;
  c.eps2N = invN.eps2;
  c.eps3N = invN.eps3;
  c.epsinfN = invN.epsinf;
  c.g = invN.g;
  c.dM = invM.d;
  c.epsinfM = invM.epsinf;
  c.epsinf_pn = epsinf_prime_power(fib.p, fib.n);
  c.pm1 = Integer(fib.p) - 1;
  return c;
}

}  // namespace detail

/// Evaluates the closed-form particular solution for the requested cusp on
/// every component present in the fibre. On a blown-down fibre (M = 1, n
/// even) the same formulas apply with the contracted components' entries
/// removed.
inline VerticalDivisor closed_form_vm(const FiberModel& fib, const Invariants& invN,
                                      CuspSide m) {
  const auto ctx = detail::make_closed_form_context(fib, invN);
  RationalVector x(fib.components.size());
  for (std::size_t i = 0; i < fib.components.size(); ++i)
    x[i] = detail::closed_form_entry(ctx, fib.components[i].kind, fib.n, m);
  return VerticalDivisor{fib.p, std::move(x)};
}

/// One closed-form coefficient, for callers probing a single component.
inline Rational closed_form_coefficient(const FiberModel& fib, const Invariants& invN,
                                        const ComponentKind& kind, CuspSide m) {
  if (fib.index_of(kind) < 0)
    throw invalid_input("closed_form_coefficient: component absent from this fibre");
  return detail::closed_form_entry(detail::make_closed_form_context(fib, invN), kind,
                                   fib.n, m);
}

/// Exact re-verification of the closed forms on one fibre:
/// matrix . u = rhs_0, matrix . v = rhs_infinity and matrix . w = 0.
inline bool verify_closed_form(const FiberModel& fib, const Invariants& invN) {
  const RationalVector zero(fib.components.size());
  if (mat_vec(fib.matrix, closed_form_kernel(fib).coefficients) != zero) return false;
  const VerticalDivisor u = closed_form_vm(fib, invN, CuspSide::zero);
  if (mat_vec(fib.matrix, u.coefficients) != rhs_vector(fib, invN.g, CuspSide::zero))
    return false;
  const VerticalDivisor v = closed_form_vm(fib, invN, CuspSide::infinity);
  return mat_vec(fib.matrix, v.coefficients) ==
         rhs_vector(fib, invN.g, CuspSide::infinity);
}

}  // namespace x0models
