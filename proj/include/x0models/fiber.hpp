#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "x0models/arith.hpp"
#include "x0models/errors.hpp"
#include "x0models/linalg.hpp"
#include "x0models/rational.hpp"

namespace x0models {

enum class ComponentFamily : std::uint8_t { igusa, e, f };

/// Sentinel index for the E/F components attached "at infinity".
inline constexpr int index_infinity = -1;

/// Identity of one irreducible component of a special fibre.
///   igusa: index a in {0..n}, copy 0
///   e:     index a in {1..n-1} (p = 1 mod 4) or infinity (p = 3 mod 4),
///          copy 1..eps2(M)
///   f:     index a in {1..n-1} (p = 1 mod 3), infinity (p = 2 mod 3 and
///          n even) or {0, n} (p = 2 mod 3 and n odd), copy 1..eps3(M)
struct ComponentKind {
  ComponentFamily family = ComponentFamily::igusa;
  int index = 0;
  int copy = 0;
  friend bool operator==(const ComponentKind&, const ComponentKind&) = default;
};

struct FiberComponent {
  ComponentKind kind;
  Integer multiplicity;
  Integer genus;
  friend bool operator==(const FiberComponent&, const FiberComponent&) = default;
};

enum class ModelTag : std::uint8_t { edixhoven, minimal };

inline std::string component_label(const ComponentKind& kind) {
  switch (kind.family) {
    case ComponentFamily::igusa:
      return "C" + std::to_string(kind.index);
    case ComponentFamily::e:
      if (kind.index == index_infinity) return "Einf_" + std::to_string(kind.copy);
      return "E_" + std::to_string(kind.index) + "_" + std::to_string(kind.copy);
    case ComponentFamily::f:
      if (kind.index == index_infinity) return "Finf_" + std::to_string(kind.copy);
      return "F" + std::to_string(kind.index) + "_" + std::to_string(kind.copy);
  }
  return "?";
}

/// A special fibre over p | N: ordered component list and the symmetric
/// integer intersection matrix. Immutable after construction.
struct FiberModel {
  std::uint64_t p = 0;
  int n = 0;
  std::uint64_t M = 1;
  ModelTag model = ModelTag::edixhoven;
  std::vector<FiberComponent> components;
  RationalMatrix matrix;

  std::uint64_t level() const {
    std::uint64_t pn = 1;
    for (int i = 0; i < n; ++i) pn *= p;
    return pn * M;
  }

  int index_of(const ComponentKind& kind) const {
    for (std::size_t i = 0; i < components.size(); ++i)
      if (components[i].kind == kind) return static_cast<int>(i);
    return -1;
  }

  RationalVector multiplicity_vector() const {
    RationalVector w(components.size());
    for (std::size_t i = 0; i < components.size(); ++i)
      w[i] = Rational(components[i].multiplicity);
    return w;
  }

  friend bool operator==(const FiberModel&, const FiberModel&) = default;
};

namespace detail {

// Everything the intersection formulas of one fibre depend on.
struct FiberContext {
  std::uint64_t p = 0;
  int n = 0;
  std::uint64_t M = 1;
  int xi1 = 0;  // xi(-1): 0 iff p = 1 mod 4
  int xi3 = 0;  // xi(-3): 0 iff p = 1 mod 3
  Integer eps2M;
  Integer eps3M;
  Integer dM;
  Integer k;
  Integer epsinf_pn;
  Integer igusa_genus;  // genus of X_0(M)
};

inline FiberContext make_context(std::uint64_t p, int n, std::uint64_t M) {
  if (p == 2 || p == 3)
    throw invalid_input("special fibres over 2 and 3 are not available");
  if (!is_prime(p) || p < 5) throw invalid_input("fibre prime must be a prime >= 5");
  if (n < 1) throw invalid_input("fibre exponent must be positive");
  if (M == 0 || M % p == 0 || std::gcd(M, std::uint64_t{6}) != 1)
    throw invalid_input("fibre cofactor must be coprime to 6p");
  FiberContext ctx;
  ctx.p = p;
  ctx.n = n;
  ctx.M = M;
  ctx.xi1 = xi(-1, p);
  ctx.xi3 = xi(-3, p);
  const Invariants im = invariants(factor_level(M));
  ctx.eps2M = im.eps2;
  ctx.eps3M = im.eps3;
  ctx.dM = im.d;
  ctx.k = k_count(p, M);
  ctx.epsinf_pn = epsinf_prime_power(p, n);
  ctx.igusa_genus = im.g;
  return ctx;
}

inline bool component_exists(const FiberContext& ctx, const ComponentKind& kind) {
  switch (kind.family) {
    case ComponentFamily::igusa:
      return kind.copy == 0 && kind.index >= 0 && kind.index <= ctx.n;
    case ComponentFamily::e: {
      if (kind.copy < 1 || Integer(kind.copy) > ctx.eps2M) return false;
      if (ctx.xi1 == 0) return kind.index >= 1 && kind.index <= ctx.n - 1;
      return kind.index == index_infinity;
    }
    case ComponentFamily::f: {
      if (kind.copy < 1 || Integer(kind.copy) > ctx.eps3M) return false;
      if (ctx.xi3 == 0) return kind.index >= 1 && kind.index <= ctx.n - 1;
      if (ctx.n % 2 == 0) return kind.index == index_infinity;
      return kind.index == 0 || kind.index == ctx.n;
    }
  }
  return false;
}

inline Integer component_multiplicity(const FiberContext& ctx, const ComponentKind& kind) {
  Rational m;
  switch (kind.family) {
    case ComponentFamily::igusa:
      m = Rational(euler_phi_prime_power(ctx.p, std::min(kind.index, ctx.n - kind.index)));
      break;
    case ComponentFamily::e:
      m = kind.index == index_infinity
              ? Rational(ctx.epsinf_pn, 2)
              : Rational(euler_phi_prime_power(ctx.p, std::min(kind.index, ctx.n - kind.index)), 2);
      break;
    case ComponentFamily::f:
      if (kind.index == index_infinity)
        m = Rational(ctx.epsinf_pn, 3);
      else if (kind.index == 0 || kind.index == ctx.n)
        m = Rational(ctx.epsinf_pn, 2);
      else
        m = Rational(euler_phi_prime_power(ctx.p, std::min(kind.index, ctx.n - kind.index)), 3);
      break;
  }
  const Integer mi = to_integer(m, "component multiplicity");
  if (mi <= 0) throw internal_error("nonpositive component multiplicity");
  return mi;
}

// The intersection-number case table for distinct components.
inline Integer intersection_number(const FiberContext& ctx, const ComponentKind& a,
                                   const ComponentKind& b) {
  // Order so that igusa < e < f for the dispatch below.
  if (static_cast<int>(a.family) > static_cast<int>(b.family))
    return intersection_number(ctx, b, a);
  const Integer p(ctx.p);

  if (a.family == ComponentFamily::igusa && b.family == ComponentFamily::igusa) {
    const int s = ctx.n - 2 * a.index;
    const int t = ctx.n - 2 * b.index;
    if (s * t > 0) {
      const Integer pmu = ipow(p, static_cast<unsigned>(mu(a.index, b.index, ctx.n)));
      const Rational extra2 = Rational(ctx.xi1 * ctx.eps2M, 2) * (pmu - 1);
      const int half_parity = (3 - (ctx.n % 2 == 0 ? 1 : -1)) / 2;  // 1 if n even, 2 if odd
      const Rational extra3 = Rational(ctx.xi3 * ctx.eps3M, 3) * (pmu - half_parity);
      return to_integer(ctx.k * pmu + extra2 + extra3, "Igusa intersection");
    }
    return ctx.k;
  }

  if (a.family == ComponentFamily::igusa && b.family == ComponentFamily::e)
    return (b.index == a.index || b.index == index_infinity) ? 1 : 0;

  if (a.family == ComponentFamily::igusa && b.family == ComponentFamily::f) {
    const int s = ctx.n - 2 * a.index;
    if (b.index == a.index || b.index == index_infinity) return 1;
    if (b.index == 0 && s > 0) return 1;
    if (b.index == ctx.n && s < 0) return 1;
    return 0;
  }

  if (a.family == ComponentFamily::e) return 0;  // e-e and e-f pairs never meet

  // f-f: the two halves of an odd-power fibre are chained through F0/Fn.
  const bool zero_n_pair = (a.index == 0 && b.index == ctx.n) ||
                           (a.index == ctx.n && b.index == 0);
  return (zero_n_pair && a.copy == b.copy) ? 1 : 0;
}

// Closed-form self-intersections.
inline Integer self_intersection(const FiberContext& ctx, const ComponentKind& kind) {
  const Integer p(ctx.p);
  switch (kind.family) {
    case ComponentFamily::igusa: {
      const int sign_n = ctx.n % 2 == 0 ? 1 : -1;
      if (kind.index == 0 || kind.index == ctx.n) {
        const Rational v = -Rational(ctx.dM, 12) * ipow(p, static_cast<unsigned>(ctx.n - 1)) * (p - 1) -
                           Rational(ctx.xi1 * ctx.eps2M, 2) -
                           Rational((3 - sign_n) * ctx.xi3 * ctx.eps3M, 6);
        return to_integer(v, "Igusa self-intersection");
      }
      const int e = ctx.n - 2 * kind.index;
      const Rational v = -Rational(ctx.dM, 6) * ipow(p, static_cast<unsigned>(e < 0 ? -e : e)) -
                         Rational(ctx.eps2M, 2) - Rational(ctx.eps3M, 3) -
                         Rational((1 - sign_n) * ctx.xi3 * ctx.eps3M, 6);
      return to_integer(v, "Igusa self-intersection");
    }
    case ComponentFamily::e:
      return -2;
    case ComponentFamily::f:
      return (kind.index == 0 || kind.index == ctx.n) ? -2 : -3;
  }
  throw internal_error("unreachable component family");
}

// Canonical component order: Igusa a = 0..n, then E by index then copy,
// then F by index order 0, 1..n-1, n, infinity, then copy.
inline std::vector<ComponentKind> component_order(const FiberContext& ctx) {
  std::vector<ComponentKind> order;
  for (int a = 0; a <= ctx.n; ++a)
    order.push_back({ComponentFamily::igusa, a, 0});
  auto push_copies = [&](ComponentFamily fam, int index, const Integer& copies) {
    for (Integer i = 1; i <= copies; ++i)
      order.push_back({fam, index, static_cast<int>(i)});
  };
  if (ctx.xi1 == 0) {
    for (int a = 1; a <= ctx.n - 1; ++a) push_copies(ComponentFamily::e, a, ctx.eps2M);
  } else {
    push_copies(ComponentFamily::e, index_infinity, ctx.eps2M);
  }
  if (ctx.xi3 == 0) {
    for (int a = 1; a <= ctx.n - 1; ++a) push_copies(ComponentFamily::f, a, ctx.eps3M);
  } else if (ctx.n % 2 == 0) {
    push_copies(ComponentFamily::f, index_infinity, ctx.eps3M);
  } else {
    push_copies(ComponentFamily::f, 0, ctx.eps3M);
    push_copies(ComponentFamily::f, ctx.n, ctx.eps3M);
  }
  return order;
}

inline void check_fiber_invariants(const FiberModel& fib) {
  const std::size_t dim = fib.components.size();
  if (fib.matrix.dim() != dim) throw internal_error("fibre matrix dimension mismatch");
  if (!fib.matrix.is_symmetric()) throw internal_error("fibre matrix not symmetric");
  for (std::size_t i = 0; i < dim; ++i) {
    if (!is_integral(fib.matrix.at(i, i))) throw internal_error("non-integral diagonal");
    if (dim >= 2 && fib.matrix.at(i, i) >= 0)
      throw internal_error("nonnegative self-intersection in a reducible fibre");
    for (std::size_t j = i + 1; j < dim; ++j)
      if (!is_integral(fib.matrix.at(i, j)) || fib.matrix.at(i, j) < 0)
        throw internal_error("off-diagonal intersection not a nonnegative integer");
  }
  // matrix . multiplicities = 0, exactly.
  const RationalVector w = fib.multiplicity_vector();
  const RationalVector zero(dim);
  if (mat_vec(fib.matrix, w) != zero)
    throw internal_error("fibre matrix does not annihilate the multiplicity vector");
  // Kernel is one-dimensional and spanned by the multiplicities.
  const auto kernel = kernel_basis(fib.matrix);
  if (kernel.size() != 1) throw internal_error("fibre matrix kernel is not one-dimensional");
  // Connectedness of the dual graph.
  std::vector<char> seen(dim, 0);
  std::vector<std::size_t> stack{0};
  seen[0] = 1;
  while (!stack.empty()) {
    const std::size_t i = stack.back();
    stack.pop_back();
    for (std::size_t j = 0; j < dim; ++j)
      if (!seen[j] && i != j && fib.matrix.at(i, j) > 0) {
        seen[j] = 1;
        stack.push_back(j);
      }
  }
  if (std::find(seen.begin(), seen.end(), 0) != seen.end())
    throw internal_error("fibre dual graph is disconnected");
}

}  // namespace detail

/// Intersection number of two distinct components of the fibre over p of
/// the model with N = p^n M. Both components must exist in that fibre.
inline Integer intersection_number(std::uint64_t p, int n, std::uint64_t M,
                                   const ComponentKind& a, const ComponentKind& b) {
  const auto ctx = detail::make_context(p, n, M);
  if (!detail::component_exists(ctx, a) || !detail::component_exists(ctx, b))
    throw invalid_input("intersection_number: component absent from this fibre");
  if (a == b) return detail::self_intersection(ctx, a);
  return detail::intersection_number(ctx, a, b);
}

/// Builds the special fibre over p of the regular model of X_0(p^n M).
/// Self-intersections are evaluated twice -- closed form and the value
/// forced by row-sum zero -- and must agree exactly.
inline FiberModel build_edixhoven(std::uint64_t p, int n, std::uint64_t M) {
  const auto ctx = detail::make_context(p, n, M);
  FiberModel fib;
  fib.p = p;
  fib.n = n;
  fib.M = M;
  fib.model = ModelTag::edixhoven;

  const auto order = detail::component_order(ctx);
  const std::size_t dim = order.size();
  fib.components.reserve(dim);
  for (const ComponentKind& kind : order) {
    FiberComponent c;
    c.kind = kind;
    c.multiplicity = detail::component_multiplicity(ctx, kind);
    c.genus = kind.family == ComponentFamily::igusa ? ctx.igusa_genus : 0;
    fib.components.push_back(std::move(c));
  }

  fib.matrix = RationalMatrix(dim);
  for (std::size_t i = 0; i < dim; ++i)
    for (std::size_t j = i + 1; j < dim; ++j) {
      const Integer v = detail::intersection_number(ctx, order[i], order[j]);
      fib.matrix.at(i, j) = Rational(v);
      fib.matrix.at(j, i) = Rational(v);
    }
  for (std::size_t i = 0; i < dim; ++i) {
    const Integer closed = detail::self_intersection(ctx, order[i]);
    // Row-sum derivation: m_i Gamma_i^2 = -sum_{j != i} m_j Gamma_i Gamma_j.
    Rational acc = 0;
    for (std::size_t j = 0; j < dim; ++j)
      if (j != i) acc += Rational(fib.components[j].multiplicity) * fib.matrix.at(i, j);
    const Rational derived = -acc / Rational(fib.components[i].multiplicity);
    if (Rational(closed) != derived)
      throw internal_error("self-intersection closed form disagrees with row sums at " +
                           component_label(order[i]));
    fib.matrix.at(i, i) = Rational(closed);
  }

  detail::check_fiber_invariants(fib);
  return fib;
}

/// Sum of m_i (2 g_i - 2 - Gamma_i^2) over the fibre; equals 2g - 2 for the
/// genus g of X_0(N) on every regular model.
inline Rational fiber_canonical_degree_check(const FiberModel& fib, const Integer& /*g*/) {
  Rational total = 0;
  for (std::size_t i = 0; i < fib.components.size(); ++i)
    total += Rational(fib.components[i].multiplicity) *
             (Rational(2 * fib.components[i].genus - 2) - fib.matrix.at(i, i));
  return total;
}

/// Deterministic DOT rendering of the dual graph: one node per component
/// (multiplicity, genus, self-intersection), one edge per meeting pair,
/// labelled by the intersection number. Fibres over p | N always have at
/// least two components, so the graph is never trivial.
inline std::string dual_graph_dot(const FiberModel& fib) {
  std::ostringstream out;
  out << "graph \"X0(" << fib.level() << ") fibre p=" << fib.p << " "
      << (fib.model == ModelTag::edixhoven ? "edixhoven" : "minimal") << "\" {\n";
  out << "  node [shape=box];\n";
  for (std::size_t i = 0; i < fib.components.size(); ++i) {
    const auto& c = fib.components[i];
    out << "  \"" << component_label(c.kind) << "\" [label=\"" << component_label(c.kind)
        << "\\nm=" << c.multiplicity.str() << " g=" << c.genus.str()
        << " self=" << numerator(fib.matrix.at(i, i)).str() << "\"];\n";
  }
  for (std::size_t i = 0; i < fib.components.size(); ++i)
    for (std::size_t j = i + 1; j < fib.components.size(); ++j)
      if (fib.matrix.at(i, j) > 0)
        out << "  \"" << component_label(fib.components[i].kind) << "\" -- \""
            << component_label(fib.components[j].kind)
            << "\" [label=\"" << numerator(fib.matrix.at(i, j)).str() << "\"];\n";
  out << "}\n";
  return out.str();
}

}  // namespace x0models
