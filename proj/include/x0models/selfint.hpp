#pragma once

#include <cmath>
#include <cstdint>
#include <iomanip>
#include <sstream>
#include <string>
#include <vector>

#include "x0models/arith.hpp"
#include "x0models/divisors.hpp"
#include "x0models/errors.hpp"
#include "x0models/fiber.hpp"
#include "x0models/minimal.hpp"

namespace x0models {

/// An exact rational attached to a prime, standing for coeff * log p.
/// Values for different primes are never merged into one coefficient.
struct LogWeightedRational {
  std::uint64_t p = 0;
  Rational coeff;
  friend bool operator==(const LogWeightedRational&, const LogWeightedRational&) = default;
};

struct FinitePartTerm {
  std::uint64_t p = 0;
  int n = 0;
  std::uint64_t M = 1;
  Rational coeff;  // of log p
  friend bool operator==(const FinitePartTerm&, const FinitePartTerm&) = default;
};

/// The vertical ("finite") part of the self-intersection of the canonical
/// sheaf: per prime p | N an exact coefficient of log p, plus float fields
/// for reporting only.
struct FinitePartResult {
  std::uint64_t N = 1;
  Integer g;
  std::vector<FinitePartTerm> primes;
  double value_float = 0.0;      // sum coeff_p * log p
  double ratio_to_g_logN = 0.0;  // value_float / (g log N)
};

/// <V, W> over one fibre: coeff = V^T . matrix . W (times log p, implicit).
inline LogWeightedRational pair_vertical(const VerticalDivisor& v, const VerticalDivisor& w,
                                         const FiberModel& fib) {
  if (v.p != fib.p || w.p != fib.p)
    throw invalid_input("pair_vertical: divisors belong to a different prime");
  if (v.coefficients.dim() != fib.components.size() ||
      w.coefficients.dim() != fib.components.size())
    throw invalid_input("pair_vertical: dimension mismatch with the fibre");
  return LogWeightedRational{fib.p,
                             quadratic_form(v.coefficients, fib.matrix, w.coefficients)};
}

/// The integer-valued polynomial f(p,n,M) controlling the deviation of the
/// per-prime coefficient from n*g. The -9 delta term is active exactly when
/// the model had to be blown down (M = 1; the parity factor limits it to
/// even n).
inline Integer f_polynomial(std::uint64_t p, int n, std::uint64_t M, const Invariants& invN) {
  const Invariants invM = invariants(factor_level(M));
  const Integer pm1 = Integer(p) - 1;
  const Integer nn = n;
  const int xi3 = xi(-3, p);
  const int sign_n = n % 2 == 0 ? 1 : -1;
  const Integer delta1M = M == 1 ? 1 : 0;

  const Integer& dN = invN.d;
  Integer f = 2 * dN * dN;
  f -= 8 * dN * invM.d * (ipow(Integer(p), static_cast<unsigned>(n - 1)) - 1);
  f -= 6 * (nn * pm1 - 4) * dN * invN.epsinf;
  f -= 96 * dN * invM.epsinf;
  f -= (3 * (invN.eps2 + 2 * invN.eps3 - 4) * nn - 2 * invN.eps3 +
        2 * Integer(1 + sign_n) * (xi3 * invM.eps3 - 9 * delta1M)) *
       dN * pm1;
  f += 4 * (12 - 3 * invN.eps2 - 4 * invN.eps3) * dN;
  f += 144 * d_prime_power(p, n) * invM.epsinf * invM.epsinf;
  f += 12 * (nn * pm1 + 2) * (3 * invN.eps2 + 4 * invN.eps3 - 12) * invN.epsinf;
  f += 2 * (nn * pm1 + 2) *
       (9 * invN.eps2 * (invM.eps2 - 4) + 16 * invN.eps3 * (invM.eps3 - 3) +
        12 * invN.eps2 * invN.eps3);
  return f;
}

namespace detail {

// g/(g-1) <u,v> - (<u,u> + <v,v>)/(2g-2) on one fibre, from the exact
// solve-and-pair pipeline.
inline Rational finite_part_coefficient(const FiberModel& fib, const Invariants& invN) {
  const VerticalDivisor u = solve_vm(fib, invN.g, CuspSide::zero);
  const VerticalDivisor v = solve_vm(fib, invN.g, CuspSide::infinity);
  const Rational uv = pair_vertical(u, v, fib).coeff;
  const Rational uu = pair_vertical(u, u, fib).coeff;
  const Rational vv = pair_vertical(v, v, fib).coeff;
  const Integer& g = invN.g;
  return Rational(g) / Rational(g - 1) * uv - (uu + vv) / Rational(2 * g - 2);
}

inline void require_admissible(const FactoredLevel& level) {
  if (!level.coprime_to_6)
    throw unsupported_level("level " + std::to_string(level.N) + " not coprime to 6");
  if (level.N == 1 || level.excluded)
    throw unsupported_level("level " + std::to_string(level.N) + " is not supported");
}

}  // namespace detail

/// The finite part of <omega, omega> for an admissible level of genus >= 2,
/// computed per prime on the minimal model. The coefficient is also checked
/// against the closed form n g + f(p,n,M) / (12 d(N) (p-1)), exactly.
inline FinitePartResult finite_part(std::uint64_t N) {
  const FactoredLevel level = factor_level(N);
  detail::require_admissible(level);
  const Invariants invN = invariants(level);
  if (invN.g < 2)
    throw genus_too_small("genus of X_0(" + std::to_string(N) + ") is " + invN.g.str() +
                          "; the finite part needs genus >= 2");

  FinitePartResult out;
  out.N = N;
  out.g = invN.g;
  double value = 0;
  for (const PrimeBlock& block : level.blocks) {
    const FiberModel fib = minimal_model(block.p, block.n, block.M);
    const Rational coeff = detail::finite_part_coefficient(fib, invN);
    const Rational closed =
        Rational(Integer(block.n) * invN.g) +
        Rational(f_polynomial(block.p, block.n, block.M, invN)) /
            Rational(12 * invN.d * (Integer(block.p) - 1));
    if (coeff != closed)
      throw internal_error("finite part coefficient disagrees with the f closed form at p = " +
                           std::to_string(block.p));
    out.primes.push_back(FinitePartTerm{block.p, block.n, block.M, coeff});
    value += rational_to_double(coeff) * std::log(static_cast<double>(block.p));
  }
  out.value_float = value;
  out.ratio_to_g_logN =
      value / (rational_to_double(Rational(invN.g)) * std::log(static_cast<double>(N)));
  return out;
}

struct ReportRow {
  std::uint64_t N = 0;
  bool skipped = false;
  std::string skip_reason;
  Integer g;
  std::vector<FinitePartTerm> primes;
  double b_float = 0;
  double g_logN = 0;
  double ratio = 0;
  double reference_3g_logN = 0;
};

inline std::vector<ReportRow> asymptotic_rows(const std::vector<std::uint64_t>& levels) {
  std::vector<ReportRow> rows;
  rows.reserve(levels.size());
  for (const std::uint64_t N : levels) {
    ReportRow row;
    row.N = N;
    try {
      const FinitePartResult r = finite_part(N);
      row.g = r.g;
      row.primes = r.primes;
      row.b_float = r.value_float;
      row.g_logN = rational_to_double(Rational(r.g)) * std::log(static_cast<double>(N));
      row.ratio = r.ratio_to_g_logN;
      row.reference_3g_logN = 3 * row.g_logN;
    } catch (const error& e) {
      row.skipped = true;
      row.skip_reason = e.what();
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

/// Text table of the finite part across levels. The archimedean 2g log N
/// share of the reference total is cited from the literature, not computed
/// here, and the rows say so.
inline std::string asymptotic_report(const std::vector<std::uint64_t>& levels) {
  const auto rows = asymptotic_rows(levels);
  std::ostringstream out;
  out << "N\tg\tcoeffs(log p)\tb\tg*logN\tratio\t3g*logN(ref)\n";
  for (const auto& row : rows) {
    if (row.skipped) {
      out << row.N << "\tskipped: " << row.skip_reason << "\n";
      continue;
    }
    out << row.N << "\t" << row.g.str() << "\t";
    for (std::size_t i = 0; i < row.primes.size(); ++i) {
      if (i) out << ",";
      out << row.primes[i].p << ":" << rational_to_string(row.primes[i].coeff);
    }
    out << "\t" << std::setprecision(12) << row.b_float << "\t" << row.g_logN << "\t"
        << row.ratio << "\t" << row.reference_3g_logN << "\n";
  }
  out << "# reference total 3g*logN assumes the archimedean 2g*logN part "
         "(cited, not computed)\n";
  return out.str();
}

}  // namespace x0models
