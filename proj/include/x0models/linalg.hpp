#pragma once

#include <cstddef>
#include <vector>

#include "x0models/errors.hpp"
#include "x0models/rational.hpp"

namespace x0models {

class RationalVector {
 public:
  RationalVector() = default;
  explicit RationalVector(std::size_t dim) : entries_(dim) {}
  explicit RationalVector(std::vector<Rational> entries) : entries_(std::move(entries)) {}

  std::size_t dim() const { return entries_.size(); }
  Rational& operator[](std::size_t i) { return entries_[i]; }
  const Rational& operator[](std::size_t i) const { return entries_[i]; }
  bool operator==(const RationalVector&) const = default;

  const std::vector<Rational>& entries() const { return entries_; }

 private:
  std::vector<Rational> entries_;
};

class RationalMatrix {
 public:
  RationalMatrix() = default;
  explicit RationalMatrix(std::size_t dim) : dim_(dim), a_(dim * dim) {}

  std::size_t dim() const { return dim_; }
  Rational& at(std::size_t i, std::size_t j) { return a_[i * dim_ + j]; }
  const Rational& at(std::size_t i, std::size_t j) const { return a_[i * dim_ + j]; }
  bool operator==(const RationalMatrix&) const = default;

  bool is_symmetric() const {
    for (std::size_t i = 0; i < dim_; ++i)
      for (std::size_t j = i + 1; j < dim_; ++j)
        if (at(i, j) != at(j, i)) return false;
    return true;
  }

 private:
  std::size_t dim_ = 0;
  std::vector<Rational> a_;
};

inline RationalVector mat_vec(const RationalMatrix& m, const RationalVector& v) {
  if (m.dim() != v.dim()) throw invalid_input("mat_vec: dimension mismatch");
  RationalVector out(m.dim());
  for (std::size_t i = 0; i < m.dim(); ++i) {
    Rational s = 0;
    for (std::size_t j = 0; j < m.dim(); ++j) s += m.at(i, j) * v[j];
    out[i] = s;
  }
  return out;
}

inline Rational dot(const RationalVector& a, const RationalVector& b) {
  if (a.dim() != b.dim()) throw invalid_input("dot: dimension mismatch");
  Rational s = 0;
  for (std::size_t i = 0; i < a.dim(); ++i) s += a[i] * b[i];
  return s;
}

inline RationalVector scale(const Rational& c, const RationalVector& v) {
  RationalVector out(v.dim());
  for (std::size_t i = 0; i < v.dim(); ++i) out[i] = c * v[i];
  return out;
}

inline RationalVector add(const RationalVector& a, const RationalVector& b) {
  if (a.dim() != b.dim()) throw invalid_input("add: dimension mismatch");
  RationalVector out(a.dim());
  for (std::size_t i = 0; i < a.dim(); ++i) out[i] = a[i] + b[i];
  return out;
}

inline RationalMatrix scale(const Rational& c, const RationalMatrix& m) {
  RationalMatrix out(m.dim());
  for (std::size_t i = 0; i < m.dim(); ++i)
    for (std::size_t j = 0; j < m.dim(); ++j) out.at(i, j) = c * m.at(i, j);
  return out;
}

inline RationalMatrix add(const RationalMatrix& a, const RationalMatrix& b) {
  if (a.dim() != b.dim()) throw invalid_input("add: dimension mismatch");
  RationalMatrix out(a.dim());
  for (std::size_t i = 0; i < a.dim(); ++i)
    for (std::size_t j = 0; j < a.dim(); ++j) out.at(i, j) = a.at(i, j) + b.at(i, j);
  return out;
}

/// u^T m v, the bilinear form behind every pairing in the library.
inline Rational quadratic_form(const RationalVector& u, const RationalMatrix& m,
                               const RationalVector& v) {
  return dot(u, mat_vec(m, v));
}

namespace detail {

// Row echelon form of the augmented system [A | B], exact and deterministic.
// Rows are first cleared of denominators, then eliminated fraction-free
// (Bareiss): every division below is exact. Pivot choice is "first row with
// a nonzero entry in the leftmost open column" -- no magnitude pivoting,
// exact arithmetic needs none, and determinism matters more.
struct EchelonForm {
  std::vector<std::vector<Integer>> rows;  // width = n + aug
  std::vector<int> pivot_row_of_col;       // -1 for free columns
  std::vector<std::size_t> pivot_cols;     // ascending
  std::size_t n = 0;                       // coefficient columns
  std::size_t aug = 0;                     // augmented columns
};

inline EchelonForm echelon(const RationalMatrix& m,
                           const std::vector<RationalVector>& rhs_cols) {
  const std::size_t n = m.dim();
  const std::size_t aug = rhs_cols.size();
  EchelonForm e;
  e.n = n;
  e.aug = aug;
  e.pivot_row_of_col.assign(n, -1);
  e.rows.assign(n, std::vector<Integer>(n + aug));
  for (std::size_t i = 0; i < n; ++i) {
    Integer den_lcm = 1;
    auto fold = [&](const Rational& x) { den_lcm = lcm(den_lcm, denominator(x)); };
    for (std::size_t j = 0; j < n; ++j) fold(m.at(i, j));
    for (std::size_t c = 0; c < aug; ++c) fold(rhs_cols[c][i]);
    for (std::size_t j = 0; j < n; ++j)
      e.rows[i][j] = to_integer(m.at(i, j) * den_lcm, "cleared row entry");
    for (std::size_t c = 0; c < aug; ++c)
      e.rows[i][n + c] = to_integer(rhs_cols[c][i] * den_lcm, "cleared rhs entry");
  }

  Integer prev_pivot = 1;
  std::size_t rank = 0;
  for (std::size_t col = 0; col < n && rank < n; ++col) {
    std::size_t pr = rank;
    while (pr < n && e.rows[pr][col] == 0) ++pr;
    if (pr == n) continue;
    if (pr != rank) std::swap(e.rows[pr], e.rows[rank]);
    const Integer pivot = e.rows[rank][col];
    for (std::size_t i = rank + 1; i < n; ++i) {
      const Integer factor = e.rows[i][col];
      for (std::size_t j = col; j < n + aug; ++j) {
        Integer num = e.rows[i][j] * pivot - factor * e.rows[rank][j];
        // Bareiss: division by the previous pivot is exact.
        if (prev_pivot != 1) {
          if (num % prev_pivot != 0)
            throw internal_error("echelon: inexact fraction-free division");
          num /= prev_pivot;
        }
        e.rows[i][j] = num;
      }
      e.rows[i][col] = 0;
    }
    e.pivot_row_of_col[col] = static_cast<int>(rank);
    e.pivot_cols.push_back(col);
    prev_pivot = pivot;
    ++rank;
  }
  return e;
}

// Back-substitution with the free variables fixed to the given values.
inline RationalVector back_substitute(const EchelonForm& e,
                                      const std::vector<Rational>& free_values,
                                      std::size_t rhs_col) {
  RationalVector x(e.n);
  std::size_t free_seen = 0;
  for (std::size_t col = 0; col < e.n; ++col)
    if (e.pivot_row_of_col[col] < 0) x[col] = free_values[free_seen++];
  for (std::size_t r = e.pivot_cols.size(); r-- > 0;) {
    const std::size_t pc = e.pivot_cols[r];
    const auto& row = e.rows[r];
    Rational s = row[e.n + rhs_col];
    for (std::size_t j = pc + 1; j < e.n; ++j)
      if (row[j] != 0) s -= Rational(row[j]) * x[j];
    x[pc] = s / Rational(row[pc]);
  }
  return x;
}

// Scales to coprime integer entries with positive first nonzero entry.
inline RationalVector normalize_integer_vector(const RationalVector& v) {
  Integer den_lcm = 1;
  for (std::size_t i = 0; i < v.dim(); ++i) den_lcm = lcm(den_lcm, denominator(v[i]));
  std::vector<Integer> w(v.dim());
  Integer g = 0;
  for (std::size_t i = 0; i < v.dim(); ++i) {
    w[i] = numerator(Rational(v[i] * den_lcm));
    g = gcd(g, w[i]);
  }
  if (g == 0) return v;
  Integer sign = 0;
  for (const Integer& x : w)
    if (x != 0) {
      sign = x < 0 ? -1 : 1;
      break;
    }
  RationalVector out(v.dim());
  for (std::size_t i = 0; i < v.dim(); ++i) out[i] = Rational(w[i] * sign / g);
  return out;
}

}  // namespace detail

/// Basis of the null space. Deterministic: basis vectors correspond to the
/// free columns in ascending order, each normalized to coprime integer
/// entries with positive first nonzero entry.
inline std::vector<RationalVector> kernel_basis(const RationalMatrix& m) {
  // Homogeneous solve with one free variable set to 1 at a time.
  const auto e = detail::echelon(m, {RationalVector(m.dim())});
  std::size_t free_count = 0;
  for (std::size_t col = 0; col < e.n; ++col)
    if (e.pivot_row_of_col[col] < 0) ++free_count;

  std::vector<RationalVector> basis;
  basis.reserve(free_count);
  for (std::size_t idx = 0; idx < free_count; ++idx) {
    std::vector<Rational> free_values(free_count, Rational(0));
    free_values[idx] = 1;
    basis.push_back(detail::normalize_integer_vector(
        detail::back_substitute(e, free_values, 0)));
  }
  return basis;
}

/// One particular solution of m x = rhs (free variables set to 0), with the
/// residual checked exactly. Inconsistent systems raise internal_error: every
/// system this library builds is guaranteed solvable, so inconsistency means
/// a transcription bug in the matrix or right-hand side.
inline RationalVector solve_singular(const RationalMatrix& m, const RationalVector& rhs) {
  if (m.dim() != rhs.dim()) throw invalid_input("solve_singular: dimension mismatch");
  const auto e = detail::echelon(m, {rhs});
  // A zero coefficient row with nonzero rhs is inconsistent.
  for (std::size_t i = e.pivot_cols.size(); i < e.n; ++i)
    if (e.rows[i][e.n] != 0)
      throw internal_error("solve_singular: inconsistent system");
  std::size_t free_count = 0;
  for (std::size_t col = 0; col < e.n; ++col)
    if (e.pivot_row_of_col[col] < 0) ++free_count;
  RationalVector x = detail::back_substitute(
      e, std::vector<Rational>(free_count, Rational(0)), 0);
  if (mat_vec(m, x) != rhs)
    throw internal_error("solve_singular: nonzero residual");
  return x;
}

}  // namespace x0models
