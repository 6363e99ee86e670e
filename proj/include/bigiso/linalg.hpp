#pragma once

#include <optional>
#include <stdexcept>
#include <vector>

#include "bigiso/matrix.hpp"
#include "bigiso/polynomial.hpp"
#include "bigiso/rational.hpp"
#include "bigiso/rational_function.hpp"

namespace bigiso {

// Exact quotient a / b where b is known to divide a.
inline Rational exact_quotient(const Rational& a, const Rational& b) { return a / b; }
inline RationalFunction exact_quotient(const RationalFunction& a, const RationalFunction& b) {
  return a / b;
}
inline Polynomial exact_quotient(const Polynomial& a, const Polynomial& b) {
  auto q = a.divide_exact(b);
  if (!q) throw std::logic_error("non-exact division in fraction-free elimination");
  return *std::move(q);
}

template <class T>
struct RrefResult {
  Matrix<T> reduced;
  std::vector<std::size_t> pivots;
  std::size_t rank = 0;
};

/// Gauss-Jordan reduction over a field (Rational or RationalFunction).
template <class T>
RrefResult<T> rref(Matrix<T> m) {
  RrefResult<T> out;
  std::size_t r = 0;
  for (std::size_t c = 0; c < m.cols() && r < m.rows(); ++c) {
    std::size_t p = r;
    while (p < m.rows() && m(p, c).is_zero()) ++p;
    if (p == m.rows()) continue;
    m.swap_rows(p, r);
    const T inv = T(1) / m(r, c);
    for (std::size_t j = c; j < m.cols(); ++j) m(r, j) *= inv;
    for (std::size_t i = 0; i < m.rows(); ++i) {
      if (i == r || m(i, c).is_zero()) continue;
      const T f = m(i, c);
      for (std::size_t j = c; j < m.cols(); ++j) {
        if (!m(r, j).is_zero()) m(i, j) -= f * m(r, j);
      }
    }
    out.pivots.push_back(c);
    ++r;
  }
  out.rank = r;
  out.reduced = std::move(m);
  return out;
}

/// Basis of {x : m x = 0}, one vector per free column of the RREF.
template <class T>
std::vector<std::vector<T>> kernel_basis(const Matrix<T>& m) {
  const auto rr = rref(m);
  std::vector<bool> is_pivot(m.cols(), false);
  for (auto p : rr.pivots) is_pivot[p] = true;
  std::vector<std::vector<T>> basis;
  for (std::size_t j = 0; j < m.cols(); ++j) {
    if (is_pivot[j]) continue;
    std::vector<T> v(m.cols(), T(0));
    v[j] = T(1);
    for (std::size_t i = 0; i < rr.rank; ++i) v[rr.pivots[i]] = -rr.reduced(i, j);
    basis.push_back(std::move(v));
  }
  return basis;
}

/// Inverse over a field, nullopt when singular.
template <class T>
std::optional<Matrix<T>> inverse(const Matrix<T>& m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("inverse of non-square matrix");
  const std::size_t n = m.rows();
  auto rr = rref(m.hstack(Matrix<T>::identity(n)));
  if (rr.rank < n || (n > 0 && rr.pivots[n - 1] != n - 1)) return std::nullopt;
  return rr.reduced.block(0, n, n, n);
}

/// Outcome of fraction-free (Bareiss) forward elimination.
template <class T>
struct BareissResult {
  Matrix<T> echelon;
  std::vector<std::size_t> pivots;  // pivot column per echelon row
  std::vector<std::size_t> row_order;  // original row index for each echelon row
  std::size_t rank = 0;
  int sign = 1;
};

/// Bareiss elimination over an integral domain; every intermediate entry is a
/// minor of the input, so all divisions are exact.
template <class T>
BareissResult<T> bareiss(Matrix<T> m) {
  BareissResult<T> out;
  out.row_order.resize(m.rows());
  for (std::size_t i = 0; i < m.rows(); ++i) out.row_order[i] = i;
  T prev(1);
  std::size_t r = 0;
  for (std::size_t c = 0; c < m.cols() && r < m.rows(); ++c) {
    std::size_t p = r;
    while (p < m.rows() && m(p, c).is_zero()) ++p;
    if (p == m.rows()) continue;
    if (p != r) {
      m.swap_rows(p, r);
      std::swap(out.row_order[p], out.row_order[r]);
      out.sign = -out.sign;
    }
    for (std::size_t i = r + 1; i < m.rows(); ++i) {
      for (std::size_t j = c + 1; j < m.cols(); ++j) {
        T v = m(r, c) * m(i, j) - m(i, c) * m(r, j);
        m(i, j) = exact_quotient(v, prev);
      }
      m(i, c) = T(0);
    }
    prev = m(r, c);
    out.pivots.push_back(c);
    ++r;
  }
  out.rank = r;
  out.echelon = std::move(m);
  return out;
}

template <class T>
T determinant(const Matrix<T>& m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("determinant of non-square matrix");
  const std::size_t n = m.rows();
  if (n == 0) return T(1);
  auto b = bareiss(m);
  if (b.rank < n) return T(0);
  T d = b.echelon(n - 1, n - 1);
  if (b.sign < 0) d = -d;
  return d;
}

template <class T>
std::size_t rank_of(const Matrix<T>& m) {
  return bareiss(m).rank;
}

}  // namespace bigiso
