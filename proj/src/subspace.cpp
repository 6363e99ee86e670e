#include "bigiso/subspace.hpp"

#include <sstream>
#include <stdexcept>

#include "bigiso/linalg.hpp"

namespace bigiso {

namespace {

void require_same_ambient(const Subspace& a, const Subspace& b) {
  if (a.ambient_dim() != b.ambient_dim()) throw std::invalid_argument("ambient dimension mismatch");
}

}  // namespace

Subspace Subspace::from_rows(const Matrix<Rational>& rows) {
  Subspace s(rows.cols());
  auto rr = rref(rows);
  s.basis_ = rr.reduced.block(0, 0, rr.rank, rows.cols());
  s.pivots_ = std::move(rr.pivots);
  return s;
}

Subspace Subspace::span(std::size_t ambient, const std::vector<Vec>& vectors) {
  for (const auto& v : vectors) {
    if (v.size() != ambient) throw std::invalid_argument("vector length differs from ambient dimension");
  }
  return from_rows(Matrix<Rational>::from_rows(vectors, ambient));
}

Subspace Subspace::full(std::size_t ambient) {
  return from_rows(Matrix<Rational>::identity(ambient));
}

Subspace Subspace::kernel(const Matrix<Rational>& m) {
  return span(m.cols(), kernel_basis(m));
}

Subspace Subspace::image(const Matrix<Rational>& m) { return from_rows(m.transpose()); }

std::optional<Vec> Subspace::coordinates(const Vec& v) const {
  if (v.size() != ambient_) throw std::invalid_argument("vector length differs from ambient dimension");
  // In RREF the coordinate on row i is the entry of v at pivot i.
  Vec c(dim());
  Vec rest = v;
  for (std::size_t i = 0; i < dim(); ++i) {
    c[i] = v[pivots_[i]];
    if (c[i].is_zero()) continue;
    for (std::size_t j = 0; j < ambient_; ++j) rest[j] -= c[i] * basis_(i, j);
  }
  for (const auto& x : rest)
    if (!x.is_zero()) return std::nullopt;
  return c;
}

bool Subspace::contains(const Vec& v) const { return coordinates(v).has_value(); }

bool Subspace::contains(const Subspace& other) const {
  require_same_ambient(*this, other);
  for (const auto& v : other.vectors())
    if (!contains(v)) return false;
  return true;
}

std::string Subspace::str() const {
  std::ostringstream os;
  os << "span{";
  for (std::size_t i = 0; i < dim(); ++i) {
    os << (i ? ", " : "") << "(";
    for (std::size_t j = 0; j < ambient_; ++j) os << (j ? "," : "") << basis_(i, j).str();
    os << ")";
  }
  os << "}";
  return os.str();
}

Subspace subspace_sum(const Subspace& a, const Subspace& b) {
  require_same_ambient(a, b);
  return Subspace::from_rows(a.basis().vstack(b.basis()));
}

Subspace annihilator(const Subspace& s) { return Subspace::kernel(s.basis()); }

Subspace subspace_intersection(const Subspace& a, const Subspace& b) {
  require_same_ambient(a, b);
  return annihilator(subspace_sum(annihilator(a), annihilator(b)));
}

Subspace complement_in(const Subspace& inner, const Subspace& outer) {
  require_same_ambient(inner, outer);
  if (!outer.contains(inner)) throw std::invalid_argument("complement_in: inner not contained in outer");
  Subspace acc = inner;
  std::vector<Vec> chosen;
  for (const auto& v : outer.vectors()) {
    if (acc.contains(v)) continue;
    chosen.push_back(v);
    acc = subspace_sum(acc, Subspace::span(outer.ambient_dim(), {v}));
  }
  return Subspace::span(outer.ambient_dim(), chosen);
}

std::optional<Vec> solve_left(const Matrix<Rational>& rows, const Vec& target) {
  if (target.size() != rows.cols()) throw std::invalid_argument("solve_left: length mismatch");
  const std::size_t k = rows.rows();
  Matrix<Rational> aug(rows.cols(), k + 1);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < rows.cols(); ++j) aug(j, i) = rows(i, j);
  for (std::size_t j = 0; j < rows.cols(); ++j) aug(j, k) = target[j];
  auto rr = rref(aug);
  Vec c(k);
  for (std::size_t i = 0; i < rr.rank; ++i) {
    if (rr.pivots[i] == k) return std::nullopt;
    c[rr.pivots[i]] = rr.reduced(i, k);
  }
  return c;
}

Rational dot(const Vec& a, const Vec& b) {
  if (a.size() != b.size()) throw std::invalid_argument("dot: length mismatch");
  Rational s;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!a[i].is_zero() && !b[i].is_zero()) s += a[i] * b[i];
  return s;
}

}  // namespace bigiso
