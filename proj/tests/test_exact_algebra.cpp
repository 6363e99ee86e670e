#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "bigiso/linalg.hpp"
#include "bigiso/subspace.hpp"

using namespace bigiso;

namespace {

Matrix<Rational> random_matrix(std::mt19937_64& rng, std::size_t r, std::size_t c, int range) {
  std::uniform_int_distribution<int> d(-range, range);
  std::bernoulli_distribution zero(0.35);
  Matrix<Rational> m(r, c);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) m(i, j) = zero(rng) ? Rational(0) : Rational(d(rng), 1 + (d(rng) + range) % 3);
  return m;
}

// Fraction-free Gaussian elimination on integer-scaled rows; independent of rref.
std::size_t integer_rank(Matrix<Rational> m) {
  for (std::size_t i = 0; i < m.rows(); ++i) {
    mpz_class l = 1;
    for (std::size_t j = 0; j < m.cols(); ++j) l = lcm(l, m(i, j).denominator());
    for (std::size_t j = 0; j < m.cols(); ++j) m(i, j) *= Rational(mpq_class(l));
  }
  std::size_t r = 0;
  for (std::size_t c = 0; c < m.cols() && r < m.rows(); ++c) {
    std::size_t p = r;
    while (p < m.rows() && m(p, c).is_zero()) ++p;
    if (p == m.rows()) continue;
    m.swap_rows(p, r);
    for (std::size_t i = r + 1; i < m.rows(); ++i) {
      const Rational a = m(r, c), b = m(i, c);
      for (std::size_t j = 0; j < m.cols(); ++j) m(i, j) = a * m(i, j) - b * m(r, j);
    }
    ++r;
  }
  return r;
}

Polynomial var(std::size_t n, std::size_t i) { return Polynomial::variable(n, i); }

}  // namespace

TEST_CASE("rational basics") {
  CHECK(Rational(2, 4) == Rational(1, 2));
  CHECK(Rational(3, -6).str() == "-1/2");
  CHECK(Rational::parse("-10/4") == Rational(-5, 2));
  CHECK_THROWS(Rational(1) / Rational(0));
  CHECK_THROWS(Rational::parse("1/x"));
  CHECK(Rational(1, 3) < Rational(1, 2));
}

TEST_CASE("polynomial canonical form") {
  const std::vector<std::string> names{"x", "y", "z"};
  const auto x = var(3, 0), y = var(3, 1), z = var(3, 2);
  auto p = Rational(3, 2) * x * x * y - z + Polynomial(3, 1);
  CHECK(p.str(names) == "3/2*x^2*y - z + 1");
  CHECK((x * x - x * x).is_zero());
  CHECK((x * x - x * x).str(names) == "0");
  CHECK(p.derivative(0) == Rational(3) * x * y);
  const Rational pt[] = {Rational(1), Rational(2), Rational(3)};
  CHECK(p.evaluate(pt) == Rational(1));
  CHECK(((x + y) * (x - y)).divide_exact(x - y).value() == x + y);
  CHECK_FALSE((x * x + y).divide_exact(x).has_value());
  const Polynomial imgs[] = {y, x, Polynomial(3, 2)};
  CHECK(p.compose(imgs) == Rational(3, 2) * y * y * x - Polynomial(3, 2) + Polynomial(3, 1));
}

TEST_CASE("constants promote into any ring") {
  const auto x = var(2, 0);
  CHECK(x + 1 == 1 + x);
  CHECK((Polynomial(std::size_t{2}) * x).is_zero());
  CHECK(Polynomial(2) * x == x + x);
  CHECK_THROWS(x + var(3, 0));
}

TEST_CASE("rational functions") {
  const auto x = var(2, 0), y = var(2, 1);
  const Polynomial p = x * x + y, q = x - y + 1;
  RationalFunction a(p, q), b(q, p);
  CHECK(a * b == RationalFunction(1));
  CHECK((a * b).is_polynomial());
  CHECK(a - a == RationalFunction(0));
  RationalFunction c(x * x - y * y, x - y);
  CHECK(c.is_polynomial());
  CHECK(c.as_polynomial() == x + y);
  const Rational pt[] = {Rational(1), Rational(2)};
  CHECK_FALSE(RationalFunction(p, q).evaluate(pt).has_value());
  CHECK(RationalFunction(p, x).derivative(0) == RationalFunction(x * x - y, x * x));
}

TEST_CASE("rref examples") {
  auto id = Matrix<Rational>::identity(2);
  auto r = rref(id);
  CHECK(r.reduced == id);
  CHECK(r.rank == 2);
  CHECK(r.pivots == std::vector<std::size_t>{0, 1});
  auto m = Matrix<Rational>::from_rows({{1, 2}, {2, 4}});
  auto r2 = rref(m);
  CHECK(r2.rank == 1);
  CHECK(r2.reduced == Matrix<Rational>::from_rows({{1, 2}, {0, 0}}));
}

TEST_CASE("rref rank matches fraction-free oracle") {
  std::mt19937_64 rng(7);
  for (int t = 0; t < 100; ++t) {
    auto m = random_matrix(rng, 5, 8, 4);
    CHECK(rref(m).rank == integer_rank(m));
    CHECK(bareiss(m).rank == integer_rank(m));
  }
}

TEST_CASE("kernel and image") {
  CHECK(Subspace::kernel(Matrix<Rational>::identity(3)).dim() == 0);
  auto k = Subspace::kernel(Matrix<Rational>::from_rows({{1, 0}}));
  CHECK(k == Subspace::span(2, {{0, 1}}));
  auto im = Subspace::image(Matrix<Rational>::from_rows({{1, 2}, {2, 4}}));
  CHECK(im == Subspace::span(2, {{1, 2}}));
  std::mt19937_64 rng(11);
  for (int t = 0; t < 50; ++t) {
    auto m = random_matrix(rng, 4, 7, 3);
    auto ker = Subspace::kernel(m);
    CHECK(ker.dim() + rref(m).rank == 7);
    for (const auto& v : ker.vectors())
      for (std::size_t i = 0; i < 4; ++i) CHECK(dot(m.row(i), v).is_zero());
  }
}

TEST_CASE("subspace lattice") {
  auto e1 = Subspace::span(2, {{1, 0}}), e2 = Subspace::span(2, {{0, 1}});
  CHECK(subspace_sum(e1, e2) == Subspace::full(2));
  auto a = Subspace::span(3, {{1, 0, 0}, {0, 1, 0}}), b = Subspace::span(3, {{0, 1, 0}, {0, 0, 1}});
  CHECK(subspace_intersection(a, b) == Subspace::span(3, {{0, 1, 0}}));
  auto c = complement_in(Subspace::span(3, {{1, 0, 0}}), Subspace::full(3));
  CHECK(c.dim() == 2);
  CHECK(subspace_sum(c, Subspace::span(3, {{1, 0, 0}})) == Subspace::full(3));
  CHECK_THROWS(complement_in(Subspace::full(3), Subspace::span(3, {{1, 0, 0}})));
  CHECK_THROWS(subspace_sum(e1, Subspace::full(3)));

  std::mt19937_64 rng(3);
  for (int t = 0; t < 200; ++t) {
    std::uniform_int_distribution<std::size_t> dd(1, 8);
    const auto d = dd(rng);
    std::uniform_int_distribution<std::size_t> kd(0, d);
    auto x = Subspace::from_rows(random_matrix(rng, kd(rng), d, 2));
    auto y = Subspace::from_rows(random_matrix(rng, kd(rng), d, 2));
    CHECK(subspace_sum(x, y).dim() + subspace_intersection(x, y).dim() == x.dim() + y.dim());
    auto inner = subspace_intersection(x, y);
    auto comp = complement_in(inner, x);
    CHECK(subspace_sum(inner, comp) == x);
    CHECK(subspace_intersection(inner, comp).dim() == 0);
  }
}

TEST_CASE("RREF canonicality") {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 50; ++t) {
    auto m = random_matrix(rng, 3, 6, 3);
    auto change = random_matrix(rng, 3, 3, 3);
    if (rref(change).rank < 3) continue;
    CHECK(Subspace::from_rows(m) == Subspace::from_rows(change * m));
  }
}

TEST_CASE("polynomial determinant agrees with evaluation") {
  std::mt19937_64 rng(9);
  std::uniform_int_distribution<int> d(-2, 2);
  for (int t = 0; t < 20; ++t) {
    Matrix<Polynomial> m(3, 3);
    for (std::size_t i = 0; i < 3; ++i)
      for (std::size_t j = 0; j < 3; ++j)
        m(i, j) = Polynomial(2, d(rng)) + Rational(d(rng)) * var(2, 0) + Rational(d(rng)) * var(2, 1);
    const auto det = determinant(m);
    const Rational pt[] = {Rational(d(rng)), Rational(d(rng), 3)};
    auto mv = m.map([&](const Polynomial& p) { return p.evaluate(pt); });
    CHECK(det.evaluate(pt) == determinant(mv));
  }
}

TEST_CASE("inverse") {
  auto m = Matrix<Rational>::from_rows({{2, 1}, {1, 1}});
  auto inv = inverse(m);
  REQUIRE(inv.has_value());
  CHECK(*inv * m == Matrix<Rational>::identity(2));
  CHECK_FALSE(inverse(Matrix<Rational>::from_rows({{1, 2}, {2, 4}})).has_value());
}
