#include "bigiso/rational_function.hpp"

#include <stdexcept>

namespace bigiso {

RationalFunction::RationalFunction(Polynomial num, Polynomial den)
    : num_(std::move(num)), den_(std::move(den)) {
  if (den_.is_zero()) throw std::domain_error("rational function with zero denominator");
  tidy();
}

void RationalFunction::tidy() {
  if (num_.is_zero()) {
    den_ = Polynomial(1);
    return;
  }
  const Rational lc = den_.leading_term().second;
  if (!lc.is_one()) {
    const Rational inv = Rational(1) / lc;
    num_ *= inv;
    den_ *= inv;
  }
  if (den_.is_constant()) return;
  if (auto q = num_.divide_exact(den_)) {
    num_ = std::move(*q);
    den_ = Polynomial(1);
  }
}

Polynomial RationalFunction::as_polynomial() const {
  if (!is_polynomial()) throw std::domain_error("rational function is not a polynomial");
  return num_ * (Rational(1) / den_.constant_term());
}

RationalFunction& RationalFunction::operator+=(const RationalFunction& o) {
  if (den_ == o.den_) {
    num_ += o.num_;
  } else {
    num_ = num_ * o.den_ + o.num_ * den_;
    den_ *= o.den_;
  }
  tidy();
  return *this;
}

RationalFunction& RationalFunction::operator-=(const RationalFunction& o) { return *this += -o; }

RationalFunction& RationalFunction::operator*=(const RationalFunction& o) {
  num_ *= o.num_;
  den_ *= o.den_;
  tidy();
  return *this;
}

RationalFunction& RationalFunction::operator/=(const RationalFunction& o) {
  if (o.is_zero()) throw std::domain_error("division by zero rational function");
  num_ *= o.den_;
  den_ *= o.num_;
  tidy();
  return *this;
}

bool operator==(const RationalFunction& a, const RationalFunction& b) {
  return a.num_ * b.den_ == b.num_ * a.den_;
}

std::optional<Rational> RationalFunction::evaluate(std::span<const Rational> point) const {
  const Rational d = den_.evaluate(point);
  if (d.is_zero()) return std::nullopt;
  return num_.evaluate(point) / d;
}

RationalFunction RationalFunction::substitute(std::size_t var, const Rational& value) const {
  Polynomial d = den_.is_constant() ? den_ : den_.substitute(var, value);
  if (d.is_zero()) throw std::domain_error("substitution makes denominator vanish");
  Polynomial n = num_.is_constant() ? num_ : num_.substitute(var, value);
  return {std::move(n), std::move(d)};
}

RationalFunction RationalFunction::derivative(std::size_t var) const {
  if (den_.is_constant()) return {num_.derivative(var), den_};
  return {num_.derivative(var) * den_ - num_ * den_.derivative(var), den_ * den_};
}

std::string RationalFunction::str(std::span<const std::string> names) const {
  if (is_polynomial()) return as_polynomial().str(names);
  return "(" + num_.str(names) + ")/(" + den_.str(names) + ")";
}

}  // namespace bigiso
