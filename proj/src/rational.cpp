#include "besov/rational.hpp"

#include <cmath>

namespace besov {

Rational make_rational(const BigInt& num, const BigInt& den) {
  if (den == 0) throw InvalidInput("rational with zero denominator");
  Rational q(num, den);
  q.canonicalize();
  return q;
}

Rational make_rational(std::int64_t num, std::int64_t den) {
  return make_rational(BigInt(std::to_string(num)), BigInt(std::to_string(den)));
}

Rational exact_from_double(double x) {
  if (!std::isfinite(x)) throw InvalidInput("cannot convert non-finite double to rational");
  // mpq_set_d is exact for finite doubles.
  Rational q(x);
  q.canonicalize();
  return q;
}

BigInt factorial(unsigned n) {
  BigInt r;
  mpz_fac_ui(r.get_mpz_t(), n);
  return r;
}

GaussianRational& GaussianRational::operator+=(const GaussianRational& o) {
  re += o.re;
  im += o.im;
  return *this;
}

GaussianRational& GaussianRational::operator-=(const GaussianRational& o) {
  re -= o.re;
  im -= o.im;
  return *this;
}

GaussianRational& GaussianRational::operator*=(const GaussianRational& o) {
  if (sgn(im) == 0 && sgn(o.im) == 0) {
    re *= o.re;
    return *this;
  }
  Rational r = re * o.re - im * o.im;
  Rational i = re * o.im + im * o.re;
  re = std::move(r);
  im = std::move(i);
  return *this;
}

GaussianRational& GaussianRational::operator/=(const GaussianRational& o) {
  if (o.is_zero()) throw std::domain_error("division by zero Gaussian rational");
  if (sgn(o.im) == 0) {
    re /= o.re;
    im /= o.re;
    return *this;
  }
  Rational den = o.re * o.re + o.im * o.im;
  Rational r = (re * o.re + im * o.im) / den;
  Rational i = (im * o.re - re * o.im) / den;
  re = std::move(r);
  im = std::move(i);
  return *this;
}

std::string GaussianRational::to_string() const {
  if (sgn(im) == 0) return re.get_str();
  return "(" + re.get_str() + (sgn(im) < 0 ? "-" : "+") + Rational(abs(im)).get_str() + "i)";
}

GaussianRational exact_from_complex(const Complex& z) {
  return {exact_from_double(z.real()), exact_from_double(z.imag())};
}

}  // namespace besov
