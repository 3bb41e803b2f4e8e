#pragma once

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>

#include <gmpxx.h>

namespace besov {

using BigInt = mpz_class;
using Rational = mpq_class;
using Complex = std::complex<double>;

/// Thrown for malformed input or violated preconditions (CLI exit code 2).
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Thrown when an exact value is requested from a float-only object.
class NotExact : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

Rational make_rational(const BigInt& num, const BigInt& den);
Rational make_rational(std::int64_t num, std::int64_t den = 1);

/// Exact conversion of a finite double to its binary rational value.
Rational exact_from_double(double x);

BigInt factorial(unsigned n);

/// Complex number with exact rational real and imaginary parts.
struct GaussianRational {
  Rational re{0};
  Rational im{0};

  GaussianRational() = default;
  GaussianRational(Rational r) : re(std::move(r)) {}  // NOLINT(implicit)
  GaussianRational(Rational r, Rational i) : re(std::move(r)), im(std::move(i)) {}
  GaussianRational(long v) : re(v) {}  // NOLINT(implicit)
  GaussianRational(int v) : re(v) {}   // NOLINT(implicit)

  bool is_zero() const { return sgn(re) == 0 && sgn(im) == 0; }
  bool is_real() const { return sgn(im) == 0; }

  GaussianRational& operator+=(const GaussianRational& o);
  GaussianRational& operator-=(const GaussianRational& o);
  GaussianRational& operator*=(const GaussianRational& o);
  GaussianRational& operator/=(const GaussianRational& o);

  friend GaussianRational operator+(GaussianRational a, const GaussianRational& b) { return a += b; }
  friend GaussianRational operator-(GaussianRational a, const GaussianRational& b) { return a -= b; }
  friend GaussianRational operator*(GaussianRational a, const GaussianRational& b) { return a *= b; }
  friend GaussianRational operator/(GaussianRational a, const GaussianRational& b) { return a /= b; }
  GaussianRational operator-() const { return {Rational(-re), Rational(-im)}; }

  friend bool operator==(const GaussianRational& a, const GaussianRational& b) {
    return a.re == b.re && a.im == b.im;
  }

  Complex to_complex() const { return {re.get_d(), im.get_d()}; }
  std::string to_string() const;
};

inline GaussianRational conj(const GaussianRational& z) { return {z.re, Rational(-z.im)}; }
/// |z|^2, exact.
inline Rational abs_sq(const GaussianRational& z) { return Rational(z.re * z.re + z.im * z.im); }
inline double abs_sq(const Complex& z) { return std::norm(z); }
inline bool is_zero(const GaussianRational& z) { return z.is_zero(); }
inline bool is_zero(const Complex& z) { return z.real() == 0.0 && z.imag() == 0.0; }

inline Complex to_complex(const GaussianRational& z) { return z.to_complex(); }
inline Complex to_complex(const Complex& z) { return z; }

GaussianRational exact_from_complex(const Complex& z);

}  // namespace besov
