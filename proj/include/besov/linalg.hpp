#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <vector>

#include "besov/rational.hpp"

namespace besov {

/// Raised when a Hermitian factorization meets a non-positive pivot.
class FactorizationError : public std::runtime_error {
 public:
  FactorizationError(const std::string& what, double smallest_pivot)
      : std::runtime_error(what + " (smallest pivot " + std::to_string(smallest_pivot) + ")"),
        smallest_pivot_(smallest_pivot) {}
  double smallest_pivot() const { return smallest_pivot_; }

 private:
  double smallest_pivot_;
};

template <class T>
class DenseMatrix {
 public:
  DenseMatrix() = default;
  explicit DenseMatrix(std::size_t n) : n_(n), a_(n * n, T(0)) {}

  std::size_t size() const { return n_; }
  T& operator()(std::size_t i, std::size_t j) { return a_[i * n_ + j]; }
  const T& operator()(std::size_t i, std::size_t j) const { return a_[i * n_ + j]; }
  T* row(std::size_t i) { return a_.data() + i * n_; }
  const T* row(std::size_t i) const { return a_.data() + i * n_; }

 private:
  std::size_t n_ = 0;
  std::vector<T> a_;
};

namespace scalar {

template <class T>
struct is_complex : std::false_type {};
template <class R>
struct is_complex<std::complex<R>> : std::true_type {};

template <class T>
T conj(const T& x) {
  if constexpr (is_complex<T>::value) return std::conj(x);
  else if constexpr (std::is_same_v<T, GaussianRational>) return besov::conj(x);
  else return x;
}

/// Real part as the pivot type: Rational for GaussianRational, else a float.
template <class T>
auto real(const T& x) {
  if constexpr (is_complex<T>::value) return x.real();
  else if constexpr (std::is_same_v<T, GaussianRational>) return x.re;
  else return x;
}

template <class T>
double to_double(const T& x) {
  if constexpr (std::is_same_v<T, Rational>) return x.get_d();
  else return static_cast<double>(x);
}

/// Rounds an exact value to T; long double targets keep the bits beyond
/// double precision via a two-term split.
template <class T>
T from_exact(const GaussianRational& z) {
  auto split = [](const Rational& q) -> long double {
    double hi = q.get_d();
    Rational rest = q - exact_from_double(hi);
    return static_cast<long double>(hi) + static_cast<long double>(rest.get_d());
  };
  if constexpr (std::is_same_v<T, GaussianRational>) return z;
  else if constexpr (std::is_same_v<T, double>) return z.re.get_d();
  else if constexpr (std::is_same_v<T, long double>) return split(z.re);
  else if constexpr (std::is_same_v<T, std::complex<double>>) return z.to_complex();
  else return T(split(z.re), split(z.im));
}

template <class T>
T from_complex(const Complex& z) {
  if constexpr (is_complex<T>::value) return T(z.real(), z.imag());
  else if constexpr (std::is_same_v<T, GaussianRational>) return exact_from_complex(z);
  else return static_cast<T>(z.real());
}

}  // namespace scalar

/// In-place LDL^H factorization of a Hermitian matrix (lower triangle used).
/// After success the strict lower triangle holds L and pivots() holds D.
template <class T>
class HermitianLDL {
 public:
  using Pivot = decltype(scalar::real(std::declval<T>()));

  /// Factors a; never throws. ok() is false if a pivot is not positive.
  explicit HermitianLDL(DenseMatrix<T> a) : a_(std::move(a)) {
    const std::size_t n = a_.size();
    d_.reserve(n);
    std::vector<T> w(n);
    for (std::size_t j = 0; j < n; ++j) {
      T* lj = a_.row(j);
      for (std::size_t k = 0; k < j; ++k) w[k] = scalar::conj(lj[k]) * T(d_[k]);
      T djj = lj[j];
      for (std::size_t k = 0; k < j; ++k) djj -= lj[k] * w[k];
      Pivot p = scalar::real(djj);
      d_.push_back(p);
      if (!(p > 0)) {
        ok_ = false;
        return;
      }
      for (std::size_t i = j + 1; i < n; ++i) {
        T* li = a_.row(i);
        T s = li[j];
        for (std::size_t k = 0; k < j; ++k) s -= li[k] * w[k];
        li[j] = s / T(p);
      }
    }
  }

  bool ok() const { return ok_; }
  const std::vector<Pivot>& pivots() const { return d_; }
  double min_pivot() const {
    double m = std::numeric_limits<double>::infinity();
    for (const auto& p : d_) m = std::min(m, scalar::to_double(p));
    return m;
  }
  double max_pivot() const {
    double m = 0.0;
    for (const auto& p : d_) m = std::max(m, scalar::to_double(p));
    return m;
  }

  std::vector<T> solve(std::vector<T> b) const {
    if (!ok_) throw FactorizationError("solve on a failed factorization", min_pivot());
    const std::size_t n = a_.size();
    for (std::size_t i = 0; i < n; ++i) {
      const T* li = a_.row(i);
      for (std::size_t k = 0; k < i; ++k) b[i] -= li[k] * b[k];
    }
    for (std::size_t i = 0; i < n; ++i) b[i] = b[i] / T(d_[i]);
    for (std::size_t i = n; i-- > 0;) {
      for (std::size_t k = i + 1; k < n; ++k) b[i] -= scalar::conj(a_(k, i)) * b[k];
    }
    return b;
  }

 private:
  DenseMatrix<T> a_;
  std::vector<Pivot> d_;
  bool ok_ = true;
};

}  // namespace besov
