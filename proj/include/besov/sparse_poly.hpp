#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <map>
#include <span>
#include <vector>

#include "besov/multi_index.hpp"
#include "besov/rational.hpp"

namespace besov {

/// Finitely supported map MultiIndex -> coefficient in a fixed number of
/// variables. Zero coefficients are never stored.
///
/// C is either GaussianRational (exact path) or Complex (float path).
template <class C>
class SparsePoly {
 public:
  using Coeff = C;
  using Terms = std::map<MultiIndex, C>;

  SparsePoly() : dim_(1) {}
  explicit SparsePoly(std::size_t dimension) : dim_(dimension) {
    if (dimension == 0) throw InvalidInput("polynomial dimension must be positive");
  }

  static SparsePoly constant(std::size_t dimension, const C& c) {
    SparsePoly p(dimension);
    p.add_term(MultiIndex(dimension), c);
    return p;
  }
  static SparsePoly monomial(const MultiIndex& beta, const C& c = C(1)) {
    SparsePoly p(beta.size());
    p.add_term(beta, c);
    return p;
  }
  /// z_i (0-based index).
  static SparsePoly variable(std::size_t dimension, std::size_t i) {
    return monomial(MultiIndex::unit(dimension, i));
  }

  std::size_t dimension() const { return dim_; }
  const Terms& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool is_zero() const { return terms_.empty(); }
  /// Total degree; -1 for the zero polynomial.
  int degree() const { return terms_.empty() ? -1 : terms_.rbegin()->first.degree(); }
  int min_degree() const { return terms_.empty() ? -1 : terms_.begin()->first.degree(); }
  bool is_homogeneous() const { return terms_.empty() || degree() == min_degree(); }

  C coefficient(const MultiIndex& beta) const {
    auto it = terms_.find(beta);
    return it == terms_.end() ? C(0) : it->second;
  }
  C constant_term() const { return coefficient(MultiIndex(dim_)); }

  /// Accumulates c into the coefficient of z^beta.
  void add_term(const MultiIndex& beta, const C& c) {
    if (beta.size() != dim_) throw InvalidInput("multi-index length does not match polynomial dimension");
    if (besov::is_zero(c)) return;
    auto [it, inserted] = terms_.try_emplace(beta, c);
    if (!inserted) {
      it->second += c;
      if (besov::is_zero(it->second)) terms_.erase(it);
    }
  }

  /// Parts f_0, f_1, ..., f_deg with f_n homogeneous of degree n.
  std::vector<SparsePoly> homogeneous_parts() const {
    std::vector<SparsePoly> parts(static_cast<std::size_t>(std::max(degree() + 1, 0)), SparsePoly(dim_));
    for (const auto& [beta, c] : terms_) parts[beta.degree()].terms_.emplace_hint(parts[beta.degree()].terms_.end(), beta, c);
    return parts;
  }
  SparsePoly homogeneous_part(int n) const {
    SparsePoly out(dim_);
    for (const auto& [beta, c] : terms_)
      if (beta.degree() == n) out.terms_.emplace_hint(out.terms_.end(), beta, c);
    return out;
  }
  SparsePoly truncated(int max_degree) const {
    SparsePoly out(dim_);
    for (const auto& [beta, c] : terms_)
      if (beta.degree() <= max_degree) out.terms_.emplace_hint(out.terms_.end(), beta, c);
    return out;
  }

  SparsePoly& operator+=(const SparsePoly& o) {
    check_dim(o);
    for (const auto& [beta, c] : o.terms_) add_term(beta, c);
    return *this;
  }
  SparsePoly& operator-=(const SparsePoly& o) {
    check_dim(o);
    for (const auto& [beta, c] : o.terms_) add_term(beta, -c);
    return *this;
  }
  SparsePoly& operator*=(const C& s) {
    if (besov::is_zero(s)) {
      terms_.clear();
      return *this;
    }
    for (auto& [beta, c] : terms_) c *= s;
    return *this;
  }
  SparsePoly operator-() const {
    SparsePoly r = *this;
    for (auto& [beta, c] : r.terms_) c = -c;
    return r;
  }

  friend SparsePoly operator+(SparsePoly a, const SparsePoly& b) { return a += b; }
  friend SparsePoly operator-(SparsePoly a, const SparsePoly& b) { return a -= b; }
  friend SparsePoly operator*(SparsePoly a, const C& s) { return a *= s; }
  friend SparsePoly operator*(const C& s, SparsePoly a) { return a *= s; }
  friend SparsePoly operator*(const SparsePoly& a, const SparsePoly& b) { return multiply(a, b, -1); }
  friend bool operator==(const SparsePoly& a, const SparsePoly& b) {
    return a.dim_ == b.dim_ && a.terms_ == b.terms_;
  }

  /// Product truncated to total degree <= max_degree (no truncation if < 0).
  static SparsePoly multiply(const SparsePoly& a, const SparsePoly& b, int max_degree) {
    a.check_dim(b);
    SparsePoly r(a.dim_);
    for (const auto& [ba, ca] : a.terms_) {
      if (max_degree >= 0 && ba.degree() > max_degree) break;
      for (const auto& [bb, cb] : b.terms_) {
        if (max_degree >= 0 && ba.degree() + bb.degree() > max_degree) break;
        r.add_term(ba + bb, ca * cb);
      }
    }
    return r;
  }

  template <class F>
  auto map_coefficients(F&& fn) const {
    using D = decltype(fn(std::declval<const MultiIndex&>(), std::declval<const C&>()));
    SparsePoly<D> out(dim_);
    for (const auto& [beta, c] : terms_) out.add_term(beta, fn(beta, c));
    return out;
  }

 private:
  void check_dim(const SparsePoly& o) const {
    if (o.dim_ != dim_) throw InvalidInput("polynomial dimension mismatch");
  }

  std::size_t dim_;
  Terms terms_;
};

using ExactPoly = SparsePoly<GaussianRational>;
using FloatPoly = SparsePoly<Complex>;

inline FloatPoly to_float(const ExactPoly& f) {
  return f.map_coefficients([](const MultiIndex&, const GaussianRational& c) { return c.to_complex(); });
}
inline const FloatPoly& to_float(const FloatPoly& f) { return f; }
/// Exact binary value of every double coefficient.
inline ExactPoly to_exact(const FloatPoly& f) {
  return f.map_coefficients([](const MultiIndex&, const Complex& c) { return exact_from_complex(c); });
}

/// f^n by repeated squaring; f^0 = 1.
template <class C>
SparsePoly<C> pow(const SparsePoly<C>& f, int n) {
  if (n < 0) throw InvalidInput("negative polynomial power");
  SparsePoly<C> result = SparsePoly<C>::constant(f.dimension(), C(1));
  SparsePoly<C> base = f;
  while (n > 0) {
    if (n & 1) result = result * base;
    n >>= 1;
    if (n) base = base * base;
  }
  return result;
}

/// R^N f: every term scaled by degree^N.
template <class C>
SparsePoly<C> radial_derivative(const SparsePoly<C>& f, int order) {
  if (order < 0) throw InvalidInput("radial derivative order must be non-negative");
  return f.map_coefficients([order](const MultiIndex& beta, const C& c) {
    C s(1);
    for (int i = 0; i < order; ++i) s *= C(beta.degree());
    return c * s;
  });
}

namespace detail {
inline GaussianRational scalar_power(const Rational& r, int n) {
  Rational out(1);
  mpz_pow_ui(out.get_num_mpz_t(), r.get_num_mpz_t(), static_cast<unsigned long>(n));
  mpz_pow_ui(out.get_den_mpz_t(), r.get_den_mpz_t(), static_cast<unsigned long>(n));
  out.canonicalize();
  return GaussianRational(out);
}
inline Complex scalar_power(double r, int n) { return Complex(std::pow(r, n), 0.0); }
}  // namespace detail

/// f_r(z) = f(r z): coefficient of z^beta scaled by r^|beta|.
inline ExactPoly dilate(const ExactPoly& f, const Rational& r) {
  return f.map_coefficients(
      [&r](const MultiIndex& beta, const GaussianRational& c) { return c * detail::scalar_power(r, beta.degree()); });
}
inline FloatPoly dilate(const FloatPoly& f, double r) {
  return f.map_coefficients(
      [r](const MultiIndex& beta, const Complex& c) { return c * detail::scalar_power(r, beta.degree()); });
}

template <class C>
Complex evaluate(const SparsePoly<C>& f, std::span<const Complex> z) {
  if (z.size() != f.dimension()) throw InvalidInput("evaluation point has wrong dimension");
  Complex sum = 0.0;
  for (const auto& [beta, c] : f.terms()) {
    Complex t = to_complex(c);
    for (std::size_t i = 0; i < z.size(); ++i)
      for (int k = 0; k < beta[i]; ++k) t *= z[i];
    sum += t;
  }
  return sum;
}

/// Truncated multiplicative inverse through total degree max_degree, via the
/// homogeneous recursion q_n = -q_0 * sum_{j=1..n} p_j q_{n-j}.
template <class C>
SparsePoly<C> series_invert(const SparsePoly<C>& p, int max_degree) {
  C p0 = p.constant_term();
  if (besov::is_zero(p0)) throw InvalidInput("series inversion needs a non-zero constant term");
  if (max_degree < 0) throw InvalidInput("truncation degree must be non-negative");
  const std::size_t d = p.dimension();
  auto pparts = p.truncated(max_degree).homogeneous_parts();
  C q0 = C(1) / p0;
  std::vector<SparsePoly<C>> q;
  q.reserve(static_cast<std::size_t>(max_degree) + 1);
  q.push_back(SparsePoly<C>::constant(d, q0));
  for (int n = 1; n <= max_degree; ++n) {
    SparsePoly<C> acc(d);
    for (int j = 1; j <= n && j < static_cast<int>(pparts.size()); ++j) {
      if (pparts[j].is_zero() || q[n - j].is_zero()) continue;
      acc += pparts[j] * q[n - j];
    }
    acc *= -q0;
    q.push_back(std::move(acc));
  }
  SparsePoly<C> out(d);
  for (auto& part : q) out += part;
  return out;
}

}  // namespace besov
