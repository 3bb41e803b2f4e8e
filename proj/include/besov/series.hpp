#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "besov/sparse_poly.hpp"

namespace besov {

/// Truncated one-variable power series a_0 + a_1 t + ... + a_M t^M.
template <class C>
class Series1D {
 public:
  Series1D() : a_(1, C(0)) {}
  explicit Series1D(std::vector<C> coeffs) : a_(std::move(coeffs)) {
    if (a_.empty()) throw InvalidInput("series needs at least one coefficient");
  }
  static Series1D zero(int truncation) { return Series1D(std::vector<C>(truncation + 1, C(0))); }

  int truncation() const { return static_cast<int>(a_.size()) - 1; }
  const std::vector<C>& coefficients() const { return a_; }
  const C& operator[](std::size_t n) const { return a_[n]; }
  C& operator[](std::size_t n) { return a_[n]; }

  friend bool operator==(const Series1D& x, const Series1D& y) { return x.a_ == y.a_; }

 private:
  std::vector<C> a_;
};

template <class C>
Series1D<C> multiply(const Series1D<C>& x, const Series1D<C>& y, int truncation) {
  auto out = Series1D<C>::zero(truncation);
  for (int i = 0; i <= std::min(truncation, x.truncation()); ++i) {
    if (is_zero(x[i])) continue;
    for (int j = 0; j <= std::min(truncation - i, y.truncation()); ++j) out[i + j] += x[i] * y[j];
  }
  return out;
}

template <class C>
Series1D<C> series_invert(const Series1D<C>& s, int truncation) {
  if (is_zero(s[0])) throw InvalidInput("series inversion needs a non-zero constant term");
  auto q = Series1D<C>::zero(truncation);
  C q0 = C(1) / s[0];
  q[0] = q0;
  for (int n = 1; n <= truncation; ++n) {
    C acc(0);
    for (int j = 1; j <= std::min(n, s.truncation()); ++j) acc += s[j] * q[n - j];
    q[n] = -(acc * q0);
  }
  return q;
}

inline Series1D<Complex> dilate(const Series1D<Complex>& s, double r) {
  auto out = s;
  double rn = 1.0;
  for (int n = 0; n <= s.truncation(); ++n, rn *= r) out[n] *= rn;
  return out;
}

/// Horner evaluation.
template <class C>
Complex evaluate(const Series1D<C>& s, Complex t) {
  Complex acc = 0.0;
  for (int n = s.truncation(); n >= 0; --n) acc = acc * t + to_complex(s[n]);
  return acc;
}

/// One-variable SparsePoly (dimension 1) to its coefficient series.
template <class C>
Series1D<C> to_series(const SparsePoly<C>& f, int truncation) {
  if (f.dimension() != 1) throw InvalidInput("expected a one-variable polynomial");
  auto out = Series1D<C>::zero(truncation);
  for (const auto& [beta, c] : f.terms())
    if (beta.degree() <= truncation) out[beta.degree()] = c;
  return out;
}

template <class C>
SparsePoly<C> to_poly(const Series1D<C>& s) {
  SparsePoly<C> f(1);
  for (int n = 0; n <= s.truncation(); ++n) f.add_term(MultiIndex{n}, s[n]);
  return f;
}

/// Slice function lambda -> f(lambda z) for z on the unit sphere; the n-th
/// coefficient is the homogeneous part f_n evaluated at z.
template <class C>
Series1D<Complex> slice(const SparsePoly<C>& f, std::span<const Complex> z, int truncation) {
  if (z.size() != f.dimension()) throw InvalidInput("slice direction has wrong dimension");
  double nrm = 0.0;
  for (const auto& zi : z) nrm += std::norm(zi);
  if (std::abs(std::sqrt(nrm) - 1.0) > 1e-12) throw InvalidInput("slice direction must lie on the unit sphere");
  auto out = Series1D<Complex>::zero(truncation);
  for (const auto& [beta, c] : f.terms()) {
    if (beta.degree() > truncation) continue;
    Complex t = to_complex(c);
    for (std::size_t i = 0; i < z.size(); ++i)
      for (int k = 0; k < beta[i]; ++k) t *= z[i];
    out[beta.degree()] += t;
  }
  return out;
}

struct Root {
  Complex value;
  int multiplicity = 1;
};

struct RootReport {
  std::vector<Root> roots;  // clustered, with multiplicity
  double max_residual = 0.0;  // max componentwise backward error over the reported roots
  bool validated = false;     // every residual below 1e-9
};

/// All complex roots of the polynomial with the given coefficients, from the
/// eigenvalues of the companion matrix. Eigenvalues closer than 1e-7 are
/// merged; a group of k roots within a relative 1e-3 of each other is merged
/// further when the first k - 1 derivatives vanish at its mean. Simple roots
/// are then polished by Newton steps.
RootReport roots_1d(const Series1D<Complex>& q);

/// True when no root lies in the open disc |t| < 1 - tolerance.
bool is_outer(const RootReport& roots, double tolerance = 1e-9);
double min_root_modulus(const RootReport& roots);

}  // namespace besov
