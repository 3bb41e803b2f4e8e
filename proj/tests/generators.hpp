#pragma once

#include <cmath>
#include <random>
#include <vector>

#include "besov/sparse_poly.hpp"

namespace gen {

inline std::mt19937_64& rng() {
  static std::mt19937_64 r(0x5eedULL);
  return r;
}

inline int uniform_int(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng()); }
inline double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng()); }

inline besov::Rational small_rational() {
  return besov::make_rational(uniform_int(-9, 9), uniform_int(1, 6));
}

inline besov::MultiIndex multi_index(int d, int max_degree) {
  std::vector<int> e(d, 0);
  int budget = uniform_int(0, max_degree);
  for (int i = 0; i < d && budget > 0; ++i) {
    int take = i == d - 1 ? budget : uniform_int(0, budget);
    e[i] = take;
    budget -= take;
  }
  return besov::MultiIndex(std::move(e));
}

inline besov::ExactPoly exact_poly(int d, int max_degree, int terms, bool complex = true) {
  besov::ExactPoly f(d);
  for (int t = 0; t < terms; ++t) {
    besov::GaussianRational c(small_rational(), complex ? small_rational() : besov::Rational(0));
    f.add_term(multi_index(d, max_degree), c);
  }
  return f;
}

/// Uniform point on the unit sphere of C^d.
inline std::vector<besov::Complex> sphere_point(int d) {
  std::normal_distribution<double> n(0.0, 1.0);
  std::vector<besov::Complex> z(d);
  double s = 0.0;
  for (auto& zi : z) {
    zi = {n(rng()), n(rng())};
    s += std::norm(zi);
  }
  for (auto& zi : z) zi /= std::sqrt(s);
  return z;
}

/// Point in the open unit ball.
inline std::vector<besov::Complex> ball_point(int d) {
  auto z = sphere_point(d);
  double r = std::pow(uniform(0.0, 1.0), 1.0 / (2.0 * d));
  for (auto& zi : z) zi *= r;
  return z;
}

}  // namespace gen
