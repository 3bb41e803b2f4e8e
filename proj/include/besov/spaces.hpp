#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "besov/io.hpp"
#include "besov/sparse_poly.hpp"

namespace besov {

// ---------------------------------------------------------------------------
// Radial measures d(mu)(r) on [0, 1]. The full measure on the closed ball is
// d(omega)(z) = d(mu)(r) d(sigma)(w), z = r w.
// ---------------------------------------------------------------------------

/// mu = delta_1, i.e. omega = sigma on the sphere.
struct PointMassAtOne {};
/// omega = normalized volume measure V on the ball; mu = 2d r^(2d-1) dr.
struct NormalizedVolume {};
/// mu = c * 2r dr.
struct ConstantDensity {
  Rational c{1};
};
/// mu = (1 - r)^beta * 2r dr, beta > -1. Exact moments for integer beta.
struct PowerDensity {
  double beta = 0.0;
};
/// Arbitrary non-negative quadrature rule on [0, 1].
struct GeneralQuadrature {
  std::vector<double> nodes;
  std::vector<double> weights;

  /// Gauss-Legendre discretisation of u(r) * 2r dr on [0, 1].
  static GeneralQuadrature from_density(const std::function<double(double)>& u, int nodes = 256);
};

using RadialMeasure = std::variant<PointMassAtOne, NormalizedVolume, ConstantDensity, PowerDensity, GeneralQuadrature>;

/// Throws InvalidInput unless mu((r, 1]) > 0 for every r < 1 (checked on a
/// quadrature rule by requiring positive weight on (0.99, 1]).
void check_admissible(const RadialMeasure& mu);

/// Integral of r^(2n) d(mu)(r); the dimension only matters for NormalizedVolume.
std::optional<Rational> moment_exact(const RadialMeasure& mu, int n, int d);
double moment(const RadialMeasure& mu, int n, int d);

// ---------------------------------------------------------------------------
// Spaces
// ---------------------------------------------------------------------------

/// B^N_omega: norm^2 = omega(B)|f(0)|^2 + ||R^N f||^2_{L^2(omega)} (N > 0).
struct BesovKind {
  int N = 0;
  RadialMeasure measure;
};
/// D_alpha(B_d): norm^2 = sum_n (n + 1)^alpha ||f_n||^2_{H^2_d}.
struct AlphaKind {
  double alpha = 0.0;
};

/// Radial Gram weights W_0..W_M; ||z^beta||^2 = W_|beta| * beta!/|beta|!.
struct WeightSequence {
  std::vector<double> values;
  std::vector<Rational> exact;  // empty on the float-only path

  int truncation() const { return static_cast<int>(values.size()) - 1; }
  bool is_exact() const { return !exact.empty(); }
};

namespace detail {
struct WeightCache;
}

class SpaceSpec {
 public:
  SpaceSpec(int dimension, BesovKind kind);
  SpaceSpec(int dimension, AlphaKind kind);

  static SpaceSpec besov(int d, int N, RadialMeasure mu) { return SpaceSpec(d, BesovKind{N, std::move(mu)}); }
  static SpaceSpec alpha_scale(int d, double alpha) { return SpaceSpec(d, AlphaKind{alpha}); }
  /// H^2_d with its exact monomial norms beta!/|beta|!.
  static SpaceSpec drury_arveson(int d) { return alpha_scale(d, 0.0); }
  /// H^2(dB_d) = B^0_sigma, with exact norms (d-1)! beta!/(|beta| + d - 1)!.
  static SpaceSpec hardy_sphere(int d) { return besov(d, 0, PointMassAtOne{}); }
  /// D_alpha(B_d) realised as B^N_{omega_(alpha - 2N)} with the smallest
  /// admissible N; equal to alpha_scale(d, alpha) only up to equivalent norms.
  static SpaceSpec alpha_via_measure(int d, double alpha);

  int dimension() const { return d_; }
  const std::variant<BesovKind, AlphaKind>& kind() const { return kind_; }
  bool has_exact_weights() const;

  /// Weights through at least max_degree. Computed once and cached; the
  /// returned sequence is immutable and safe to share across threads.
  std::shared_ptr<const WeightSequence> weights(int max_degree) const;

  std::string describe() const;
  Json to_json() const;
  /// {"d": int, "kind": "besov"|"alpha", "N": int?, "measure": {...}?, "alpha": float?}
  static SpaceSpec from_json(const Json& j);

 private:
  int d_;
  std::variant<BesovKind, AlphaKind> kind_;
  std::shared_ptr<detail::WeightCache> cache_;
};

double weight(const SpaceSpec& space, int n);
Rational weight_exact(const SpaceSpec& space, int n);

double monomial_norm_sq(const SpaceSpec& space, const MultiIndex& beta);
Rational monomial_norm_sq_exact(const SpaceSpec& space, const MultiIndex& beta);

/// <f, g> = sum_beta f(beta) conj(g(beta)) W_|beta| beta!/|beta|!, linear in f.
GaussianRational inner_product(const SpaceSpec& space, const ExactPoly& f, const ExactPoly& g);
Complex inner_product(const SpaceSpec& space, const FloatPoly& f, const FloatPoly& g);
Rational norm_sq(const SpaceSpec& space, const ExactPoly& f);
double norm_sq(const SpaceSpec& space, const FloatPoly& f);

/// ||f_n||^2 on the sphere for a homogeneous f_n:
/// n!(d-1)!/(n+d-1)! * ||f_n||^2_{H^2_d}.
Rational hardy_sphere_norm_sq(const ExactPoly& homogeneous);

/// Per-degree ratio of the B^((d-1)/2)_sigma weight to the H^2_d weight (= 1),
/// n = 0..max_degree, for odd d.
std::vector<Rational> besov_da_ratio(int d, int max_degree);

}  // namespace besov
