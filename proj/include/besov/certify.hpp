#pragma once

#include <cstdint>
#include <string>

#include "besov/energy.hpp"
#include "besov/spaces.hpp"

namespace besov {

/// Two-sided enclosure of a positive real.
struct Bracket {
  double lower = 0.0;
  double upper = 0.0;
  long cutoff = 0;  // terms summed explicitly
  double mid() const { return 0.5 * (lower + upper); }
  double rel_width() const { return (upper - lower) / lower; }
};

/// ||L_j||^2 on D_alpha(D) for L_j(f) = f^(j)(1):
/// sum_(n >= j) (n!/(n-j)!)^2 / (n+1)^alpha, enclosed to relative 1e-9.
/// Throws InvalidInput unless alpha > 2j + 1.
Bracket functional_norm_sq(int j, double alpha);

/// f^(j)(1) for a one-variable polynomial.
GaussianRational derivative_at_one(const ExactPoly& f, int j);
/// Order of the zero of f at 1 (0 if f(1) != 0); throws for f = 0.
int zero_order_at_one(const ExactPoly& f);

struct Certificate {
  enum class Kind { DualFunctional, Energy };
  Kind kind = Kind::DualFunctional;
  std::string target;        // which distance is bounded
  double lower_bound = 0.0;  // positive
  Json audit;                // data from which lower_bound can be recomputed
  Json grid;                 // discretization parameters

  Json to_json() const;
  static Certificate from_json(const Json& j);
};

std::string to_string(Certificate::Kind k);

/// dist(g, {p h : p polynomial}) >= |L_j(g)| / ||L_j|| in D_alpha(D). The
/// space must be one-variable alpha_scale; h must vanish to order >= j + 1 at
/// 1 and L_j(g) must be non-zero. Violations throw InvalidInput.
Certificate dual_lower_bound(const SpaceSpec& space, const ExactPoly& g, const ExactPoly& h, int j);

struct EnergyCertificateOptions {
  EnergyOptions energy;
  double support_tolerance = 1e-10;  // relative to the l1 norm of the coefficients of f
  double sphere_tolerance = 1e-12;
  int moment_degree = 6;
};

/// dist(1, {p f : p polynomial}) >= mu_total / sqrt(E_upper) in H^2_d, for a
/// cube measure carried by Z(f) on the sphere. Throws InvalidInput if the
/// support check fails or the space is not H^2_d.
Certificate energy_lower_bound(const SpaceSpec& space, const FloatPoly& f, const CubeMeasure& mu,
                               const EnergyCertificateOptions& opts = {});

/// Recomputes lower_bound from the audit record; true when it agrees and every
/// recorded check passed.
bool verify_certificate(const Certificate& cert, double rel_tolerance = 1e-9);

struct DominationGrid {
  int radial = 24;          // radii 1 - (1 - r_max)^(i / (radial - 1)), plus r = 0
  double r_max = 0.9999;
  int phases = 16;          // e^(2 pi i k / phases) e_j for each coordinate axis
  int random_directions = 64;
  std::uint64_t seed = 1;
};

/// max |g|^j / |f| over a radial-spherical grid in the ball; infinity when f
/// vanishes at a node where g does not.
double domination_constant(const FloatPoly& f, const FloatPoly& g, int j, const DominationGrid& grid = {});

}  // namespace besov
