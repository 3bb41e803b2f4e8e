#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "besov/io.hpp"
#include "besov/sparse_poly.hpp"

namespace besov {

/// A map phi: [-1, 1]^m -> unit sphere of C^d.
class CubeParametrization {
 public:
  using Map = std::function<void(const double* t, Complex* out)>;
  /// <phi(t), phi(s)> as a function of t - s, when the family has that symmetry.
  using DifferenceKernel = std::function<Complex(const double* delta)>;

  /// Zero set of 1 - k^(k/2) z_1 ... z_k on the sphere (k >= 2):
  /// (1/sqrt(k)) (e^(i a_1), ..., e^(i a_(k-1)), e^(-i sum a), 0, ...),
  /// a_j = (pi/2) t_j, so m = k - 1.
  static CubeParametrization torus(int k, int d);
  /// Zero set of 1 - (z_1^2 + ... + z_k^2) on the sphere, the real unit
  /// sphere in the first k coordinates, in the gnomonic chart
  /// (1, a t) / sqrt(1 + a^2 |t|^2), so m = k - 1.
  static CubeParametrization sphere(int k, int d, double a = 1.0);
  /// Arbitrary user map; the reverse-Lipschitz constant is then only estimated.
  static CubeParametrization custom(std::string name, int m, int d, Map map,
                                    std::optional<double> lipschitz_lower = std::nullopt);
  /// {"type": "torus"|"sphere", "k": int, "d": int, "a": float?}
  static CubeParametrization from_json(const Json& j);

  const std::string& name() const { return name_; }
  int m() const { return m_; }
  int d() const { return d_; }
  void operator()(const double* t, Complex* out) const { map_(t, out); }
  /// A proven lower bound for |phi(t) - phi(s)| / |t - s|, when known.
  std::optional<double> lipschitz_lower() const { return c_; }
  const DifferenceKernel* difference_kernel() const { return kernel_ ? &kernel_ : nullptr; }
  Json to_json() const { return spec_; }

 private:
  std::string name_;
  int m_ = 0;
  int d_ = 0;
  Map map_;
  std::optional<double> c_;
  DifferenceKernel kernel_;
  Json spec_;
};

/// scale * (pushforward of Lebesgue measure on [-1,1]^m), discretized with
/// `nodes` midpoints per axis.
struct CubeMeasure {
  CubeParametrization phi;
  double scale = 1.0;
  int nodes = 16;

  double total_mass() const;
  Json to_json() const;
  static CubeMeasure from_json(const Json& j);
};

struct EnergyOptions {
  int max_nodes = 128;
  double rel_tolerance = 0.02;  // accepted when doubling moves E by less than this
  int lipschitz_grid = 8;       // nodes per axis for the grid estimate of c
};

struct EnergyResult {
  int nodes = 0;               // accepted resolution
  double quadrature = 0.0;     // E at the accepted resolution
  double coarse = 0.0;         // E at half that resolution
  double richardson = 0.0;     // 2 E_n - E_(n/2), first-order extrapolation
  double rel_change = 0.0;
  bool converged = false;
  double c_grid = 0.0;         // grid minimum of |phi(t) - phi(s)| / |t - s|
  double c_used = 0.0;         // analytic bound when available, else the grid value
  bool c_rigorous = false;
  double cube_integral = 0.0;  // int int |t - s|^(-2) over [-1,1]^m x [-1,1]^m
  double upper_bound = 0.0;    // (2 / c^2) scale^2 cube_integral
};

/// Midpoint tensor quadrature of E(mu) = int int 1/|1 - <z, w>| dmu dmu with
/// the second copy of the grid shifted by half a cell. Rejects m < 3.
EnergyResult energy(const CubeMeasure& mu, const EnergyOptions& opts = {});
double energy_at(const CubeMeasure& mu, int nodes);

/// int int |t - s|^(-2) dt ds over [-1,1]^m x [-1,1]^m (finite for m >= 3).
double cube_singular_integral(int m);

/// min |phi(t) - phi(s)| / |t - s| over pairs of midpoint grid nodes.
double reverse_lipschitz_grid(const CubeParametrization& phi, int nodes);

/// Midpoint nodes of [-1,1]^m with `nodes` points per axis, row-major.
std::vector<std::vector<double>> cube_nodes(int m, int nodes, double shift = 0.0);

}  // namespace besov
