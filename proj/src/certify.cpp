#include "besov/certify.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

#include "besov/io.hpp"

namespace besov {

namespace {

constexpr long double kUnitRoundoff = 0x1p-63L;

// Coefficients of prod_(i<j) (x - 1 - i)^2 in increasing degree.
std::vector<long double> falling_square_coefficients(int j) {
  std::vector<BigInt> p{BigInt(1)};
  for (int i = 0; i < j; ++i) {
    for (int rep = 0; rep < 2; ++rep) {
      std::vector<BigInt> q(p.size() + 1, BigInt(0));
      for (std::size_t k = 0; k < p.size(); ++k) {
        q[k + 1] += p[k];
        q[k] -= p[k] * (i + 1);
      }
      p = std::move(q);
    }
  }
  std::vector<long double> out;
  for (const auto& c : p) out.push_back(std::stold(c.get_str()));
  return out;
}

// True when the polynomial q has the sign of its leading coefficient on
// [x, infinity): |q_top| x^top > sum_(i<top) |q_i| x^i, and the ratio only
// improves as x grows.
bool leading_term_dominates(const std::vector<long double>& q, long double x) {
  const std::size_t top = q.size() - 1;
  long double rest = 0.0L;
  for (std::size_t i = 0; i < top; ++i) rest += std::fabs(q[i]) * std::pow(x, static_cast<long double>(i) - top);
  return std::fabs(q[top]) > rest * (1.0L + 1e-12L);
}

bool is_one_variable_alpha(const SpaceSpec& space, double* alpha) {
  if (space.dimension() != 1) return false;
  const auto* k = std::get_if<AlphaKind>(&space.kind());
  if (!k) return false;
  *alpha = k->alpha;
  return true;
}

bool is_drury_arveson(const SpaceSpec& space) {
  if (const auto* k = std::get_if<AlphaKind>(&space.kind())) return k->alpha == 0.0;
  if (!space.has_exact_weights()) return false;
  for (int n = 0; n <= 32; ++n)
    if (weight_exact(space, n) != 1) return false;
  return true;
}

std::string fmt(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

Json rational_json(const Rational& q) { return q.get_str(); }

double l1_norm(const FloatPoly& f) {
  double s = 0.0;
  for (const auto& [beta, c] : f.terms()) s += std::abs(c);
  return s;
}

}  // namespace

Bracket functional_norm_sq(int j, double alpha) {
  if (j < 0) throw InvalidInput("functional order must be non-negative");
  if (!(alpha > 2.0 * j + 1.0))
    throw InvalidInput("||L_" + std::to_string(j) + "|| diverges on D_alpha unless alpha > " +
                       std::to_string(2 * j + 1) + " (got alpha = " + fmt(alpha) + ")");
  const auto p = falling_square_coefficients(j);
  const long double a = alpha;
  const int deg = 2 * j;

  // f(x) = P(x) / x^alpha with x = n + 1.
  auto term = [&](long double x) {
    long double v = 1.0L;
    for (int i = 0; i < j; ++i) v *= (x - 1 - i) * (x - 1 - i);
    return v / std::pow(x, a);
  };
  // int_y^infinity f and a bound on its rounding error.
  auto tail = [&](long double y, long double* err) {
    long double s = 0.0L, mag = 0.0L;
    for (int i = 0; i <= deg; ++i) {
      const long double v = p[i] * std::pow(y, i - a + 1) / (a - i - 1);
      s += v;
      mag += std::fabs(v);
    }
    *err = mag * kUnitRoundoff * (4 * deg + 16);
    return s;
  };
  // x^(alpha+1) f'(x) and x^(alpha+2) f''(x) as polynomials in x.
  std::vector<long double> d1(p.size()), d2(p.size());
  for (int i = 0; i <= deg; ++i) {
    d1[i] = p[i] * (i - a);
    d2[i] = p[i] * (i - a) * (i - a - 1);
  }

  long X = std::max<long>(64, 8L * (j + 1));
  long summed = 0;
  long double partial = 0.0L;
  Bracket b;
  for (;;) {
    for (long x = summed + 1; x <= X; ++x) partial += term(static_cast<long double>(x));
    summed = X;
    // Convex and decreasing on [X, inf): the midpoint rule overestimates and
    // the trapezoid rule underestimates the tail sum.
    const bool shape_ok = leading_term_dominates(d1, X) && leading_term_dominates(d2, X);
    long double e_lo = 0.0L, e_hi = 0.0L;
    const long double lo_tail = tail(X + 1.0L, &e_lo) + term(X + 1.0L) / 2;
    const long double hi_tail = tail(X + 0.5L, &e_hi);
    const long double slack = (X + 10) * kUnitRoundoff * partial;
    b.lower = static_cast<double>(partial + lo_tail - slack - e_lo);
    b.upper = static_cast<double>(partial + hi_tail + slack + e_hi);
    b.lower = std::nextafter(b.lower, 0.0);
    b.upper = std::nextafter(b.upper, std::numeric_limits<double>::infinity());
    b.cutoff = X;
    if (shape_ok && b.rel_width() < 1e-9) return b;
    if (X > (1L << 26)) {
      if (!shape_ok) throw InvalidInput("functional norm tail could not be certified");
      return b;
    }
    X *= 2;
  }
}

GaussianRational derivative_at_one(const ExactPoly& f, int j) {
  if (f.dimension() != 1) throw InvalidInput("derivative at 1 needs a one-variable polynomial");
  GaussianRational s{0};
  for (const auto& [beta, c] : f.terms()) {
    const int n = beta[0];
    if (n < j) continue;
    BigInt falling(1);
    for (int i = 0; i < j; ++i) falling *= n - i;
    s += c * GaussianRational(Rational(falling));
  }
  return s;
}

int zero_order_at_one(const ExactPoly& f) {
  if (f.is_zero()) throw InvalidInput("the zero polynomial has no finite zero order");
  for (int i = 0;; ++i)
    if (!derivative_at_one(f, i).is_zero()) return i;
}

std::string to_string(Certificate::Kind k) { return k == Certificate::Kind::DualFunctional ? "DualFunctional" : "Energy"; }

Json Certificate::to_json() const {
  return Json{{"kind", besov::to_string(kind)}, {"target", target}, {"lower_bound", lower_bound},
              {"audit", audit}, {"grid", grid}};
}

Certificate Certificate::from_json(const Json& j) {
  if (!j.is_object()) throw InvalidInput("certificate must be a JSON object");
  for (const char* key : {"kind", "lower_bound", "audit"})
    if (!j.contains(key)) throw InvalidInput(std::string("certificate is missing \"") + key + "\"");
  Certificate c;
  const auto kind = j.at("kind").get<std::string>();
  if (kind == "DualFunctional") c.kind = Kind::DualFunctional;
  else if (kind == "Energy") c.kind = Kind::Energy;
  else throw InvalidInput("unknown certificate kind '" + kind + "'");
  c.target = j.value("target", "");
  c.lower_bound = j.at("lower_bound").get<double>();
  c.audit = j.at("audit");
  c.grid = j.value("grid", Json::object());
  return c;
}

Certificate dual_lower_bound(const SpaceSpec& space, const ExactPoly& g, const ExactPoly& h, int j) {
  double alpha = 0.0;
  if (!is_one_variable_alpha(space, &alpha))
    throw InvalidInput("dual certificates need a one-variable alpha-scale space D_alpha(D)");
  if (g.dimension() != 1 || h.dimension() != 1) throw InvalidInput("dual certificates need one-variable g and h");
  const int order = zero_order_at_one(h);
  if (order < j + 1)
    throw InvalidInput("generator vanishes to order " + std::to_string(order) + " at 1; L_" + std::to_string(j) +
                       " needs order >= " + std::to_string(j + 1));
  const GaussianRational lg = derivative_at_one(g, j);
  if (lg.is_zero()) throw InvalidInput("L_" + std::to_string(j) + "(g) = 0: the functional does not separate g");
  const Bracket nb = functional_norm_sq(j, alpha);
  const double abs_lg = std::sqrt(abs_sq(lg).get_d());

  Certificate c;
  c.kind = Certificate::Kind::DualFunctional;
  c.target = "dist(g, {p h})";
  c.lower_bound = abs_lg / std::sqrt(nb.upper);
  c.audit = Json{{"alpha", alpha},
                 {"j", j},
                 {"g", poly_to_json(g)},
                 {"h", poly_to_json(h)},
                 {"h_zero_order", order},
                 {"L_j_g", {rational_json(lg.re), rational_json(lg.im)}},
                 {"abs_L_j_g", abs_lg},
                 {"norm_sq_lower", nb.lower},
                 {"norm_sq_upper", nb.upper}};
  c.grid = Json{{"cutoff", nb.cutoff}};
  return c;
}

Certificate energy_lower_bound(const SpaceSpec& space, const FloatPoly& f, const CubeMeasure& mu,
                               const EnergyCertificateOptions& opts) {
  if (!is_drury_arveson(space)) throw InvalidInput("energy certificates are stated in H^2_d");
  if (static_cast<int>(f.dimension()) != space.dimension() || mu.phi.d() != space.dimension())
    throw InvalidInput("f, the cube and the space must share the dimension d");
  const int m = mu.phi.m();
  const int d = mu.phi.d();
  const double h = 2.0 / mu.nodes;
  const double cell = mu.scale * std::pow(h, m);
  const double fscale = l1_norm(f);
  if (fscale == 0.0) throw InvalidInput("f = 0 has no proper invariant subspace to certify");

  double support_max = 0.0, sphere_max = 0.0;
  const auto moments = graded_basis(d, opts.moment_degree);
  std::vector<Complex> moment_sum(moments.size(), 0.0);
  std::vector<Complex> z(d);
  for (double shift : {0.0, 0.5 * h}) {
    for (const auto& t : cube_nodes(m, mu.nodes, shift)) {
      mu.phi(t.data(), z.data());
      double n2 = 0.0;
      for (const auto& zi : z) n2 += std::norm(zi);
      sphere_max = std::max(sphere_max, std::abs(std::sqrt(n2) - 1.0));
      const Complex fv = evaluate(f, std::span<const Complex>(z));
      support_max = std::max(support_max, std::abs(fv));
      if (shift == 0.0) {
        for (std::size_t b = 0; b < moments.size(); ++b) {
          Complex mono = 1.0;
          for (int i = 0; i < d; ++i)
            for (int e = 0; e < moments[b][i]; ++e) mono *= z[i];
          moment_sum[b] += mono * fv;
        }
      }
    }
  }
  double moment_max = 0.0;
  for (const auto& s : moment_sum) moment_max = std::max(moment_max, std::abs(s) * cell);
  if (sphere_max > opts.sphere_tolerance)
    throw InvalidInput("cube leaves the unit sphere (max ||phi| - 1| = " + fmt(sphere_max) + ")");
  if (support_max > opts.support_tolerance * fscale)
    throw InvalidInput("cube is not contained in Z(f) (max |f(phi)| = " + fmt(support_max) + ")");

  const EnergyResult e = energy(mu, opts.energy);
  if (!std::isfinite(e.upper_bound) || !(e.c_used > 0.0)) throw InvalidInput("energy bound diverges");
  if (e.quadrature > e.upper_bound)
    throw InvalidInput("quadrature energy exceeds the analytic bound; the reverse-Lipschitz constant is wrong");

  Certificate c;
  c.kind = Certificate::Kind::Energy;
  c.target = "dist(1, {p f})";
  c.lower_bound = mu.total_mass() / std::sqrt(e.upper_bound);
  c.audit = Json{{"f", float_poly_to_json(f)},
                 {"measure", mu.to_json()},
                 {"total_mass", mu.total_mass()},
                 {"c_used", e.c_used},
                 {"c_rigorous", e.c_rigorous},
                 {"c_grid", e.c_grid},
                 {"cube_integral", e.cube_integral},
                 {"energy_upper", e.upper_bound},
                 {"energy_upper_2_over_c", 2.0 / e.c_used * mu.scale * mu.scale * e.cube_integral},
                 {"energy_quadrature", e.quadrature},
                 {"energy_coarse", e.coarse},
                 {"energy_richardson", e.richardson},
                 {"energy_rel_change", e.rel_change},
                 {"energy_converged", e.converged},
                 {"support_max", support_max},
                 {"support_scale", fscale},
                 {"sphere_max", sphere_max},
                 {"moment_max", moment_max},
                 {"moment_degree", opts.moment_degree}};
  c.grid = Json{{"m", m}, {"support_nodes", mu.nodes}, {"energy_nodes", e.nodes}};
  return c;
}

bool verify_certificate(const Certificate& cert, double rel_tolerance) {
  if (!(cert.lower_bound > 0.0)) return false;
  const auto& a = cert.audit;
  auto close = [&](double x, double y) { return std::abs(x - y) <= rel_tolerance * std::abs(y); };
  if (cert.kind == Certificate::Kind::DualFunctional) {
    const int j = a.at("j").get<int>();
    const auto g = poly_from_json(a.at("g"));
    const auto h = poly_from_json(a.at("h"));
    if (zero_order_at_one(h) < j + 1) return false;
    const GaussianRational lg = derivative_at_one(g, j);
    if (lg.is_zero()) return false;
    const Bracket nb = functional_norm_sq(j, a.at("alpha").get<double>());
    return close(cert.lower_bound, std::sqrt(abs_sq(lg).get_d()) / std::sqrt(nb.upper));
  }
  if (!a.at("c_rigorous").get<bool>()) return false;
  const CubeMeasure mu = CubeMeasure::from_json(a.at("measure"));
  const auto c = mu.phi.lipschitz_lower();
  if (!c) return false;
  if (a.at("support_max").get<double>() > 1e-10 * a.at("support_scale").get<double>()) return false;
  const double upper = 2.0 / (*c * *c) * mu.scale * mu.scale * cube_singular_integral(mu.phi.m());
  return close(a.at("energy_upper").get<double>(), upper) &&
         close(cert.lower_bound, mu.total_mass() / std::sqrt(upper));
}

double domination_constant(const FloatPoly& f, const FloatPoly& g, int j, const DominationGrid& grid) {
  if (f.dimension() != g.dimension()) throw InvalidInput("f and g must have the same dimension");
  if (grid.radial < 2 || !(grid.r_max > 0.0 && grid.r_max < 1.0))
    throw InvalidInput("domination grid needs >= 2 radii and 0 < r_max < 1");
  const int d = static_cast<int>(f.dimension());
  std::vector<std::vector<Complex>> dirs;
  for (int axis = 0; axis < d; ++axis) {
    for (int k = 0; k < grid.phases; ++k) {
      std::vector<Complex> w(d, 0.0);
      w[axis] = std::polar(1.0, 2.0 * std::numbers::pi * k / grid.phases);
      dirs.push_back(std::move(w));
    }
  }
  std::mt19937_64 rng(grid.seed);
  std::normal_distribution<double> normal;
  for (int k = 0; k < grid.random_directions; ++k) {
    std::vector<Complex> w(d);
    double n2 = 0.0;
    for (auto& wi : w) {
      wi = Complex(normal(rng), normal(rng));
      n2 += std::norm(wi);
    }
    for (auto& wi : w) wi /= std::sqrt(n2);
    dirs.push_back(std::move(w));
  }
  std::vector<double> radii{0.0};
  for (int i = 1; i < grid.radial; ++i) radii.push_back(1.0 - std::pow(1.0 - grid.r_max, double(i) / (grid.radial - 1)));

  double best = 0.0;
  std::vector<Complex> z(d);
  for (const auto& w : dirs) {
    for (double r : radii) {
      for (int i = 0; i < d; ++i) z[i] = r * w[i];
      const double fv = std::abs(evaluate(f, std::span<const Complex>(z)));
      const double gv = std::pow(std::abs(evaluate(g, std::span<const Complex>(z))), j);
      if (fv == 0.0) {
        if (gv != 0.0) return std::numeric_limits<double>::infinity();
        continue;
      }
      best = std::max(best, gv / fv);
    }
  }
  return best;
}

}  // namespace besov
