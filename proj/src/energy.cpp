#include "besov/energy.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include <gsl/gsl_integration.h>

#include "besov/parallel.hpp"

namespace besov {

namespace {

struct GaussRule {
  std::vector<double> x, w;
};

GaussRule gauss_legendre(int n, double a, double b) {
  gsl_integration_glfixed_table* table = gsl_integration_glfixed_table_alloc(static_cast<std::size_t>(n));
  GaussRule r;
  for (int i = 0; i < n; ++i) {
    double x = 0.0, w = 0.0;
    gsl_integration_glfixed_point(a, b, static_cast<std::size_t>(i), &x, &w, table);
    r.x.push_back(x);
    r.w.push_back(w);
  }
  gsl_integration_glfixed_table_free(table);
  return r;
}

// Advances a mixed-radix counter; false after the last state.
bool next_index(std::vector<int>& idx, int lo, int hi) {
  for (std::size_t k = idx.size(); k-- > 0;) {
    if (++idx[k] <= hi) return true;
    idx[k] = lo;
  }
  return false;
}

double distance(const std::vector<Complex>& a, const std::vector<Complex>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::norm(a[i] - b[i]);
  return std::sqrt(s);
}

std::vector<std::vector<Complex>> evaluate_grid(const CubeParametrization& phi,
                                                const std::vector<std::vector<double>>& pts) {
  std::vector<std::vector<Complex>> out(pts.size(), std::vector<Complex>(phi.d()));
  for (std::size_t i = 0; i < pts.size(); ++i) phi(pts[i].data(), out[i].data());
  return out;
}

}  // namespace

CubeParametrization CubeParametrization::torus(int k, int d) {
  if (k < 2 || k > d) throw InvalidInput("torus family needs 2 <= k <= d");
  CubeParametrization p;
  p.name_ = "torus";
  p.m_ = k - 1;
  p.d_ = d;
  const double amp = 1.0 / std::sqrt(static_cast<double>(k));
  const double half_pi = std::numbers::pi / 2.0;
  p.map_ = [k, d, amp, half_pi](const double* t, Complex* out) {
    double sum = 0.0;
    for (int i = 0; i < k - 1; ++i) {
      const double a = half_pi * t[i];
      sum += a;
      out[i] = std::polar(amp, a);
    }
    out[k - 1] = std::polar(amp, -sum);
    for (int i = k; i < d; ++i) out[i] = 0.0;
  };
  // |e^(ia) - e^(ib)| >= (2/pi)|a - b| for |a - b| <= pi, applied to the
  // first k - 1 coordinates.
  p.c_ = amp;
  p.kernel_ = [k, half_pi](const double* delta) {
    Complex s = 0.0;
    double sum = 0.0;
    for (int i = 0; i < k - 1; ++i) {
      const double a = half_pi * delta[i];
      sum += a;
      s += std::polar(1.0, a);
    }
    s += std::polar(1.0, -sum);
    return s / static_cast<double>(k);
  };
  p.spec_ = Json{{"type", "torus"}, {"k", k}, {"d", d}};
  return p;
}

CubeParametrization CubeParametrization::sphere(int k, int d, double a) {
  if (k < 2 || k > d) throw InvalidInput("sphere family needs 2 <= k <= d");
  if (!(a > 0.0)) throw InvalidInput("sphere chart scale must be positive");
  CubeParametrization p;
  p.name_ = "sphere";
  p.m_ = k - 1;
  p.d_ = d;
  p.map_ = [k, d, a](const double* t, Complex* out) {
    double n2 = 1.0;
    for (int i = 0; i < k - 1; ++i) n2 += a * a * t[i] * t[i];
    const double inv = 1.0 / std::sqrt(n2);
    out[0] = inv;
    for (int i = 1; i < k; ++i) out[i] = a * t[i - 1] * inv;
    for (int i = k; i < d; ++i) out[i] = 0.0;
  };
  // Points u = (1, a t) lie on a hyperplane at distance 1 from the origin, so
  // sin(angle(u, u')) >= |u - u'| / (|u||u'|) >= a |t - s| / (1 + a^2 m), and
  // the chord 2 sin(angle/2) is at least sin(angle).
  p.c_ = a / (1.0 + a * a * (k - 1));
  p.spec_ = Json{{"type", "sphere"}, {"k", k}, {"d", d}, {"a", a}};
  return p;
}

CubeParametrization CubeParametrization::custom(std::string name, int m, int d, Map map,
                                                std::optional<double> lipschitz_lower) {
  if (m < 0 || d < 1) throw InvalidInput("custom cube needs m >= 0 and d >= 1");
  CubeParametrization p;
  p.name_ = std::move(name);
  p.m_ = m;
  p.d_ = d;
  p.map_ = std::move(map);
  p.c_ = lipschitz_lower;
  p.spec_ = Json{{"type", "custom"}, {"name", p.name_}, {"m", m}, {"d", d}};
  return p;
}

CubeParametrization CubeParametrization::from_json(const Json& j) {
  if (!j.is_object() || !j.contains("type")) throw InvalidInput("cube spec needs a \"type\" field");
  const auto type = j.at("type").get<std::string>();
  auto geti = [&](const char* key) {
    if (!j.contains(key) || !j.at(key).is_number_integer())
      throw InvalidInput(std::string("cube spec field \"") + key + "\" must be an integer");
    return j.at(key).get<int>();
  };
  if (type == "torus") return torus(geti("k"), geti("d"));
  if (type == "sphere") return sphere(geti("k"), geti("d"), j.value("a", 1.0));
  throw InvalidInput("unknown cube type '" + type + "' (expected torus or sphere)");
}

double CubeMeasure::total_mass() const { return scale * std::pow(2.0, phi.m()); }

Json CubeMeasure::to_json() const { return Json{{"cube", phi.to_json()}, {"scale", scale}, {"nodes", nodes}}; }

CubeMeasure CubeMeasure::from_json(const Json& j) {
  if (!j.is_object() || !j.contains("cube")) throw InvalidInput("measure spec needs a \"cube\" field");
  CubeMeasure mu{CubeParametrization::from_json(j.at("cube")), j.value("scale", 1.0), j.value("nodes", 16)};
  if (!(mu.scale > 0.0)) throw InvalidInput("measure scale must be positive");
  if (mu.nodes < 1) throw InvalidInput("measure needs at least one node per axis");
  return mu;
}

std::vector<std::vector<double>> cube_nodes(int m, int nodes, double shift) {
  const double h = 2.0 / nodes;
  std::vector<std::vector<double>> out;
  std::vector<int> idx(m, 0);
  do {
    std::vector<double> t(m);
    for (int k = 0; k < m; ++k) t[k] = -1.0 + (idx[k] + 0.5) * h + shift;
    out.push_back(std::move(t));
  } while (m > 0 && next_index(idx, 0, nodes - 1));
  return out;
}

double cube_singular_integral(int m) {
  if (m < 3) throw InvalidInput("the cube singular integral diverges for m < 3");
  if (m > 6) throw InvalidInput("cube singular integral implemented for m <= 6");
  // Difference variable u = t - s, symmetry in each sign, then the Duffy
  // split u_1 = max, u_k = u_1 v_k:
  //   I = m 2^m int_0^2 u^(m-3) (2 - u) int_[0,1]^(m-1) prod (2 - u v_k) / (1 + |v|^2) dv du.
  // The u-integrand is a polynomial of degree 2m - 3 in u.
  const GaussRule ru = gauss_legendre(m + 1, 0.0, 2.0);
  const GaussRule rv = gauss_legendre(m <= 4 ? 40 : 20, 0.0, 1.0);
  const int nv = static_cast<int>(rv.x.size());
  long double total = 0.0L;
  for (std::size_t iu = 0; iu < ru.x.size(); ++iu) {
    const double u = ru.x[iu];
    long double inner = 0.0L;
    std::vector<int> idx(m - 1, 0);
    do {
      double w = 1.0, v2 = 0.0, prod = 1.0;
      for (int k = 0; k < m - 1; ++k) {
        const double v = rv.x[idx[k]];
        w *= rv.w[idx[k]];
        v2 += v * v;
        prod *= 2.0 - u * v;
      }
      inner += w * prod / (1.0 + v2);
    } while (next_index(idx, 0, nv - 1));
    total += ru.w[iu] * std::pow(u, m - 3) * (2.0 - u) * inner;
  }
  return static_cast<double>(total) * m * std::pow(2.0, m);
}

double reverse_lipschitz_grid(const CubeParametrization& phi, int nodes) {
  auto pts = cube_nodes(phi.m(), nodes);
  auto vals = evaluate_grid(phi, pts);
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < pts.size(); ++i) {
    for (std::size_t j = i + 1; j < pts.size(); ++j) {
      double dt = 0.0;
      for (int k = 0; k < phi.m(); ++k) dt += (pts[i][k] - pts[j][k]) * (pts[i][k] - pts[j][k]);
      best = std::min(best, distance(vals[i], vals[j]) / std::sqrt(dt));
    }
  }
  return best;
}

double energy_at(const CubeMeasure& mu, int n) {
  const int m = mu.phi.m();
  if (m < 3) throw InvalidInput("energy needs a cube of dimension m >= 3 (got " + std::to_string(m) + ")");
  if (n < 1) throw InvalidInput("energy needs at least one node per axis");
  const double h = 2.0 / n;
  const double cell = std::pow(h, m) * mu.scale;
  long double sum = 0.0L;

  if (const auto* kernel = mu.phi.difference_kernel()) {
    // Offsets e in [-(n-1), n-1]^m with t - s = (e - 1/2) h occur
    // prod (n - |e_k|) times.
    const int width = 2 * n - 1;
    std::vector<long double> slots(static_cast<std::size_t>(width), 0.0L);
    parallel_for(slots.size(), [&](std::size_t first) {
      std::vector<int> idx(m, -(n - 1));
      idx[0] = static_cast<int>(first) - (n - 1);
      std::vector<double> delta(m);
      long double acc = 0.0L;
      std::vector<int> rest(idx.begin() + 1, idx.end());
      do {
        double mult = n - std::abs(idx[0]);
        delta[0] = (idx[0] - 0.5) * h;
        for (int k = 1; k < m; ++k) {
          mult *= n - std::abs(rest[k - 1]);
          delta[k] = (rest[k - 1] - 0.5) * h;
        }
        acc += mult / std::abs(1.0 - (*kernel)(delta.data()));
      } while (next_index(rest, -(n - 1), n - 1));
      slots[first] = acc;
    });
    for (auto v : slots) sum += v;
  } else {
    auto t = evaluate_grid(mu.phi, cube_nodes(m, n));
    auto s = evaluate_grid(mu.phi, cube_nodes(m, n, 0.5 * h));
    std::vector<long double> slots(t.size(), 0.0L);
    parallel_for(t.size(), [&](std::size_t i) {
      long double acc = 0.0L;
      for (const auto& w : s) {
        Complex ip = 0.0;
        for (std::size_t k = 0; k < w.size(); ++k) ip += t[i][k] * std::conj(w[k]);
        acc += 1.0 / std::abs(1.0 - ip);
      }
      slots[i] = acc;
    });
    for (auto v : slots) sum += v;
  }
  return static_cast<double>(sum) * cell * cell;
}

EnergyResult energy(const CubeMeasure& mu, const EnergyOptions& opts) {
  const int m = mu.phi.m();
  if (m < 3) throw InvalidInput("energy needs a cube of dimension m >= 3 (got " + std::to_string(m) + ")");
  // the generic path costs n^(2m) kernel evaluations
  int cap = opts.max_nodes;
  if (!mu.phi.difference_kernel()) cap = std::min(cap, static_cast<int>(std::pow(3e8, 1.0 / (2.0 * m))));

  EnergyResult r;
  int n = std::max(1, std::min(mu.nodes, cap / 2));
  double prev = energy_at(mu, n);
  for (;;) {
    const double cur = energy_at(mu, 2 * n);
    r.nodes = 2 * n;
    r.coarse = prev;
    r.quadrature = cur;
    r.richardson = 2.0 * cur - prev;
    r.rel_change = std::abs(cur - prev) / cur;
    r.converged = r.rel_change < opts.rel_tolerance;
    if (r.converged || 4 * n > cap) break;
    prev = cur;
    n *= 2;
  }
  r.c_grid = reverse_lipschitz_grid(mu.phi, opts.lipschitz_grid);
  r.c_rigorous = mu.phi.lipschitz_lower().has_value();
  r.c_used = r.c_rigorous ? *mu.phi.lipschitz_lower() : r.c_grid;
  r.cube_integral = cube_singular_integral(m);
  r.upper_bound = 2.0 / (r.c_used * r.c_used) * mu.scale * mu.scale * r.cube_integral;
  return r;
}

}  // namespace besov
