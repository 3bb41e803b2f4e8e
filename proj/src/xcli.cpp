#include "besov/xcli.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <numbers>
#include <random>
#include <sstream>

#include <gsl/gsl_integration.h>

#include "besov/approx.hpp"
#include "besov/operators.hpp"
#include "besov/parallel.hpp"
#include "besov/series.hpp"

#ifndef BESOV_VERSION
#define BESOV_VERSION "0.0.0"
#endif

namespace besov {

std::string library_version() { return BESOV_VERSION; }

Json LemmaReport::to_json() const {
  return Json{{"name", name},         {"passed", passed},           {"checks", checks},
              {"failures", failures}, {"worst_margin", worst_margin}, {"details", details}};
}

namespace {

// ---------------------------------------------------------------------------
// Parameter access with field paths in the diagnostics
// ---------------------------------------------------------------------------

template <class T>
T param(const Json& j, const std::string& key, T fallback, const std::string& path = "params") {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const Json::exception& e) {
    throw InvalidInput(path + "." + key + ": " + e.what());
  }
}

ExactPoly poly_param(const Json& j, const std::string& key, ExactPoly fallback, const std::string& path = "params") {
  if (!j.contains(key)) return fallback;
  try {
    return poly_from_json(j.at(key), fallback.dimension());
  } catch (const InvalidInput& e) {
    throw InvalidInput(path + "." + key + ": " + e.what());
  } catch (const Json::exception& e) {
    throw InvalidInput(path + "." + key + ": " + e.what());
  }
}

ExactPoly one_minus_lambda() { return ExactPoly::constant(1, GaussianRational(1)) - ExactPoly::variable(1, 0); }

// ---------------------------------------------------------------------------
// Random inputs for the lemma checks
// ---------------------------------------------------------------------------

struct Sampler {
  std::mt19937_64 rng;
  explicit Sampler(std::uint64_t seed) : rng(seed) {}

  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }
  double real(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }

  ExactPoly poly(int d, int max_degree, int terms) {
    ExactPoly f(d);
    for (int t = 0; t < terms; ++t) {
      std::vector<int> e(d, 0);
      int budget = integer(0, max_degree);
      for (int i = 0; i < d && budget > 0; ++i) {
        const int take = i == d - 1 ? budget : integer(0, budget);
        e[i] = take;
        budget -= take;
      }
      f.add_term(MultiIndex(std::move(e)),
                 GaussianRational(make_rational(integer(-9, 9), integer(1, 6)), make_rational(integer(-9, 9), integer(1, 6))));
    }
    return f;
  }

  std::vector<Complex> sphere(int d) {
    std::normal_distribution<double> n;
    std::vector<Complex> z(d);
    double s = 0.0;
    for (auto& zi : z) {
      zi = {n(rng), n(rng)};
      s += std::norm(zi);
    }
    for (auto& zi : z) zi /= std::sqrt(s);
    return z;
  }
};

struct Tally {
  int checks = 0;
  int failures = 0;
  double worst = std::numeric_limits<double>::infinity();

  void record(double margin) {
    ++checks;
    if (margin < 0.0) ++failures;
    worst = std::min(worst, margin);
  }
  LemmaReport report(std::string name, Json details) const {
    return {std::move(name), failures == 0 && checks > 0, checks, failures, checks ? worst : 0.0, std::move(details)};
  }
};

double relative_margin(const Rational& value, const Rational& bound) {
  if (sgn(bound) == 0) return sgn(value) == 0 ? 1.0 : -1.0;
  return Rational((bound - value) / bound).get_d();
}

// ---------------------------------------------------------------------------
// Lemma checks
// ---------------------------------------------------------------------------

LemmaReport dilation_contraction(const Json& p) {
  const auto Ns = p.contains("N") && p.at("N").is_number() ? std::vector<int>{p.at("N").get<int>()}
                                                            : param<std::vector<int>>(p, "N", {1, 2});
  const auto rs = param<std::vector<double>>(p, "r", {0.1, 0.5, 0.9, 0.99});
  const int trials = param(p, "trials", 100);
  const int d = param(p, "d", 2);
  const int max_degree = param(p, "max_degree", 6);
  Sampler s(param<std::uint64_t>(p, "seed", 1));
  Tally t;
  for (int N : Ns) {
    if (N < 1) throw InvalidInput("params.N: must be >= 1");
    const auto hi = SpaceSpec::besov(d, N, PointMassAtOne{});
    const auto lo = SpaceSpec::besov(d, N - 1, PointMassAtOne{});
    for (int trial = 0; trial < trials; ++trial) {
      const ExactPoly f = s.poly(d, max_degree, s.integer(1, 6));
      const Rational fn = norm_sq(hi, f);
      for (double r : rs) {
        const Rational rq = exact_from_double(r);
        const Rational one_minus = Rational(1 - rq);
        t.record(relative_margin(norm_sq(lo, f - dilate(f, rq)), Rational(one_minus * one_minus * fn)));
      }
    }
  }
  return t.report("dilation-contraction", Json{{"N", Ns}, {"r", rs}, {"trials", trials}, {"d", d}, {"exact", true}});
}

LemmaReport slice_bound(const Json& p) {
  const int trials = param(p, "trials", 100);
  const int d = param(p, "d", 3);
  const int max_degree = param(p, "max_degree", 6);
  Sampler s(param<std::uint64_t>(p, "seed", 1));
  const auto da = SpaceSpec::drury_arveson(d);
  Tally t;
  for (int trial = 0; trial < trials; ++trial) {
    const ExactPoly f = s.poly(d, max_degree, s.integer(1, 8));
    auto z = s.sphere(d);
    const double r = std::pow(s.real(0.0, 1.0), 1.0 / (2.0 * d));
    for (auto& zi : z) zi *= r;
    double value = 0.0;
    for (const auto& part : to_float(f).homogeneous_parts()) value += std::norm(evaluate(part, std::span<const Complex>(z)));
    const double bound = norm_sq(da, f).get_d();
    t.record(bound > 0 ? (bound * (1 + 1e-12) - value) / bound : -value);
  }
  return t.report("slice-bound", Json{{"trials", trials}, {"d", d}, {"max_degree", max_degree}});
}

LemmaReport slice_outer(const Json& p) {
  const int k = param(p, "k", 3);
  const int d = param(p, "d", 3);
  const int points = param(p, "points", 20);
  const double tol = param(p, "tolerance", 1e-9);
  const ExactPoly f = poly_param(p, "f", one_minus_lambda());
  Sampler s(param<std::uint64_t>(p, "seed", 1));
  const auto image = tau_compose(f, k, d);
  Tally t;
  double min_modulus = std::numeric_limits<double>::infinity();
  bool all_validated = true;
  for (int i = 0; i < points; ++i) {
    const auto z = s.sphere(d);
    const auto sl = slice(image.poly, std::span<const Complex>(z), std::max(image.poly.degree(), 0));
    const auto roots = roots_1d(sl);
    all_validated = all_validated && roots.validated;
    const double mm = roots.roots.empty() ? std::numeric_limits<double>::infinity() : min_root_modulus(roots);
    min_modulus = std::min(min_modulus, mm);
    t.record(roots.validated ? std::min(1.0, mm - (1.0 - tol)) : -1.0);
  }
  return t.report("slice-outer", Json{{"k", k},
                                      {"d", d},
                                      {"f", poly_to_json(f)},
                                      {"points", points},
                                      {"min_root_modulus", min_modulus},
                                      {"roots_validated", all_validated}});
}

// Gauss-Legendre pieces on [a, b], refined geometrically toward both ends.
void graded_rule(double a, double b, bool refine_a, bool refine_b, std::vector<double>& x, std::vector<double>& w) {
  constexpr int kLevels = 24;
  constexpr int kNodes = 10;
  gsl_integration_glfixed_table* table = gsl_integration_glfixed_table_alloc(kNodes);
  std::vector<std::pair<double, double>> pieces;
  const double mid = 0.5 * (a + b);
  auto split = [&](double from, double to, bool refine) {
    if (!refine) {
      pieces.emplace_back(from, to);
      return;
    }
    // refine toward `to`
    double len = to - from;
    double start = from;
    for (int i = 0; i < kLevels; ++i) {
      len *= 0.5;
      pieces.emplace_back(start, start + len);
      start += len;
    }
    pieces.emplace_back(start, to);
  };
  split(mid, a, refine_a);
  split(mid, b, refine_b);
  for (auto [lo, hi] : pieces) {
    if (lo > hi) std::swap(lo, hi);
    for (int i = 0; i < kNodes; ++i) {
      double xi = 0, wi = 0;
      gsl_integration_glfixed_point(lo, hi, static_cast<std::size_t>(i), &xi, &wi, table);
      x.push_back(xi);
      w.push_back(wi);
    }
  }
  gsl_integration_glfixed_table_free(table);
}

// Derivatives F, F', ..., F^(order) of F = N / D at a point, from
// sum_i C(k, i) F^(k-i) D^(i) = N^(k).
std::vector<Complex> quotient_derivatives(const std::vector<Complex>& num, const std::vector<Complex>& den, Complex x,
                                          int order) {
  auto derivs = [&](const std::vector<Complex>& c) {
    std::vector<Complex> out(order + 1, 0.0);
    for (int k = 0; k <= order; ++k) {
      Complex s = 0.0;
      Complex xp = 1.0;
      for (std::size_t n = k; n < c.size(); ++n) {
        double falling = 1.0;
        for (int i = 0; i < k; ++i) falling *= static_cast<double>(n) - i;
        s += c[n] * falling * xp;
        xp *= x;
      }
      out[k] = s;
    }
    return out;
  };
  const auto N = derivs(num);
  const auto D = derivs(den);
  std::vector<Complex> F(order + 1);
  for (int k = 0; k <= order; ++k) {
    Complex s = N[k];
    double binom = 1.0;
    for (int i = 1; i <= k; ++i) {
      binom = binom * (k - i + 1) / i;
      s -= binom * F[k - i] * D[i];
    }
    F[k] = s / D[0];
  }
  return F;
}

LemmaReport onevar_derivative_bound(const Json& p) {
  const ExactPoly poly = poly_param(p, "p", one_minus_lambda());
  if (poly.dimension() != 1) throw InvalidInput("params.p: expected a one-variable polynomial");
  const int n = param(p, "n", 2);
  const auto rs = param<std::vector<double>>(p, "r", {0.5, 0.9, 0.99});
  const double sup_bound = param(p, "sup_bound", 2.0);
  const double l2_bound = param(p, "l2_bound", 3.0);
  if (n < 1) throw InvalidInput("params.n: must be >= 1");

  const auto pc = to_series(to_float(poly), std::max(poly.degree(), 0)).coefficients();
  const auto roots = roots_1d(Series1D<Complex>(pc));
  if (!roots.roots.empty() && min_root_modulus(roots) < 1.0 - 1e-9)
    throw InvalidInput("params.p: must have no zeros in the open unit disc");

  // pole-free away from the boundary zeros of p; refine the grid toward them
  std::vector<double> cuts{-std::numbers::pi, std::numbers::pi};
  for (const auto& root : roots.roots)
    if (std::abs(std::abs(root.value) - 1.0) < 1e-6) cuts.push_back(std::arg(root.value));
  std::sort(cuts.begin(), cuts.end());
  std::vector<double> th, thw, rho, rhow;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
    if (cuts[i + 1] > cuts[i]) graded_rule(cuts[i], cuts[i + 1], i > 0, i + 2 < cuts.size(), th, thw);
  graded_rule(0.0, 1.0, false, true, rho, rhow);
  rho.push_back(1.0);
  rhow.push_back(0.0);

  std::vector<Complex> num{1.0};
  for (int i = 0; i < n; ++i) {
    std::vector<Complex> next(num.size() + pc.size() - 1, 0.0);
    for (std::size_t a = 0; a < num.size(); ++a)
      for (std::size_t b = 0; b < pc.size(); ++b) next[a + b] += num[a] * pc[b];
    num = next;
  }

  Tally t;
  Json rows = Json::array();
  for (double r : rs) {
    std::vector<Complex> den(pc.size());
    double rp = 1.0;
    for (std::size_t i = 0; i < pc.size(); ++i, rp *= r) den[i] = pc[i] * rp;
    std::vector<double> sup(n, 0.0);
    std::vector<long double> l2(rho.size(), 0.0L);
    parallel_for(rho.size(), [&](std::size_t a) {
      long double acc = 0.0L;
      for (std::size_t b = 0; b < th.size(); ++b) {
        const auto F = quotient_derivatives(num, den, std::polar(rho[a], th[b]), n);
        acc += rhow[a] * thw[b] * rho[a] * std::norm(F[n]);
      }
      l2[a] = acc;
    });
    for (std::size_t a = 0; a < rho.size(); ++a)
      for (double angle : th) {
        const auto F = quotient_derivatives(num, den, std::polar(rho[a], angle), n);
        for (int k = 1; k < n; ++k) sup[k] = std::max(sup[k], std::abs(F[k]));
      }
    long double total = 0.0L;
    for (auto v : l2) total += v;
    double worst_sup = 0.0;
    for (int k = 1; k < n; ++k) {
      worst_sup = std::max(worst_sup, sup[k]);
      t.record((sup_bound - sup[k]) / sup_bound);
    }
    t.record((l2_bound - static_cast<double>(total)) / l2_bound);
    rows.push_back(Json{{"r", r}, {"sup_lower_derivatives", worst_sup}, {"disc_l2_sq_top_derivative", static_cast<double>(total)}});
  }
  return t.report("onevar-derivative-bound", Json{{"p", poly_to_json(poly)},
                                                  {"n", n},
                                                  {"sup_bound", sup_bound},
                                                  {"l2_bound", l2_bound},
                                                  {"area_measure", "dA (unnormalized)"},
                                                  {"rows", rows}});
}

LemmaReport rphi_bound(const Json& p) {
  const SpaceSpec space = p.contains("space") ? SpaceSpec::from_json(p.at("space")) : SpaceSpec::drury_arveson(2);
  const ExactPoly base = ExactPoly::constant(2, GaussianRational(1)) - ExactPoly::variable(2, 0);
  const ExactPoly phi = poly_param(p, "phi", base * base);
  if (static_cast<int>(phi.dimension()) != space.dimension()) throw InvalidInput("params.phi: dimension mismatch");
  const auto rs = param<std::vector<double>>(p, "r", {0.5, 0.9});
  const auto degrees = param<std::vector<int>>(p, "degrees", {2, 4, 8});
  Tally t;
  Json rows = Json::array();
  for (double r : rs) {
    const FloatPoly rphi = radial_derivative(dilate(to_float(phi), r), 1);
    double prev = 0.0;
    Json values = Json::array();
    for (int m : degrees) {
      const double v = finite_section_mult_bound(space, rphi, m);
      values.push_back(v);
      t.record(std::isfinite(v) ? (v - prev * (1 - 1e-9)) / std::max(v, 1e-300) : -1.0);
      prev = std::max(prev, v);
    }
    rows.push_back(Json{{"r", r}, {"degrees", degrees}, {"finite_section_bounds", values}});
  }
  return t.report("rphi-bound", Json{{"space", space.to_json()},
                                     {"phi", poly_to_json(phi)},
                                     {"observational", true},
                                     {"check", "finite-section bounds are finite and nondecreasing in m"},
                                     {"rows", rows}});
}

LemmaReport decomposition_isometry(const Json& p) {
  const int max_d = param(p, "max_d", 4);
  const int max_alpha = param(p, "max_alpha", 5);
  const int max_k = param(p, "max_k", 8);
  Tally t;
  for (int d = 2; d <= max_d; ++d) {
    const auto da = SpaceSpec::drury_arveson(d);
    for (const auto& a : graded_basis(d - 1, max_alpha)) {
      std::vector<int> e(d, 0);
      for (int i = 0; i < d - 1; ++i) e[i] = a[i];
      const Rational base = monomial_norm_sq_exact(da, MultiIndex(e));
      for (int k = 0; k <= max_k; ++k) {
        e[d - 1] = k;
        const Rational ratio = Rational(monomial_norm_sq_exact(da, MultiIndex(e)) / base);
        BigInt binom;
        mpz_bin_uiui(binom.get_mpz_t(), static_cast<unsigned long>(a.degree() + k), static_cast<unsigned long>(k));
        t.record(ratio == make_rational(BigInt(1), binom) ? 0.0 : -1.0);
      }
    }
  }
  return t.report("decomposition-isometry",
                  Json{{"max_d", max_d}, {"max_alpha", max_alpha}, {"max_k", max_k}, {"exact", true}});
}

LemmaReport besov_da_window(const Json& p) {
  const int max_n = param(p, "max_n", 200);
  const int d = 3;
  const auto ratios = besov_da_ratio(d, max_n);
  const auto space = SpaceSpec::besov(d, 1, PointMassAtOne{});
  const Rational lo = make_rational(1, 3), hi = make_rational(2);
  Tally t;
  for (int n = 0; n <= max_n; ++n) {
    const Rational closed = n == 0 ? make_rational(1) : make_rational(2L * n * n, (n + 1L) * (n + 2L));
    const bool match = ratios[n] == closed && weight_exact(space, n) == closed;
    const double margin = std::min(Rational(ratios[n] - lo).get_d(), Rational(hi - ratios[n]).get_d());
    t.record(match ? margin : -1.0);
  }
  return t.report("besov-da-window", Json{{"d", d}, {"N", 1}, {"max_n", max_n}, {"window", {"1/3", "2"}}, {"exact", true}});
}

using LemmaFn = LemmaReport (*)(const Json&);

const std::vector<std::pair<std::string, LemmaFn>>& registry() {
  static const std::vector<std::pair<std::string, LemmaFn>> r{
      {"dilation-contraction", dilation_contraction},
      {"slice-bound", slice_bound},
      {"slice-outer", slice_outer},
      {"onevar-derivative-bound", onevar_derivative_bound},
      {"rphi-bound", rphi_bound},
      {"decomposition-isometry", decomposition_isometry},
      {"besov-da-window", besov_da_window},
  };
  return r;
}

}  // namespace

std::vector<std::string> lemma_names() {
  std::vector<std::string> out;
  for (const auto& [name, fn] : registry()) out.push_back(name);
  return out;
}

LemmaReport verify_lemma(const std::string& name, const Json& params) {
  if (!params.is_object()) throw InvalidInput("params: expected a JSON object");
  for (const auto& [key, fn] : registry())
    if (key == name) return fn(params);
  std::string known;
  for (const auto& n : lemma_names()) known += (known.empty() ? "" : ", ") + n;
  throw InvalidInput("unknown lemma '" + name + "' (known: " + known + ")");
}

// ---------------------------------------------------------------------------
// Experiments
// ---------------------------------------------------------------------------

std::string to_string(ExperimentKind k) {
  switch (k) {
    case ExperimentKind::Profile: return "profile";
    case ExperimentKind::Hc: return "hc";
    case ExperimentKind::Member: return "member";
    case ExperimentKind::RatioSweep: return "ratio-sweep";
  }
  return "?";
}

std::vector<int> default_schedule(int max_degree) {
  std::vector<int> out;
  for (int m = 0; m <= std::min(max_degree, 2); ++m) out.push_back(m);
  for (int m = 4; m <= max_degree; m += 2) out.push_back(m);
  return out;
}

Json ExperimentSpec::to_json() const {
  Json j{{"name", name},
         {"anchor", anchor},
         {"kind", besov::to_string(kind)},
         {"space", space.to_json()},
         {"f", poly_to_json(f)},
         {"seed", seed},
         {"include_runtime", include_runtime},
         {"budget_seconds", budget_seconds}};
  if (h) j["h"] = poly_to_json(*h);
  switch (kind) {
    case ExperimentKind::Profile: j["degrees"] = degrees; break;
    case ExperimentKind::Hc: j["degrees"] = degrees; j["n"] = n; break;
    case ExperimentKind::Member: j["degrees"] = degrees; j["k"] = k; break;
    case ExperimentKind::RatioSweep:
      j["s"] = s;
      j["k"] = k;
      j["r_grid"] = r_grid;
      j["M_grid"] = M_grid;
      break;
  }
  if (certificate) j["certificate"] = *certificate;
  if (!output_dir.empty()) j["output_dir"] = output_dir;
  return j;
}

ExperimentSpec ExperimentSpec::from_json(const Json& j) {
  const std::string path = "spec";
  if (!j.is_object()) throw InvalidInput("spec: expected a JSON object");
  ExperimentSpec s;
  if (!j.contains("name")) throw InvalidInput("spec.name: missing");
  s.name = param<std::string>(j, "name", "", path);
  if (s.name.empty() || s.name.find('/') != std::string::npos)
    throw InvalidInput("spec.name: must be a non-empty file-name-safe string");
  s.anchor = param<std::string>(j, "anchor", "", path);
  const auto kind = param<std::string>(j, "kind", "profile", path);
  if (kind == "profile") s.kind = ExperimentKind::Profile;
  else if (kind == "hc") s.kind = ExperimentKind::Hc;
  else if (kind == "member") s.kind = ExperimentKind::Member;
  else if (kind == "ratio-sweep") s.kind = ExperimentKind::RatioSweep;
  else throw InvalidInput("spec.kind: expected profile, hc, member or ratio-sweep, got '" + kind + "'");
  if (!j.contains("space")) throw InvalidInput("spec.space: missing");
  try {
    s.space = SpaceSpec::from_json(j.at("space"));
  } catch (const InvalidInput& e) {
    throw InvalidInput(std::string("spec.") + e.what());
  }
  if (!j.contains("f")) throw InvalidInput("spec.f: missing");
  s.f = poly_param(j, "f", ExactPoly(static_cast<std::size_t>(s.space.dimension())), path);
  if (static_cast<int>(s.f.dimension()) != s.space.dimension())
    throw InvalidInput("spec.f: dimension " + std::to_string(s.f.dimension()) + " does not match space dimension " +
                       std::to_string(s.space.dimension()));
  if (j.contains("h")) {
    s.h = poly_param(j, "h", ExactPoly(static_cast<std::size_t>(s.space.dimension())), path);
    if (static_cast<int>(s.h->dimension()) != s.space.dimension()) throw InvalidInput("spec.h: dimension mismatch");
  }
  s.n = param(j, "n", 1, path);
  s.k = param(j, "k", 1, path);
  s.s = param(j, "s", 1, path);
  if (j.contains("degrees") && j.at("degrees").is_object()) {
    s.degrees = default_schedule(param(j.at("degrees"), "max", 0, path + ".degrees"));
  } else {
    s.degrees = param<std::vector<int>>(j, "degrees", {}, path);
  }
  for (int m : s.degrees)
    if (m < 0) throw InvalidInput("spec.degrees: degrees must be non-negative");
  s.r_grid = param<std::vector<double>>(j, "r_grid", {}, path);
  s.M_grid = param<std::vector<int>>(j, "M_grid", {}, path);
  if (j.contains("certificate")) {
    const Json& c = j.at("certificate");
    if (!c.is_object() || !c.contains("type")) throw InvalidInput("spec.certificate.type: missing");
    const auto type = c.at("type");
    if (type != "energy" && type != "dual") throw InvalidInput("spec.certificate.type: expected energy or dual");
    if (type == "energy") {
      if (!c.contains("measure")) throw InvalidInput("spec.certificate.measure: missing");
      try {
        (void)CubeMeasure::from_json(c.at("measure"));
      } catch (const InvalidInput& e) {
        throw InvalidInput(std::string("spec.certificate.measure: ") + e.what());
      }
    }
    s.certificate = c;
  }
  s.seed = param<std::uint64_t>(j, "seed", 1, path);
  s.include_runtime = param(j, "include_runtime", false, path);
  s.budget_seconds = param(j, "budget_seconds", 0.0, path);
  s.output_dir = param<std::string>(j, "output_dir", "", path);
  if (s.kind == ExperimentKind::Member && !s.h) throw InvalidInput("spec.h: required for kind 'member'");
  if (s.kind == ExperimentKind::Hc && s.n < 0) throw InvalidInput("spec.n: must be >= 0");
  if (s.kind == ExperimentKind::Member && s.k < 1) throw InvalidInput("spec.k: must be >= 1");
  if (s.kind == ExperimentKind::RatioSweep && s.r_grid.empty()) throw InvalidInput("spec.r_grid: required for ratio-sweep");
  return s;
}

namespace {

ExactPoly one(int d) { return ExactPoly::constant(d, GaussianRational(1)); }

ExactPoly monomial_generator(int d, long c) {
  std::vector<int> e(d, 1);
  return one(d) - ExactPoly::monomial(MultiIndex(std::move(e))) * GaussianRational(c);
}

}  // namespace

std::vector<std::string> builtin_names() {
  return {"da-cyclic-d2", "da-noncyclic-d4", "da-hc-d4", "c2-c1", "c2-c1-hc", "ratio-sweep"};
}

ExperimentSpec builtin_experiment(const std::string& name) {
  ExperimentSpec s;
  s.name = name;
  if (name == "da-cyclic-d2") {
    s.anchor = "Drury-Arveson space H^2_2: 1 - 2 z1 z2 is cyclic although its zero set meets the sphere";
    s.space = SpaceSpec::drury_arveson(2);
    s.f = monomial_generator(2, 2);
    s.degrees = default_schedule(24);
  } else if (name == "da-noncyclic-d4") {
    s.anchor = "H^2_4: the zero set of 1 - 16 z1 z2 z3 z4 on the sphere contains a 3-dimensional torus, "
               "so a finite-energy measure on it certifies non-cyclicity";
    s.space = SpaceSpec::drury_arveson(4);
    s.f = monomial_generator(4, 16);
    s.degrees = default_schedule(12);
    s.certificate = Json{{"type", "energy"},
                         {"measure", CubeMeasure{CubeParametrization::torus(4, 4), 1.0, 8}.to_json()}};
  } else if (name == "da-hc-d4") {
    s.anchor = "H^2_4: stable polynomials in even dimension d lie in HC_(d/2 - 1); here dist(f, [f^2]) -> 0";
    s.kind = ExperimentKind::Hc;
    s.space = SpaceSpec::drury_arveson(4);
    s.f = monomial_generator(4, 16);
    s.n = 1;
    s.degrees = default_schedule(12);
  } else if (name == "c2-c1") {
    s.anchor = "D_4 of the disc: 1 - z is not in [(1 - z)^2], certified by evaluation of the first derivative at 1";
    s.kind = ExperimentKind::Member;
    s.space = SpaceSpec::alpha_scale(1, 4.0);
    s.f = one_minus_lambda();
    s.h = one_minus_lambda();
    s.k = 2;
    s.degrees = default_schedule(40);
    s.certificate = Json{{"type", "dual"}, {"j", 1}};
  } else if (name == "c2-c1-hc") {
    s.anchor = "D_4 of the disc: 1 - z belongs to HC_2, i.e. (1 - z)^2 lies in [(1 - z)^3]";
    s.kind = ExperimentKind::Hc;
    s.space = SpaceSpec::alpha_scale(1, 4.0);
    s.f = one_minus_lambda();
    s.n = 2;
    s.degrees = default_schedule(40);
  } else if (name == "ratio-sweep") {
    s.anchor = "norms of p^(s+k) / p_r^s in B^1_sigma (d = 3) stay bounded as r -> 1";
    s.kind = ExperimentKind::RatioSweep;
    s.space = SpaceSpec::besov(3, 1, PointMassAtOne{});
    s.f = one(3) - ExactPoly::variable(3, 0);
    s.s = 1;
    s.k = 1;
    s.r_grid = {0.9, 0.99, 0.999};
  } else {
    std::string known;
    for (const auto& n : builtin_names()) known += (known.empty() ? "" : ", ") + n;
    throw InvalidInput("unknown builtin experiment '" + name + "' (known: " + known + ")");
  }
  return s;
}

namespace {

std::string num(double v) {
  if (std::isnan(v)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

using ProfileFn = std::function<std::vector<ProfilePoint>(const std::vector<int>&)>;

// Runs the degrees in ascending batches so that a wall-clock budget can stop
// the schedule between batches.
std::vector<ProfilePoint> run_schedule(const ProfileFn& fn, std::vector<int> degrees, double budget_seconds,
                                       bool* truncated) {
  *truncated = false;
  std::sort(degrees.begin(), degrees.end());
  degrees.erase(std::unique(degrees.begin(), degrees.end()), degrees.end());
  if (budget_seconds <= 0.0) return fn(degrees);
  const auto start = std::chrono::steady_clock::now();
  const std::size_t batch = std::max(1u, thread_budget());
  std::vector<ProfilePoint> out;
  for (std::size_t i = 0; i < degrees.size(); i += batch) {
    const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (elapsed > budget_seconds) {
      *truncated = true;
      break;
    }
    std::vector<int> part(degrees.begin() + i, degrees.begin() + std::min(degrees.size(), i + batch));
    auto pts = fn(part);
    out.insert(out.end(), pts.begin(), pts.end());
  }
  return out;
}

ExactPoly power(const ExactPoly& f, int n) {
  ExactPoly out = ExactPoly::constant(f.dimension(), GaussianRational(1));
  for (int i = 0; i < n; ++i) out = out * f;
  return out;
}

}  // namespace

ExperimentResult run_experiment(const ExperimentSpec& spec) {
  const auto start = std::chrono::steady_clock::now();
  ExperimentResult res;
  Json checks = Json::object();
  Json manifest{{"name", spec.name},
                {"anchor", spec.anchor},
                {"kind", to_string(spec.kind)},
                {"library_version", library_version()},
                {"spec", spec.to_json()},
                {"threads", thread_budget()},
                {"basis_ordering", std::string(kBasisOrdering)},
                {"scope", "distances are to the span of polynomial multiples; certificates bound them from below"}};
  std::ostringstream csv;

  if (spec.kind == ExperimentKind::RatioSweep) {
    csv << "r,M,norm_sq,last_block_rel,tail_rel,accepted\n";
    const auto sweep = ratio_norm_sweep(spec.space, to_float(spec.f), spec.s, spec.k, spec.r_grid, spec.M_grid);
    for (const auto& row : sweep.rows)
      csv << num(row.r) << ',' << row.M << ',' << num(row.norm_sq) << ',' << num(row.last_block_rel) << ','
          << num(row.tail_rel) << ',' << (row.accepted ? 1 : 0) << '\n';
    Json acc = Json::array();
    for (const auto& row : sweep.accepted) acc.push_back(Json{{"r", row.r}, {"M", row.M}, {"norm_sq", row.norm_sq}});
    manifest["accepted"] = acc;
    manifest["sup_norm_sq"] = sweep.sup_norm_sq;
    checks["all_converged"] = sweep.all_converged;
  } else {
    ExactPoly target = one(spec.space.dimension());
    ExactPoly generator = spec.f;
    ProfileFn fn;
    switch (spec.kind) {
      case ExperimentKind::Profile:
        fn = [&](const std::vector<int>& d) { return cyclicity_profile(spec.space, spec.f, d); };
        break;
      case ExperimentKind::Hc:
        target = power(spec.f, spec.n);
        generator = power(spec.f, spec.n + 1);
        fn = [&](const std::vector<int>& d) { return hc_profile(spec.space, spec.f, spec.n, d).points; };
        break;
      case ExperimentKind::Member:
        target = *spec.h;
        generator = power(spec.f, spec.k);
        fn = [&](const std::vector<int>& d) { return membership_profile(spec.space, *spec.h, spec.f, spec.k, d); };
        break;
      default: break;
    }

    std::optional<Certificate> cert;
    if (spec.certificate) {
      const Json& c = *spec.certificate;
      if (c.at("type") == "energy") {
        cert = energy_lower_bound(spec.space, to_float(generator), CubeMeasure::from_json(c.at("measure")));
      } else {
        cert = dual_lower_bound(spec.space, target, generator, param(c, "j", 0, "spec.certificate"));
      }
      manifest["certificate"] = cert->to_json();
      manifest["certificate_note"] =
          "the bound holds for every degree; it bounds the distance to polynomial multiples only";
      checks["certificate_verified"] = verify_certificate(*cert);
    }

    bool truncated = false;
    const auto points = run_schedule(fn, spec.degrees, spec.budget_seconds, &truncated);
    manifest["budget_truncated"] = truncated;

    csv << "m,dist_sq,min_pivot" << (spec.include_runtime ? ",runtime_ms" : "") << '\n';
    Json solves = Json::array();
    Json timings = Json::array();
    bool nonincreasing = true, above = true;
    double prev = std::numeric_limits<double>::infinity();
    for (const auto& pt : points) {
      csv << pt.m << ',' << num(pt.dist_sq) << ',' << num(pt.report.min_pivot);
      if (spec.include_runtime) csv << ',' << num(pt.runtime_ms);
      csv << '\n';
      solves.push_back(Json{{"m", pt.m},
                            {"precision", to_string(pt.report.precision)},
                            {"flagged", pt.report.flagged},
                            {"pivot_ratio", pt.report.pivot_ratio},
                            {"system_size", pt.report.system_size},
                            {"largest_block", pt.report.largest_block},
                            {"exact", pt.dist_sq_exact.has_value()}});
      timings.push_back(Json{{"m", pt.m}, {"runtime_ms", pt.runtime_ms}});
      if (pt.dist_sq > prev * (1 + 1e-12) + 1e-300) nonincreasing = false;
      prev = pt.dist_sq;
      if (cert && std::sqrt(std::max(pt.dist_sq, 0.0)) < cert->lower_bound - 1e-6) above = false;
    }
    manifest["solves"] = solves;
    manifest["timings_per_degree"] = timings;
    checks["nonincreasing"] = nonincreasing;
    if (cert) checks["distances_above_certificate"] = above;
  }

  for (const auto& [key, value] : checks.items()) res.passed = res.passed && value.get<bool>();
  manifest["checks"] = checks;
  manifest["passed"] = res.passed;
  manifest["total_ms"] = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  res.csv = csv.str();

  if (!spec.output_dir.empty()) {
    namespace fs = std::filesystem;
    fs::create_directories(spec.output_dir);
    const fs::path csv_path = fs::path(spec.output_dir) / (spec.name + ".csv");
    const fs::path man_path = fs::path(spec.output_dir) / (spec.name + ".manifest.json");
    manifest["outputs"] = Json{{"csv", csv_path.string()}, {"manifest", man_path.string()}};
    std::ofstream(csv_path, std::ios::binary) << res.csv;
    std::ofstream(man_path) << manifest.dump(2) << '\n';
  }
  res.manifest = std::move(manifest);
  return res;
}

}  // namespace besov
