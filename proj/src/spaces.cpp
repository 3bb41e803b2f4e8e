#include "besov/spaces.hpp"

#include <cmath>
#include <mutex>
#include <sstream>

#include <gsl/gsl_integration.h>

namespace besov {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

bool is_integral(double x) { return std::isfinite(x) && x == std::floor(x) && std::abs(x) < 1e6; }

// (d-1)! n! / (n+d-1)! = 1 / C(n+d-1, d-1)
Rational sphere_factor_exact(int n, int d) {
  BigInt b;
  mpz_bin_uiui(b.get_mpz_t(), static_cast<unsigned long>(n + d - 1), static_cast<unsigned long>(d - 1));
  return make_rational(BigInt(1), b);
}

double sphere_factor(int n, int d) {
  double r = 1.0;
  for (int i = 1; i <= d - 1; ++i) r *= static_cast<double>(i) / static_cast<double>(n + i);
  return r;
}

Rational int_power(const Rational& base, int e) {
  Rational r(1);
  if (e >= 0) {
    mpz_pow_ui(r.get_num_mpz_t(), base.get_num_mpz_t(), static_cast<unsigned long>(e));
    mpz_pow_ui(r.get_den_mpz_t(), base.get_den_mpz_t(), static_cast<unsigned long>(e));
  } else {
    mpz_pow_ui(r.get_num_mpz_t(), base.get_den_mpz_t(), static_cast<unsigned long>(-e));
    mpz_pow_ui(r.get_den_mpz_t(), base.get_num_mpz_t(), static_cast<unsigned long>(-e));
  }
  r.canonicalize();
  return r;
}

std::optional<Rational> weight_exact_uncached(int d, const std::variant<BesovKind, AlphaKind>& kind, int n) {
  return std::visit(overloaded{[&](const BesovKind& b) -> std::optional<Rational> {
                                 auto m = moment_exact(b.measure, n, d);
                                 if (!m) return std::nullopt;
                                 if (b.N >= 1 && n == 0) return moment_exact(b.measure, 0, d);
                                 Rational w = sphere_factor_exact(n, d) * *m;
                                 return Rational(w * int_power(Rational(n), 2 * b.N));
                               },
                               [&](const AlphaKind& a) -> std::optional<Rational> {
                                 if (!is_integral(a.alpha)) return std::nullopt;
                                 return int_power(Rational(n + 1), static_cast<int>(a.alpha));
                               }},
                    kind);
}

double weight_float_uncached(int d, const std::variant<BesovKind, AlphaKind>& kind, int n) {
  return std::visit(overloaded{[&](const BesovKind& b) {
                                 if (b.N >= 1 && n == 0) return moment(b.measure, 0, d);
                                 return std::pow(static_cast<double>(n), 2 * b.N) * sphere_factor(n, d) *
                                        moment(b.measure, n, d);
                               },
                               [&](const AlphaKind& a) { return std::pow(static_cast<double>(n + 1), a.alpha); }},
                    kind);
}

Json measure_to_json(const RadialMeasure& mu) {
  return std::visit(overloaded{[](const PointMassAtOne&) { return Json{{"type", "point_mass"}}; },
                               [](const NormalizedVolume&) { return Json{{"type", "volume"}}; },
                               [](const ConstantDensity& c) {
                                 return Json{{"type", "constant"},
                                             {"c", {c.c.get_num().get_str(), c.c.get_den().get_str()}}};
                               },
                               [](const PowerDensity& p) { return Json{{"type", "power"}, {"beta", p.beta}}; },
                               [](const GeneralQuadrature& q) {
                                 return Json{{"type", "quadrature"}, {"nodes", q.nodes}, {"weights", q.weights}};
                               }},
                    mu);
}

RadialMeasure measure_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("type")) throw InvalidInput("measure: expected an object with a 'type' field");
  const std::string type = j.at("type").get<std::string>();
  if (type == "point_mass") return PointMassAtOne{};
  if (type == "volume") return NormalizedVolume{};
  if (type == "constant") {
    if (!j.contains("c")) return ConstantDensity{};
    const Json& c = j.at("c");
    auto part = [](const Json& v) {
      return v.is_string() ? BigInt(v.get<std::string>()) : BigInt(std::to_string(v.get<std::int64_t>()));
    };
    if (!c.is_array() || c.size() != 2) throw InvalidInput("measure.c: expected [num, den]");
    return ConstantDensity{make_rational(part(c[0]), part(c[1]))};
  }
  if (type == "power") return PowerDensity{j.at("beta").get<double>()};
  if (type == "quadrature")
    return GeneralQuadrature{j.at("nodes").get<std::vector<double>>(), j.at("weights").get<std::vector<double>>()};
  throw InvalidInput("measure.type: unknown measure '" + type + "'");
}

std::string measure_name(const RadialMeasure& mu) {
  return std::visit(overloaded{[](const PointMassAtOne&) { return std::string("sigma"); },
                               [](const NormalizedVolume&) { return std::string("V"); },
                               [](const ConstantDensity& c) { return "const(" + c.c.get_str() + ")"; },
                               [](const PowerDensity& p) {
                                 std::ostringstream s;
                                 s << "(1-r)^" << p.beta;
                                 return s.str();
                               },
                               [](const GeneralQuadrature& q) {
                                 return "quadrature[" + std::to_string(q.nodes.size()) + "]";
                               }},
                    mu);
}

}  // namespace

GeneralQuadrature GeneralQuadrature::from_density(const std::function<double(double)>& u, int nodes) {
  if (nodes < 2) throw InvalidInput("quadrature needs at least two nodes");
  gsl_integration_glfixed_table* table = gsl_integration_glfixed_table_alloc(static_cast<std::size_t>(nodes));
  GeneralQuadrature q;
  for (int i = 0; i < nodes; ++i) {
    double x = 0.0, w = 0.0;
    gsl_integration_glfixed_point(0.0, 1.0, static_cast<std::size_t>(i), &x, &w, table);
    q.nodes.push_back(x);
    q.weights.push_back(w * u(x) * 2.0 * x);
  }
  gsl_integration_glfixed_table_free(table);
  return q;
}

void check_admissible(const RadialMeasure& mu) {
  std::visit(overloaded{[](const PointMassAtOne&) {}, [](const NormalizedVolume&) {},
                        [](const ConstantDensity& c) {
                          if (sgn(c.c) <= 0) throw InvalidInput("constant density must be positive");
                        },
                        [](const PowerDensity& p) {
                          if (!(p.beta > -1.0)) throw InvalidInput("power density needs beta > -1");
                        },
                        [](const GeneralQuadrature& q) {
                          if (q.nodes.size() != q.weights.size() || q.nodes.empty())
                            throw InvalidInput("quadrature nodes and weights must have equal non-zero length");
                          double near_one = 0.0;
                          for (std::size_t i = 0; i < q.nodes.size(); ++i) {
                            if (q.nodes[i] < 0.0 || q.nodes[i] > 1.0 || q.weights[i] < 0.0)
                              throw InvalidInput("quadrature needs nodes in [0,1] and non-negative weights");
                            if (q.nodes[i] > 0.99) near_one += q.weights[i];
                          }
                          if (!(near_one > 0.0))
                            throw InvalidInput("quadrature measure is not admissible: no mass near r = 1");
                        }},
             mu);
}

std::optional<Rational> moment_exact(const RadialMeasure& mu, int n, int d) {
  if (n < 0) throw InvalidInput("moment order must be non-negative");
  return std::visit(
      overloaded{[](const PointMassAtOne&) -> std::optional<Rational> { return Rational(1); },
                 [&](const NormalizedVolume&) -> std::optional<Rational> { return make_rational(d, n + d); },
                 [&](const ConstantDensity& c) -> std::optional<Rational> {
                   return Rational(c.c * make_rational(1, n + 1));
                 },
                 [&](const PowerDensity& p) -> std::optional<Rational> {
                   if (!is_integral(p.beta) || p.beta < 0) return std::nullopt;
                   // 2 B(2n+2, beta+1) = 2 (2n+1)! beta! / (2n+beta+2)!
                   const long beta = static_cast<long>(p.beta);
                   BigInt den = 1;
                   for (long i = 1; i <= beta + 1; ++i) den *= BigInt(2L * n + 1 + i);
                   return make_rational(BigInt(2) * factorial(static_cast<unsigned>(beta)), den);
                 },
                 [](const GeneralQuadrature&) -> std::optional<Rational> { return std::nullopt; }},
      mu);
}

double moment(const RadialMeasure& mu, int n, int d) {
  if (auto* q = std::get_if<GeneralQuadrature>(&mu)) {
    long double s = 0.0L;
    for (std::size_t i = 0; i < q->nodes.size(); ++i)
      s += static_cast<long double>(q->weights[i]) * std::pow(static_cast<long double>(q->nodes[i]), 2 * n);
    return static_cast<double>(s);
  }
  if (auto* p = std::get_if<PowerDensity>(&mu); p && !(is_integral(p->beta) && p->beta >= 0)) {
    const double a = 2.0 * n + 2.0, b = p->beta + 1.0;
    return 2.0 * std::exp(std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b));
  }
  return moment_exact(mu, n, d)->get_d();
}

namespace detail {
struct WeightCache {
  std::mutex mutex;
  std::shared_ptr<const WeightSequence> seq;
};
}  // namespace detail

SpaceSpec::SpaceSpec(int dimension, BesovKind kind)
    : d_(dimension), kind_(std::move(kind)), cache_(std::make_shared<detail::WeightCache>()) {
  if (d_ < 1) throw InvalidInput("space dimension must be >= 1");
  const auto& b = std::get<BesovKind>(kind_);
  if (b.N < 0) throw InvalidInput("Besov order N must be >= 0");
  check_admissible(b.measure);
}

SpaceSpec::SpaceSpec(int dimension, AlphaKind kind)
    : d_(dimension), kind_(kind), cache_(std::make_shared<detail::WeightCache>()) {
  if (d_ < 1) throw InvalidInput("space dimension must be >= 1");
  if (!std::isfinite(kind.alpha)) throw InvalidInput("alpha must be finite");
}

SpaceSpec SpaceSpec::alpha_via_measure(int d, double alpha) {
  // D_alpha = B^N_{omega_(alpha-2N)} once alpha - 2N <= -d + 1.
  int N = std::max(0, static_cast<int>(std::ceil((alpha + d - 1) / 2.0)));
  const double a = alpha - 2.0 * N;
  if (a == -d + 1.0) return besov(d, N, PointMassAtOne{});
  return besov(d, N, PowerDensity{-(a + d)});
}

bool SpaceSpec::has_exact_weights() const { return weight_exact_uncached(d_, kind_, 1).has_value(); }

std::shared_ptr<const WeightSequence> SpaceSpec::weights(int max_degree) const {
  if (max_degree < 0) max_degree = 0;
  std::lock_guard lock(cache_->mutex);
  if (cache_->seq && cache_->seq->truncation() >= max_degree) return cache_->seq;
  const int old = cache_->seq ? cache_->seq->truncation() : -1;
  const int target = std::max(max_degree, 2 * old + 1);
  auto seq = std::make_shared<WeightSequence>();
  seq->values.resize(static_cast<std::size_t>(target) + 1);
  const bool exact = has_exact_weights();
  if (exact) seq->exact.resize(static_cast<std::size_t>(target) + 1);
  for (int n = 0; n <= target; ++n) {
    if (n <= old) {
      seq->values[n] = cache_->seq->values[n];
      if (exact) seq->exact[n] = cache_->seq->exact[n];
      continue;
    }
    if (exact) {
      seq->exact[n] = *weight_exact_uncached(d_, kind_, n);
      seq->values[n] = seq->exact[n].get_d();
    } else {
      seq->values[n] = weight_float_uncached(d_, kind_, n);
    }
    if (!(seq->values[n] > 0.0) && !(exact && sgn(seq->exact[n]) > 0))
      throw InvalidInput("space weight W_" + std::to_string(n) + " is not positive");
  }
  cache_->seq = seq;
  return seq;
}

std::string SpaceSpec::describe() const {
  std::ostringstream s;
  std::visit(overloaded{[&](const BesovKind& b) { s << "B^" << b.N << "_" << measure_name(b.measure); },
                        [&](const AlphaKind& a) { s << "D_" << a.alpha; }},
             kind_);
  s << "(B_" << d_ << ")";
  return s.str();
}

Json SpaceSpec::to_json() const {
  Json j{{"d", d_}};
  std::visit(overloaded{[&](const BesovKind& b) {
                          j["kind"] = "besov";
                          j["N"] = b.N;
                          j["measure"] = measure_to_json(b.measure);
                        },
                        [&](const AlphaKind& a) {
                          j["kind"] = "alpha";
                          j["alpha"] = a.alpha;
                        }},
             kind_);
  return j;
}

SpaceSpec SpaceSpec::from_json(const Json& j) {
  try {
    if (!j.is_object()) throw InvalidInput("space: expected a JSON object");
    if (!j.contains("d")) throw InvalidInput("space.d: missing");
    const int d = j.at("d").get<int>();
    const std::string kind = j.value("kind", std::string("alpha"));
    if (kind == "besov") {
      if (!j.contains("N")) throw InvalidInput("space.N: missing for kind 'besov'");
      RadialMeasure mu = j.contains("measure") ? measure_from_json(j.at("measure")) : RadialMeasure{PointMassAtOne{}};
      return besov(d, j.at("N").get<int>(), std::move(mu));
    }
    if (kind == "alpha") return alpha_scale(d, j.value("alpha", 0.0));
    throw InvalidInput("space.kind: expected 'besov' or 'alpha', got '" + kind + "'");
  } catch (const Json::exception& e) {
    throw InvalidInput(std::string("space: ") + e.what());
  }
}

double weight(const SpaceSpec& space, int n) { return space.weights(n)->values[n]; }

Rational weight_exact(const SpaceSpec& space, int n) {
  auto w = space.weights(n);
  if (!w->is_exact()) throw NotExact("space " + space.describe() + " has no exact weights");
  return w->exact[n];
}

double monomial_norm_sq(const SpaceSpec& space, const MultiIndex& beta) {
  return weight(space, beta.degree()) * factorial_ratio_double(beta);
}

Rational monomial_norm_sq_exact(const SpaceSpec& space, const MultiIndex& beta) {
  return Rational(weight_exact(space, beta.degree()) * factorial_ratio(beta));
}

namespace {

template <class C, class Term>
void merge_walk(const SparsePoly<C>& f, const SparsePoly<C>& g, Term&& term) {
  auto a = f.terms().begin();
  auto b = g.terms().begin();
  while (a != f.terms().end() && b != g.terms().end()) {
    auto c = a->first <=> b->first;
    if (c < 0) {
      ++a;
    } else if (c > 0) {
      ++b;
    } else {
      term(a->first, a->second, b->second);
      ++a;
      ++b;
    }
  }
}

void check_dims(const SpaceSpec& space, std::size_t fd, std::size_t gd) {
  if (static_cast<int>(fd) != space.dimension() || static_cast<int>(gd) != space.dimension())
    throw InvalidInput("polynomial dimension does not match space dimension");
}

}  // namespace

GaussianRational inner_product(const SpaceSpec& space, const ExactPoly& f, const ExactPoly& g) {
  check_dims(space, f.dimension(), g.dimension());
  auto w = space.weights(std::max(f.degree(), 0));
  if (!w->is_exact()) throw NotExact("space " + space.describe() + " has no exact weights");
  GaussianRational sum;
  merge_walk(f, g, [&](const MultiIndex& beta, const GaussianRational& a, const GaussianRational& b) {
    sum += a * conj(b) * GaussianRational(Rational(w->exact[beta.degree()] * factorial_ratio(beta)));
  });
  return sum;
}

Complex inner_product(const SpaceSpec& space, const FloatPoly& f, const FloatPoly& g) {
  check_dims(space, f.dimension(), g.dimension());
  auto w = space.weights(std::max(f.degree(), 0));
  std::complex<long double> sum = 0.0L;
  merge_walk(f, g, [&](const MultiIndex& beta, const Complex& a, const Complex& b) {
    const Complex t = a * std::conj(b) * (w->values[beta.degree()] * factorial_ratio_double(beta));
    sum += std::complex<long double>(t.real(), t.imag());
  });
  return {static_cast<double>(sum.real()), static_cast<double>(sum.imag())};
}

Rational norm_sq(const SpaceSpec& space, const ExactPoly& f) { return inner_product(space, f, f).re; }

double norm_sq(const SpaceSpec& space, const FloatPoly& f) { return inner_product(space, f, f).real(); }

Rational hardy_sphere_norm_sq(const ExactPoly& fn) {
  if (!fn.is_homogeneous()) throw InvalidInput("hardy_sphere_norm_sq needs a homogeneous polynomial");
  if (fn.is_zero()) return Rational(0);
  const int d = static_cast<int>(fn.dimension());
  const int n = fn.degree();
  Rational da = norm_sq(SpaceSpec::drury_arveson(d), fn);
  return Rational(sphere_factor_exact(n, d) * da);
}

std::vector<Rational> besov_da_ratio(int d, int max_degree) {
  if (d < 1 || d % 2 == 0) throw InvalidInput("besov_da_ratio needs odd d");
  SpaceSpec space = SpaceSpec::besov(d, (d - 1) / 2, PointMassAtOne{});
  auto w = space.weights(max_degree);
  return {w->exact.begin(), w->exact.begin() + max_degree + 1};
}

}  // namespace besov
