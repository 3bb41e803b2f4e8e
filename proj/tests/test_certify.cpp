#include <doctest.h>

#include <cmath>
#include <numbers>

#include "besov/approx.hpp"
#include "besov/certify.hpp"
#include "generators.hpp"

using namespace besov;

namespace {

ExactPoly lam() { return ExactPoly::variable(1, 0); }
ExactPoly one(int d = 1) { return ExactPoly::constant(d, GaussianRational(1)); }

ExactPoly da4_generator() {
  return one(4) - ExactPoly::monomial(MultiIndex{1, 1, 1, 1}) * GaussianRational(16);
}

// 2^m times the orthant integral of prod (2 - u_k) / |u|^2 over [0,2]^m, in
// hyperspherical coordinates with the radial part integrated in closed form.
double cube_integral_oracle(int m, int n) {
  auto radial = [m](const std::vector<double>& w) {
    double wmax = 0.0;
    for (double x : w) wmax = std::max(wmax, x);
    const double R = 2.0 / wmax;
    std::vector<double> c{1.0};
    for (double x : w) {
      std::vector<double> nc(c.size() + 1, 0.0);
      for (std::size_t i = 0; i < c.size(); ++i) {
        nc[i] += 2.0 * c[i];
        nc[i + 1] -= x * c[i];
      }
      c = nc;
    }
    double s = 0.0;
    for (std::size_t i = 0; i < c.size(); ++i) s += c[i] * std::pow(R, i + m - 2) / (i + m - 2);
    return s;
  };
  const double h = std::numbers::pi / 2 / n;
  double total = 0.0;
  if (m == 3) {
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) {
        const double th = (a + 0.5) * h, ph = (b + 0.5) * h;
        total += radial({std::sin(th) * std::cos(ph), std::sin(th) * std::sin(ph), std::cos(th)}) * std::sin(th);
      }
  } else {
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        for (int c = 0; c < n; ++c) {
          const double ps = (a + 0.5) * h, th = (b + 0.5) * h, ph = (c + 0.5) * h;
          const double s = std::sin(ps);
          total += radial({s * std::sin(th) * std::cos(ph), s * std::sin(th) * std::sin(ph), s * std::cos(th),
                           std::cos(ps)}) *
                   s * s * std::sin(th);
        }
  }
  return std::pow(2.0, m) * total * std::pow(h, m - 1);
}

bool contains(const Bracket& b, double v) { return b.lower <= v && v <= b.upper; }

}  // namespace

TEST_CASE("functional norms against zeta values") {
  auto b0 = functional_norm_sq(0, 4.0);
  CHECK(contains(b0, std::pow(std::numbers::pi, 4) / 90));
  CHECK(b0.rel_width() < 1e-8);

  auto b1 = functional_norm_sq(1, 4.0);
  const double z1 = std::riemann_zeta(2.0) - 2 * std::riemann_zeta(3.0) + std::riemann_zeta(4.0);
  CHECK(contains(b1, z1));
  CHECK(b1.rel_width() < 1e-8);

  // sum_(x >= 1) (x - 1)^2 (x - 2)^2 / x^a for non-integer a
  const double a = 6.5;
  auto z = [](double s) { return std::riemann_zeta(s); };
  const double z2 = z(a - 4) - 6 * z(a - 3) + 13 * z(a - 2) - 12 * z(a - 1) + 4 * z(a);
  auto b2 = functional_norm_sq(2, a);
  CHECK(b2.lower <= z2 * (1 + 1e-12));
  CHECK(b2.upper >= z2 * (1 - 1e-12));
  CHECK(b2.rel_width() < 1e-8);

  // close to the divergence threshold the tail dominates
  auto near = functional_norm_sq(1, 3.3);
  const double zn = z(1.3) - 2 * z(2.3) + z(3.3);
  CHECK(near.lower <= zn * (1 + 1e-12));
  CHECK(near.upper >= zn * (1 - 1e-12));
}

TEST_CASE("functional norm rejects the divergent range") {
  CHECK_THROWS_AS(functional_norm_sq(1, 3.0), InvalidInput);
  CHECK_THROWS_AS(functional_norm_sq(0, 1.0), InvalidInput);
  CHECK_THROWS_AS(functional_norm_sq(2, 4.9), InvalidInput);
}

TEST_CASE("derivatives and zero orders at 1") {
  auto h = (one() - lam()) * (one() - lam());
  CHECK(zero_order_at_one(h) == 2);
  CHECK(zero_order_at_one(one() - lam()) == 1);
  CHECK(zero_order_at_one(one() + lam()) == 0);
  CHECK(derivative_at_one(one() - lam(), 1) == GaussianRational(-1));
  CHECK(derivative_at_one(h, 2) == GaussianRational(2));
  CHECK_THROWS_AS(zero_order_at_one(ExactPoly(1)), InvalidInput);
}

TEST_CASE("dual certificate examples") {
  auto d4 = SpaceSpec::alpha_scale(1, 4.0);
  auto h = (one() - lam()) * (one() - lam());
  auto cert = dual_lower_bound(d4, one() - lam(), h, 1);
  CHECK(cert.kind == Certificate::Kind::DualFunctional);
  const double z1 = std::riemann_zeta(2.0) - 2 * std::riemann_zeta(3.0) + std::riemann_zeta(4.0);
  CHECK(cert.lower_bound == doctest::Approx(1 / std::sqrt(z1)).epsilon(1e-9));
  CHECK(cert.lower_bound <= 1 / std::sqrt(z1));
  CHECK(cert.audit.at("abs_L_j_g").get<double>() == 1.0);
  CHECK(verify_certificate(cert));
  CHECK(verify_certificate(Certificate::from_json(cert.to_json())));

  CHECK_THROWS_AS(dual_lower_bound(d4, h, h, 1), InvalidInput);

  auto c0 = dual_lower_bound(d4, one(), one() - lam(), 0);
  CHECK(c0.lower_bound == doctest::Approx(1 / std::sqrt(std::pow(std::numbers::pi, 4) / 90)).epsilon(1e-9));

  CHECK_THROWS_AS(dual_lower_bound(d4, one(), one() - lam(), 1), InvalidInput);
  CHECK_THROWS_AS(dual_lower_bound(SpaceSpec::alpha_scale(1, 3.0), one() - lam(), h, 1), InvalidInput);
  CHECK_THROWS_AS(dual_lower_bound(SpaceSpec::drury_arveson(2), one(2), one(2), 0), InvalidInput);
}

TEST_CASE("tampered certificates fail verification") {
  auto d4 = SpaceSpec::alpha_scale(1, 4.0);
  auto cert = dual_lower_bound(d4, one() - lam(), (one() - lam()) * (one() - lam()), 1);
  auto bad = cert;
  bad.lower_bound *= 1.01;
  CHECK_FALSE(verify_certificate(bad));
  bad = cert;
  bad.audit["h"] = poly_to_json(one() - lam());
  CHECK_FALSE(verify_certificate(bad));
}

TEST_CASE("property: dual functionals annihilate multiples of the generator") {
  auto d4 = SpaceSpec::alpha_scale(1, 4.0);
  for (int j = 0; j <= 2; ++j) {
    ExactPoly h = one();
    for (int i = 0; i <= j; ++i) h = h * (one() - lam());
    h = h * (one() + lam() * GaussianRational(make_rational(1, 3)));
    auto g = one() - lam();
    if (j == 0) g = one();
    if (j == 2) g = (one() - lam()) * (one() - lam()) + lam();
    auto cert = dual_lower_bound(SpaceSpec::alpha_scale(1, 2.0 * j + 2.0), g, h, j);
    for (int t = 0; t < 50; ++t) {
      auto p = gen::exact_poly(1, 10, gen::uniform_int(1, 8));
      const double v = std::abs(derivative_at_one(p * h, j).to_complex());
      CHECK(v < 1e-9);
    }
    CHECK(cert.lower_bound > 0);
  }
  (void)d4;
}

TEST_CASE("property: dual bound lies below computed distances") {
  auto d4 = SpaceSpec::alpha_scale(1, 4.0);
  auto h = (one() - lam()) * (one() - lam());
  auto cert = dual_lower_bound(d4, one() - lam(), h, 1);
  std::vector<int> degrees{0, 1, 2, 5, 10, 20, 40};
  auto prof = membership_profile(d4, one() - lam(), one() - lam(), 2, degrees);
  for (const auto& pt : prof) CHECK(std::sqrt(pt.dist_sq) >= cert.lower_bound - 1e-9);
}

TEST_CASE("singular cube integral against an independent oracle") {
  CHECK(cube_singular_integral(3) == doctest::Approx(cube_integral_oracle(3, 600)).epsilon(1e-4));
  CHECK(cube_singular_integral(4) == doctest::Approx(cube_integral_oracle(4, 120)).epsilon(1e-3));
  CHECK_THROWS_AS(cube_singular_integral(2), InvalidInput);
}

TEST_CASE("cube parametrizations land on the sphere") {
  for (auto phi : {CubeParametrization::torus(4, 4), CubeParametrization::sphere(4, 4),
                   CubeParametrization::torus(3, 5), CubeParametrization::sphere(5, 5, 0.5)}) {
    std::vector<Complex> z(phi.d());
    for (int t = 0; t < 200; ++t) {
      std::vector<double> s(phi.m());
      for (auto& x : s) x = gen::uniform(-1, 1);
      phi(s.data(), z.data());
      double n2 = 0;
      for (auto& zi : z) n2 += std::norm(zi);
      CHECK(std::abs(n2 - 1) < 1e-13);
    }
    auto back = CubeParametrization::from_json(phi.to_json());
    CHECK(back.m() == phi.m());
    CHECK(back.lipschitz_lower() == phi.lipschitz_lower());
  }
  CHECK_THROWS_AS(CubeParametrization::from_json(Json{{"type", "cone"}}), InvalidInput);
  CHECK_THROWS_AS(CubeParametrization::torus(1, 3), InvalidInput);
}

TEST_CASE("property: analytic reverse-Lipschitz constants hold on random pairs") {
  for (auto phi : {CubeParametrization::torus(4, 4), CubeParametrization::sphere(4, 4),
                   CubeParametrization::sphere(4, 4, 2.0), CubeParametrization::torus(5, 5)}) {
    const double c = *phi.lipschitz_lower();
    std::vector<Complex> a(phi.d()), b(phi.d());
    for (int t = 0; t < 5000; ++t) {
      std::vector<double> s(phi.m()), u(phi.m());
      double dt = 0;
      for (int k = 0; k < phi.m(); ++k) {
        s[k] = gen::uniform(-1, 1);
        u[k] = gen::uniform(-1, 1);
        dt += (s[k] - u[k]) * (s[k] - u[k]);
      }
      phi(s.data(), a.data());
      phi(u.data(), b.data());
      double dz = 0;
      for (int k = 0; k < phi.d(); ++k) dz += std::norm(a[k] - b[k]);
      CHECK(std::sqrt(dz) >= c * std::sqrt(dt) * (1 - 1e-12));
    }
    CHECK(reverse_lipschitz_grid(phi, 6) >= c);
  }
}

TEST_CASE("torus difference kernel matches the inner product") {
  auto phi = CubeParametrization::torus(4, 4);
  std::vector<Complex> a(4), b(4);
  for (int t = 0; t < 100; ++t) {
    std::vector<double> s(3), u(3), delta(3);
    for (int k = 0; k < 3; ++k) {
      s[k] = gen::uniform(-1, 1);
      u[k] = gen::uniform(-1, 1);
      delta[k] = s[k] - u[k];
    }
    phi(s.data(), a.data());
    phi(u.data(), b.data());
    Complex ip = 0;
    for (int k = 0; k < 4; ++k) ip += a[k] * std::conj(b[k]);
    CHECK(std::abs(ip - (*phi.difference_kernel())(delta.data())) < 1e-14);
  }
}

TEST_CASE("energy quadrature") {
  CubeMeasure mu{CubeParametrization::torus(4, 4), 1.0, 8};
  auto e = energy(mu);
  CHECK(e.converged);
  CHECK(e.rel_change < 0.02);
  CHECK(e.c_rigorous);
  CHECK(e.quadrature < e.upper_bound);
  CHECK(e.richardson < e.upper_bound);
  CHECK(e.upper_bound == doctest::Approx(2 * 4 * cube_singular_integral(3)));

  // bilinearity
  CubeMeasure twice{mu.phi, 2.0, 8};
  CHECK(energy_at(twice, 16) == doctest::Approx(4 * energy_at(mu, 16)).epsilon(1e-12));
  CHECK(energy(twice).upper_bound == doctest::Approx(4 * e.upper_bound));

  // the generic path agrees with the difference-kernel path
  auto plain = CubeParametrization::custom(
      "torus-plain", 3, 4, [phi = mu.phi](const double* t, Complex* out) { phi(t, out); }, 0.5);
  CHECK(energy_at(CubeMeasure{plain, 1.0, 8}, 8) == doctest::Approx(energy_at(mu, 8)).epsilon(1e-12));

  CHECK_THROWS_AS(energy(CubeMeasure{CubeParametrization::torus(3, 3), 1.0, 8}), InvalidInput);
  CHECK_THROWS_AS(energy_at(CubeMeasure{CubeParametrization::torus(2, 2), 1.0, 8}, 4), InvalidInput);
}

TEST_CASE("energy certificate for 1 - 16 z1 z2 z3 z4") {
  auto sp = SpaceSpec::drury_arveson(4);
  auto f = to_float(da4_generator());
  CubeMeasure mu{CubeParametrization::torus(4, 4), 1.0, 8};
  auto cert = energy_lower_bound(sp, f, mu);
  CHECK(cert.kind == Certificate::Kind::Energy);
  CHECK(cert.lower_bound > 0);
  CHECK(cert.audit.at("moment_max").get<double>() < 1e-8 * mu.total_mass());
  CHECK(cert.audit.at("energy_upper_2_over_c").get<double>() < cert.audit.at("energy_upper").get<double>());
  CHECK(verify_certificate(cert));
  CHECK(verify_certificate(Certificate::from_json(cert.to_json())));

  // homogeneity in the scale of the measure
  auto scaled = energy_lower_bound(sp, f, CubeMeasure{mu.phi, 3.0, 8});
  CHECK(scaled.lower_bound == doctest::Approx(cert.lower_bound).epsilon(1e-12));

  // the limiting distance is 1 / sum_n (4n)! / (256^n (n!)^4)
  double s = 0, t = 1;
  for (int n = 0; n < 4000; ++n) {
    s += t;
    const double k = 4.0 * n;
    t *= (k + 1) * (k + 2) * (k + 3) * (k + 4) / (256.0 * std::pow(n + 1.0, 4));
  }
  CHECK(cert.lower_bound * cert.lower_bound <= 1 / s);

  auto prof = cyclicity_profile(sp, da4_generator(), {0, 1, 2, 4, 6, 8});
  for (const auto& p : prof) CHECK(std::sqrt(p.dist_sq) >= cert.lower_bound - 1e-6);
}

TEST_CASE("energy certificate on the real sphere") {
  auto sp = SpaceSpec::drury_arveson(4);
  ExactPoly q = one(4);
  for (int i = 0; i < 4; ++i) q -= ExactPoly::variable(4, i) * ExactPoly::variable(4, i);
  EnergyCertificateOptions opts;
  opts.energy.max_nodes = 16;
  auto cert = energy_lower_bound(sp, to_float(q), CubeMeasure{CubeParametrization::sphere(4, 4), 1.0, 8}, opts);
  CHECK(cert.lower_bound > 0);
  CHECK(verify_certificate(cert));
  auto prof = cyclicity_profile(sp, q, {0, 1, 2, 3, 4});
  for (const auto& p : prof) CHECK(std::sqrt(p.dist_sq) >= cert.lower_bound - 1e-6);
}

TEST_CASE("energy certificate rejects measures off the zero set") {
  auto sp = SpaceSpec::drury_arveson(4);
  CubeMeasure mu{CubeParametrization::torus(4, 4), 1.0, 8};
  CHECK_THROWS_AS(energy_lower_bound(sp, to_float(one(4) - ExactPoly::variable(4, 0)), mu), InvalidInput);
  CHECK_THROWS_AS(energy_lower_bound(SpaceSpec::hardy_sphere(4), to_float(da4_generator()), mu), InvalidInput);
  auto bad = CubeParametrization::custom("off-sphere", 3, 4, [](const double* t, Complex* out) {
    for (int i = 0; i < 3; ++i) out[i] = 0.5 * t[i];
    out[3] = 0.5;
  });
  CHECK_THROWS_AS(energy_lower_bound(sp, to_float(da4_generator()), CubeMeasure{bad, 1.0, 4}), InvalidInput);
}

TEST_CASE("domination constants") {
  auto f = to_float(one() - lam());
  CHECK(domination_constant(f, f, 1) == doctest::Approx(1.0));
  auto g = to_float((one() - lam()) * (one() - lam()));
  const double c = domination_constant(f, g, 1);
  CHECK(c <= 2.0);
  CHECK(c > 1.9);

  auto f2 = to_float(one(2) - ExactPoly::variable(2, 0));
  auto g2 = to_float(one(2) - ExactPoly::variable(2, 1));
  double prev = 0;
  for (double r : {0.99, 0.999, 0.9999}) {
    DominationGrid grid;
    grid.r_max = r;
    const double cur = domination_constant(f2, g2, 1, grid);
    CHECK(cur > 2 * prev);
    prev = cur;
  }
  CHECK(domination_constant(to_float(ExactPoly(1)), f, 1) == std::numeric_limits<double>::infinity());
}
