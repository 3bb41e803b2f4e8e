#include <doctest.h>

#include <cmath>

#include "besov/series.hpp"
#include "besov/spaces.hpp"
#include "generators.hpp"

using namespace besov;

namespace {

ExactPoly z(int d, int i) { return ExactPoly::variable(d, i); }
ExactPoly one(int d) { return ExactPoly::constant(d, GaussianRational(1)); }
GaussianRational q(long a, long b = 1) { return GaussianRational(make_rational(a, b)); }

// composite Simpson on [0,1] with n panels, used as an independent moment oracle
double simpson(const std::function<double(double)>& f, int n = 20000) {
  const double h = 1.0 / n;
  double s = f(0.0) + f(1.0);
  for (int i = 1; i < n; ++i) s += f(i * h) * (i % 2 ? 4.0 : 2.0);
  return s * h / 3.0;
}

}  // namespace

TEST_CASE("moments") {
  for (int n : {0, 1, 5, 17}) {
    CHECK(*moment_exact(PointMassAtOne{}, n, 3) == 1);
    CHECK(*moment_exact(NormalizedVolume{}, n, 2) == make_rational(2, n + 2));
    CHECK(*moment_exact(ConstantDensity{}, n, 2) == make_rational(1, n + 1));
  }
  // (1-r)^2 2r dr
  for (int n : {0, 3, 9}) {
    double oracle = simpson([n](double r) { return std::pow(r, 2 * n) * (1 - r) * (1 - r) * 2 * r; });
    CHECK(moment_exact(PowerDensity{2.0}, n, 2)->get_d() == doctest::Approx(oracle).epsilon(1e-10));
  }
  // non-integer beta goes through the Beta function
  // r = 1 - u^2 removes the square-root singularity
  double oracle = simpson([](double u) { return std::pow(1 - u * u, 7) * u * 2 * 2 * u; });
  CHECK_FALSE(moment_exact(PowerDensity{0.5}, 3, 2).has_value());
  CHECK(moment(PowerDensity{0.5}, 3, 2) == doctest::Approx(oracle).epsilon(1e-8));
  auto gl = GeneralQuadrature::from_density([](double) { return 1.0; });
  for (int n : {0, 4, 30}) CHECK(moment(gl, n, 1) == doctest::Approx(1.0 / (n + 1)).epsilon(1e-12));
  CHECK_THROWS_AS(check_admissible(GeneralQuadrature{{0.2, 0.5}, {0.3, 0.3}}), InvalidInput);
  CHECK_THROWS_AS(check_admissible(PowerDensity{-1.0}), InvalidInput);
}

TEST_CASE("weights") {
  auto b1 = SpaceSpec::besov(2, 1, PointMassAtOne{});
  CHECK(weight_exact(b1, 1) == make_rational(1, 2));
  CHECK(weight_exact(b1, 0) == 1);
  CHECK(weight_exact(SpaceSpec::alpha_scale(2, 4.0), 1) == 16);
  CHECK(weight_exact(SpaceSpec::alpha_scale(2, -2.0), 3) == make_rational(1, 16));
  CHECK(weight(SpaceSpec::alpha_scale(1, 0.5), 3) == doctest::Approx(2.0));
  CHECK_THROWS_AS(weight_exact(SpaceSpec::alpha_scale(1, 0.5), 3), NotExact);
  // total mass convention: constant density c has mass c
  auto bc = SpaceSpec::besov(1, 2, ConstantDensity{make_rational(3, 2)});
  CHECK(weight_exact(bc, 0) == make_rational(3, 2));
  CHECK(weight_exact(bc, 2) == Rational(16 * make_rational(3, 2) / 3));
  for (const auto& sp : {b1, bc, SpaceSpec::hardy_sphere(4), SpaceSpec::alpha_scale(3, -7.5),
                         SpaceSpec::besov(3, 1, NormalizedVolume{}), SpaceSpec::besov(2, 2, PowerDensity{3.0})}) {
    for (int n = 0; n <= 200; ++n) CHECK(weight(sp, n) > 0.0);
  }
}

TEST_CASE("weight cache grows and stays consistent") {
  auto sp = SpaceSpec::besov(3, 1, NormalizedVolume{});
  auto small = sp.weights(3);
  auto large = sp.weights(50);
  REQUIRE(large->truncation() >= 50);
  for (int n = 0; n <= 3; ++n) CHECK(small->exact[n] == large->exact[n]);
  CHECK(sp.weights(10) == large);
}

TEST_CASE("monomial norms") {
  CHECK(monomial_norm_sq_exact(SpaceSpec::drury_arveson(2), MultiIndex{1, 1}) == make_rational(1, 2));
  auto b = SpaceSpec::besov(2, 2, ConstantDensity{make_rational(5, 1)});
  CHECK(monomial_norm_sq_exact(b, MultiIndex{0, 0}) == weight_exact(b, 0));
  CHECK(monomial_norm_sq_exact(SpaceSpec::hardy_sphere(2), MultiIndex{1, 1}) == make_rational(1, 6));
  // alpha = -1 reproduces the sphere weights exactly only when d = 2
  CHECK(monomial_norm_sq_exact(SpaceSpec::alpha_scale(2, -1.0), MultiIndex{1, 1}) == make_rational(1, 6));
  CHECK(monomial_norm_sq_exact(SpaceSpec::hardy_sphere(3), MultiIndex{1, 1, 0}) == make_rational(1, 12));
  CHECK(monomial_norm_sq_exact(SpaceSpec::alpha_scale(3, -2.0), MultiIndex{1, 1, 0}) == make_rational(1, 18));
  CHECK(monomial_norm_sq(SpaceSpec::drury_arveson(3), MultiIndex{200, 100, 50}) ==
        doctest::Approx(factorial_ratio(MultiIndex{200, 100, 50}).get_d()).epsilon(1e-12));
}

TEST_CASE("inner products and norms") {
  auto h2 = SpaceSpec::drury_arveson(2);
  CHECK(inner_product(h2, one(2) - z(2, 0), one(2)) == q(1));
  auto f = one(2) - q(2) * z(2, 0) * z(2, 1);
  CHECK(inner_product(h2, f, f) == q(3));
  for (const auto& sp : {h2, SpaceSpec::hardy_sphere(2), SpaceSpec::besov(2, 3, NormalizedVolume{})})
    CHECK(inner_product(sp, z(2, 0), z(2, 1)).is_zero());
  CHECK(norm_sq(h2, one(2) - z(2, 0)) == 2);
  CHECK(norm_sq(h2, ExactPoly(2)) == 0);
  CHECK(norm_sq(SpaceSpec::alpha_scale(1, 1.0), one(1) - z(1, 0)) == 3);
  // sesquilinear: linear in the first slot
  GaussianRational i(Rational(0), Rational(1));
  CHECK(inner_product(h2, f * i, one(2)) == i);
  CHECK(inner_product(h2, one(2), f * i) == -i);
  auto ff = to_float(f);
  CHECK(norm_sq(h2, ff) == doctest::Approx(3.0));
  CHECK_THROWS_AS(norm_sq(SpaceSpec::drury_arveson(3), f), InvalidInput);
}

TEST_CASE("hardy sphere norm of homogeneous polynomials") {
  CHECK(hardy_sphere_norm_sq(z(2, 0) * z(2, 1)) == make_rational(1, 6));
  CHECK(hardy_sphere_norm_sq(one(3)) == 1);
  CHECK(hardy_sphere_norm_sq(z(2, 0) * z(2, 0)) == make_rational(1, 3));
  CHECK_THROWS_AS(hardy_sphere_norm_sq(one(2) - z(2, 0)), InvalidInput);
  // agrees with the B^0_sigma space
  auto h = q(3) * z(3, 0) * z(3, 1) * z(3, 2) - q(1, 2) * z(3, 2) * z(3, 2) * z(3, 2);
  CHECK(hardy_sphere_norm_sq(h) == norm_sq(SpaceSpec::hardy_sphere(3), h));
}

TEST_CASE("Besov / Drury-Arveson comparison for odd d") {
  auto r3 = besov_da_ratio(3, 200);
  CHECK(r3[1] == make_rational(1, 3));
  for (int n = 1; n <= 200; ++n) CHECK(r3[n] == make_rational(2L * n * n, (n + 1L) * (n + 2L)));
  CHECK(r3.back().get_d() == doctest::Approx(2.0).epsilon(0.02));
  for (const auto& v : besov_da_ratio(1, 30)) CHECK(v == 1);
  CHECK_THROWS_AS(besov_da_ratio(2, 5), InvalidInput);
}

TEST_CASE("space json round trip") {
  for (const auto& sp :
       {SpaceSpec::besov(3, 1, NormalizedVolume{}), SpaceSpec::besov(2, 2, ConstantDensity{make_rational(2, 3)}),
        SpaceSpec::besov(2, 0, PowerDensity{1.5}), SpaceSpec::alpha_scale(4, -3.0), SpaceSpec::hardy_sphere(5)}) {
    auto back = SpaceSpec::from_json(sp.to_json());
    CHECK(back.dimension() == sp.dimension());
    for (int n = 0; n <= 10; ++n) CHECK(weight(back, n) == weight(sp, n));
  }
  CHECK_THROWS_AS(SpaceSpec::from_json(Json::parse(R"({"d": 2, "kind": "sobolev"})")), InvalidInput);
  CHECK_THROWS_AS(SpaceSpec::from_json(Json::parse(R"({"d": 0, "kind": "alpha", "alpha": 1})")), InvalidInput);
}

TEST_CASE("alpha scale via measures is norm equivalent") {
  for (int d : {1, 2, 3}) {
    for (double alpha : {-3.0, -1.0, 0.0, 2.0, 4.0}) {
      auto wt = SpaceSpec::alpha_scale(d, alpha);
      auto ms = SpaceSpec::alpha_via_measure(d, alpha);
      double lo = 1e300, hi = 0.0;
      for (int n = 0; n <= 400; ++n) {
        double r = weight(ms, n) / weight(wt, n);
        lo = std::min(lo, r);
        hi = std::max(hi, r);
      }
      CHECK(lo > 0.0);
      CHECK(hi / lo < 100.0);
    }
  }
}

TEST_CASE("property: parallelogram law") {
  for (int trial = 0; trial < 100; ++trial) {
    int d = gen::uniform_int(1, 3);
    auto sp = trial % 2 ? SpaceSpec::besov(d, gen::uniform_int(0, 2), NormalizedVolume{}) : SpaceSpec::drury_arveson(d);
    auto f = gen::exact_poly(d, 5, 5), g = gen::exact_poly(d, 5, 5);
    CHECK(norm_sq(sp, f + g) + norm_sq(sp, f - g) == 2 * norm_sq(sp, f) + 2 * norm_sq(sp, g));
  }
}

TEST_CASE("property: slice norm is bounded by the Drury-Arveson norm") {
  for (int trial = 0; trial < 300; ++trial) {
    int d = gen::uniform_int(1, 4);
    auto f = gen::exact_poly(d, 6, gen::uniform_int(1, 8));
    auto zz = gen::sphere_point(d);
    auto s = slice(f, zz, 6);
    double sum = 0.0;
    for (int n = 0; n <= 6; ++n) sum += std::norm(s[n]);
    CHECK(sum <= norm_sq(SpaceSpec::drury_arveson(d), f).get_d() + 1e-10);
  }
}

TEST_CASE("property: decomposition lemma monomial identity") {
  for (int d = 1; d <= 3; ++d) {
    for (int a = 0; a <= 5; ++a) {
      for (const auto& alpha : indices_of_degree(d, a)) {
        for (int k = 0; k <= 8; ++k) {
          auto e = alpha.exponents();
          e.push_back(k);
          Rational lhs = monomial_norm_sq_exact(SpaceSpec::drury_arveson(d + 1), MultiIndex(e)) / factorial_ratio(alpha);
          BigInt bin;
          mpz_bin_uiui(bin.get_mpz_t(), a + k, k);
          CHECK(lhs == make_rational(BigInt(1), bin));
        }
      }
    }
  }
}

TEST_CASE("property: dilation contraction") {
  for (int trial = 0; trial < 40; ++trial) {
    int d = gen::uniform_int(1, 3);
    auto f = gen::exact_poly(d, 6, 6);
    for (int N : {1, 2}) {
      for (const RadialMeasure& mu : {RadialMeasure{PointMassAtOne{}}, RadialMeasure{NormalizedVolume{}}}) {
        auto hi = SpaceSpec::besov(d, N, mu), lo = SpaceSpec::besov(d, N - 1, mu);
        for (Rational r : {make_rational(1, 10), make_rational(1, 2), make_rational(9, 10), make_rational(99, 100)}) {
          Rational one_minus = 1 - r;
          CHECK(norm_sq(lo, f - dilate(f, r)) <= one_minus * one_minus * norm_sq(hi, f));
        }
      }
    }
  }
}
