#include <doctest.h>

#include <cmath>

#include "besov/approx.hpp"
#include "generators.hpp"

using namespace besov;

namespace {

ExactPoly z(int d, int i) { return ExactPoly::variable(d, i); }
ExactPoly one(int d) { return ExactPoly::constant(d, GaussianRational(1)); }
GaussianRational q(long a, long b = 1) { return GaussianRational(make_rational(a, b)); }

// Squared distance from g to span{z^beta f : |beta| <= m} by exact modified
// Gram-Schmidt, independent of the normal equations.
Rational gram_schmidt_dist(const SpaceSpec& sp, const ExactPoly& f, const ExactPoly& g, int m) {
  std::vector<ExactPoly> ortho;
  std::vector<Rational> norms;
  for (const auto& beta : graded_basis(f.dimension(), m)) {
    ExactPoly v = ExactPoly::monomial(beta) * f;
    for (std::size_t i = 0; i < ortho.size(); ++i) {
      GaussianRational coef = inner_product(sp, v, ortho[i]) / GaussianRational(norms[i]);
      v -= ortho[i] * coef;
    }
    Rational n = norm_sq(sp, v);
    if (sgn(n) == 0) continue;
    ortho.push_back(v);
    norms.push_back(n);
  }
  Rational dist = norm_sq(sp, g);
  for (std::size_t i = 0; i < ortho.size(); ++i) dist -= abs_sq(inner_product(sp, g, ortho[i])) / norms[i];
  return dist;
}

std::vector<int> range(int lo, int hi) {
  std::vector<int> v;
  for (int i = lo; i <= hi; ++i) v.push_back(i);
  return v;
}

}  // namespace

TEST_CASE("Gram system of 1 - z1 in H^2_2") {
  auto sp = SpaceSpec::drury_arveson(2);
  auto sys = assemble_gram(sp, one(2) - z(2, 0), one(2), 1);
  REQUIRE(sys.basis.size() == 3);
  CHECK(sys.entry(0, 0) == q(2));
  CHECK(sys.entry(0, 1) == q(-1));
  CHECK(sys.entry(1, 0) == q(-1));
  CHECK(sys.entry(1, 1) == q(2));
  CHECK(sys.entry(0, 2) == q(0));
  CHECK(sys.c[0] == q(1));
  CHECK(sys.c[1] == q(0));
  CHECK(sys.blocks.size() == 2);
  auto res = optimal_approximant(sys, {SolveMode::Exact});
  CHECK(*res.dist_sq_exact == make_rational(1, 3));
  CHECK(res.p_exact->coefficient(MultiIndex{0, 0}) == q(2, 3));
  CHECK(res.p_exact->coefficient(MultiIndex{1, 0}) == q(1, 3));
  CHECK(res.p_exact->coefficient(MultiIndex{0, 1}) == q(0));
  auto fl = optimal_approximant(sys);
  CHECK(fl.dist_sq == doctest::Approx(1.0 / 3));
  CHECK(fl.report.precision == Precision::Double);
  CHECK(fl.basis_ordering == std::string(kBasisOrdering));
}

TEST_CASE("approximant examples") {
  auto bc = SpaceSpec::besov(2, 1, ConstantDensity{make_rational(7, 3)});
  auto sys = assemble_gram(bc, one(2), one(2), 0);
  CHECK(sys.entry(0, 0) == GaussianRational(weight_exact(bc, 0)));
  CHECK(sys.c[0] == GaussianRational(weight_exact(bc, 0)));

  auto f = one(2) - q(3) * z(2, 0) * z(2, 1) + q(1, 2) * z(2, 1);
  for (int m : {0, 2, 4}) {
    auto r = approximate(SpaceSpec::drury_arveson(2), f, f, m, {SolveMode::Exact});
    CHECK(*r.dist_sq_exact == 0);
    CHECK(*r.p_exact == one(2));
  }
  CHECK(*approximate(SpaceSpec::drury_arveson(1), one(1) - z(1, 0), one(1), 0, {SolveMode::Exact}).dist_sq_exact ==
        make_rational(1, 2));

  auto mono = ExactPoly::monomial(MultiIndex{2, 1}, q(5));
  auto ds = assemble_gram(SpaceSpec::besov(2, 2, NormalizedVolume{}), mono, one(2), 3);
  for (std::size_t i = 0; i < ds.rows.size(); ++i) {
    REQUIRE(ds.rows[i].size() == 1);
    CHECK(ds.rows[i][0].first == static_cast<int>(i));
  }
  CHECK_THROWS_AS(assemble_gram(SpaceSpec::drury_arveson(2), ExactPoly(2), one(2), 2), InvalidInput);
  CHECK_THROWS_AS(assemble_gram(SpaceSpec::alpha_scale(2, 0.5), f, one(2), 2), NotExact);
  CHECK_THROWS_AS(optimal_approximant(assemble_gram(SpaceSpec::alpha_scale(2, 0.5), to_float(f), to_float(f), 1),
                                      {SolveMode::Exact}),
                  NotExact);
}

TEST_CASE("cyclicity profiles") {
  auto h2 = SpaceSpec::drury_arveson(2);
  for (const auto& pt : cyclicity_profile(h2, one(2), {0, 1, 5})) CHECK(pt.dist_sq == 0.0);
  auto f = one(2) - q(2) * z(2, 0) * z(2, 1);
  auto prof = cyclicity_profile(h2, f, range(0, 8), {SolveMode::Exact});
  CHECK(*prof[0].dist_sq_exact == make_rational(2, 3));
  for (std::size_t i = 1; i < prof.size(); ++i) CHECK(*prof[i].dist_sq_exact <= *prof[i - 1].dist_sq_exact);
  // strictly decreasing over even degrees; odd degrees add nothing for this f
  for (int m = 2; m <= 8; m += 2) CHECK(*prof[m].dist_sq_exact < *prof[m - 2].dist_sq_exact);
  for (int m = 1; m <= 7; m += 2) CHECK(*prof[m].dist_sq_exact == *prof[m - 1].dist_sq_exact);
}

TEST_CASE("hc and membership profiles") {
  auto d4 = SpaceSpec::alpha_scale(1, 4.0);
  for (const auto& pt : hc_profile(d4, one(1), 3, {0, 2, 4}).points) CHECK(pt.dist_sq == 0.0);
  auto phi = one(1) - z(1, 0);
  auto hc2 = hc_profile(d4, phi, 2, range(0, 12));
  CHECK(hc2.n == 2);
  for (std::size_t i = 1; i < hc2.points.size(); ++i) CHECK(hc2.points[i].dist_sq <= hc2.points[i - 1].dist_sq + 1e-15);

  auto h2 = SpaceSpec::drury_arveson(2);
  auto f = one(2) - z(2, 0) * z(2, 1);
  auto mem = membership_profile(h2, pow(f, 3), f, 3, {0, 1}, {SolveMode::Exact});
  CHECK(*mem[0].dist_sq_exact == 0);
  // z1 is orthogonal to every multiple of z2
  auto orth = membership_profile(h2, z(2, 0), z(2, 1), 1, {0, 3, 6}, {SolveMode::Exact});
  for (const auto& pt : orth) CHECK(*pt.dist_sq_exact == 1);
  CHECK_THROWS_AS(membership_profile(h2, f, f, 0, {0}), InvalidInput);
}

TEST_CASE("finite section multiplier bound") {
  auto h1 = SpaceSpec::drury_arveson(1);
  for (int m : {0, 3, 10}) CHECK(finite_section_mult_bound(h1, to_float(z(1, 0)), m) == doctest::Approx(1.0));
  CHECK(finite_section_mult_bound(SpaceSpec::besov(2, 1, NormalizedVolume{}),
                                  FloatPoly::constant(2, Complex(3.0, -4.0)), 4) == doctest::Approx(5.0));
  CHECK(finite_section_mult_bound(SpaceSpec::drury_arveson(2), to_float(z(2, 0)), 3) <= 1.0 + 1e-12);
  for (int trial = 0; trial < 10; ++trial) {
    auto phi = to_float(gen::exact_poly(2, 2, 3));
    if (phi.is_zero()) continue;
    auto sp = trial % 2 ? SpaceSpec::drury_arveson(2) : SpaceSpec::alpha_scale(2, 1.0);
    double prev = 0.0;
    for (int m = 0; m <= 6; ++m) {
      double v = finite_section_mult_bound(sp, phi, m);
      CHECK(v >= prev * (1 - 1e-12));
      prev = v;
    }
  }
}

TEST_CASE("Hermitian LDL") {
  // 6x6 Hilbert matrix: exact solve vs double
  DenseMatrix<GaussianRational> he(6);
  DenseMatrix<double> hd(6);
  for (std::size_t i = 0; i < 6; ++i)
    for (std::size_t j = 0; j < 6; ++j) {
      he(i, j) = GaussianRational(make_rational(1, static_cast<long>(i + j + 1)));
      hd(i, j) = 1.0 / static_cast<double>(i + j + 1);
    }
  HermitianLDL<GaussianRational> le(he);
  HermitianLDL<double> ld(hd);
  REQUIRE(le.ok());
  REQUIRE(ld.ok());
  std::vector<GaussianRational> b(6, GaussianRational(1));
  auto xe = le.solve(b);
  auto xd = ld.solve(std::vector<double>(6, 1.0));
  for (int i = 0; i < 6; ++i) CHECK(xd[i] == doctest::Approx(xe[i].re.get_d()).epsilon(1e-6));
  CHECK(xe[0] == q(-6));

  DenseMatrix<std::complex<double>> indef(2);
  indef(0, 0) = 1.0;
  indef(1, 0) = 2.0;
  indef(0, 1) = 2.0;
  indef(1, 1) = 1.0;
  HermitianLDL<std::complex<double>> li(indef);
  CHECK_FALSE(li.ok());
  CHECK(li.min_pivot() == doctest::Approx(-3.0));
  CHECK_THROWS_AS(li.solve({1.0, 1.0}), FactorizationError);
}

TEST_CASE("property: oracle equivalence") {
  for (int trial = 0; trial < 80; ++trial) {
    int d = gen::uniform_int(1, 3);
    int m = gen::uniform_int(0, 3);
    auto f = gen::exact_poly(d, 3, gen::uniform_int(1, 6));
    auto g = gen::exact_poly(d, 4, gen::uniform_int(1, 6));
    if (f.is_zero()) continue;
    auto sp = trial % 3 == 0 ? SpaceSpec::drury_arveson(d)
              : trial % 3 == 1 ? SpaceSpec::besov(d, 1, NormalizedVolume{})
                               : SpaceSpec::hardy_sphere(d);
    Rational oracle = gram_schmidt_dist(sp, f, g, m);
    auto exact = approximate(sp, f, g, m, {SolveMode::Exact});
    CHECK(*exact.dist_sq_exact == oracle);
    HermitianLDL<GaussianRational> full(assemble_gram(sp, f, g, m).dense());
    CHECK(full.ok());
    CHECK(full.min_pivot() > 0.0);
    auto fl = approximate(sp, f, g, m);
    CHECK(std::abs(fl.dist_sq - oracle.get_d()) < 1e-10 * std::max(1.0, norm_sq(sp, g).get_d()));
    // residual identity
    double resid = norm_sq(sp, to_float(g) - fl.p * to_float(f));
    CHECK(std::abs(resid - fl.dist_sq) < 1e-10 * std::max(1.0, norm_sq(sp, g).get_d()));
  }
}

TEST_CASE("property: profiles are monotone and scale invariant") {
  for (int trial = 0; trial < 20; ++trial) {
    int d = gen::uniform_int(1, 3);
    auto f = gen::exact_poly(d, 2, gen::uniform_int(1, 4));
    if (f.is_zero()) continue;
    f.add_term(MultiIndex(d), q(1));
    auto sp = SpaceSpec::drury_arveson(d);
    auto a = cyclicity_profile(sp, f, range(0, 4), {SolveMode::Exact});
    auto b = cyclicity_profile(sp, f * q(2), range(0, 4), {SolveMode::Exact});
    for (std::size_t i = 0; i < a.size(); ++i) {
      CHECK(*a[i].dist_sq_exact == *b[i].dist_sq_exact);
      if (i) CHECK(*a[i].dist_sq_exact <= *a[i - 1].dist_sq_exact);
    }
  }
}

TEST_CASE("ratio norm sweep") {
  // p = 1 - z1 in B^1_sigma(B_3), s = k = 1: p^2 / p_r has coefficients
  // 1, r - 2, r^(n-2) (1 - r)^2 on z1^n, and the z1^n weight is
  // 2 n^2 / ((n + 1)(n + 2)) for n >= 1, 1 for n = 0.
  auto sp = SpaceSpec::besov(3, 1, PointMassAtOne{});
  auto p = to_float(one(3) - z(3, 0));
  auto oracle = [](double r, int M) {
    long double s = 1.0L;
    for (int n = 1; n <= M; ++n) {
      long double a = n == 1 ? r - 2.0 : std::pow(static_cast<long double>(r), n - 2) * (1 - r) * (1 - r);
      s += a * a * 2.0L * n * n / ((n + 1.0L) * (n + 2.0L));
    }
    return static_cast<double>(s);
  };
  auto res = ratio_norm_sweep(sp, p, 1, 1, {0.0, 0.5, 0.9}, {10, 40, 200});
  REQUIRE(res.rows.size() == 9);
  for (const auto& row : res.rows) CHECK(row.norm_sq == doctest::Approx(oracle(row.r, row.M)).epsilon(1e-12));
  CHECK(res.rows[0].norm_sq == doctest::Approx(3.0));
  CHECK(res.rows[0].accepted);

  auto adaptive = ratio_norm_sweep(sp, p, 1, 1, {0.5, 0.99}, {});
  CHECK(adaptive.all_converged);
  for (const auto& row : adaptive.accepted) CHECK(row.norm_sq == doctest::Approx(oracle(row.r, 20000)).epsilon(1e-6));
  CHECK(adaptive.sup_norm_sq == doctest::Approx(std::max(oracle(0.5, 20000), oracle(0.99, 20000))).epsilon(1e-6));

  auto trivial = ratio_norm_sweep(sp, FloatPoly::constant(3, 1.0), 2, 1, {0.0, 0.3, 0.95}, {5});
  for (const auto& row : trivial.rows) CHECK(row.norm_sq == doctest::Approx(1.0));
  CHECK_THROWS_AS(ratio_norm_sweep(sp, to_float(z(3, 0)), 1, 1, {0.5}, {5}), InvalidInput);
  CHECK_THROWS_AS(ratio_norm_sweep(sp, p, 1, 1, {1.0}, {5}), InvalidInput);
}
