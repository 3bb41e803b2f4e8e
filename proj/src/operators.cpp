#include "besov/operators.hpp"

#include <cmath>

namespace besov {

void EmbeddingSpec::validate() const {
  if (k < 1 || d < 1 || k > d)
    throw InvalidInput("embedding needs 1 <= k <= d (got k=" + std::to_string(k) + ", d=" + std::to_string(d) + ")");
}

EmbeddingKind parse_embedding_kind(const std::string& name) {
  if (name == "tkd") return EmbeddingKind::Tkd;
  if (name == "sk") return EmbeddingKind::Sk;
  if (name == "lift") return EmbeddingKind::ProjectionLift;
  throw InvalidInput("unknown embedding kind '" + name + "' (expected tkd, sk or lift)");
}

namespace {

void check_one_variable(const ExactPoly& f) {
  if (f.dimension() != 1) throw InvalidInput("embedding input must be a one-variable polynomial");
}

}  // namespace

TauImage tau_compose(const ExactPoly& f, int k, int d) {
  EmbeddingSpec{EmbeddingKind::Tkd, k, d}.validate();
  check_one_variable(f);
  TauImage img;
  img.k = k;
  img.d = d;
  img.poly = FloatPoly(static_cast<std::size_t>(d));
  ExactPoly exact(static_cast<std::size_t>(d));
  bool all_exact = true;
  for (const auto& [lam, a] : f.terms()) {
    const int n = lam.degree();
    std::vector<int> e(d, 0);
    for (int i = 0; i < k; ++i) e[i] = n;
    MultiIndex beta(std::move(e));
    // scale^2 = k^(nk)
    BigInt scale_sq;
    mpz_ui_pow_ui(scale_sq.get_mpz_t(), static_cast<unsigned long>(k), static_cast<unsigned long>(n) * k);
    img.modulus_sq[beta] = Rational(abs_sq(a) * Rational(scale_sq));
    if (mpz_perfect_square_p(scale_sq.get_mpz_t())) {
      BigInt scale;
      mpz_sqrt(scale.get_mpz_t(), scale_sq.get_mpz_t());
      GaussianRational c = a * GaussianRational(Rational(scale));
      exact.add_term(beta, c);
      img.poly.add_term(beta, c.to_complex());
    } else {
      all_exact = false;
      const double scale = std::pow(static_cast<double>(k), 0.5 * n * k);
      img.poly.add_term(beta, a.to_complex() * scale);
    }
  }
  if (all_exact) img.exact = std::move(exact);
  return img;
}

Rational norm_sq(const SpaceSpec& space, const TauImage& image) {
  if (space.dimension() != image.d) throw InvalidInput("space dimension does not match embedding target");
  Rational sum(0);
  for (const auto& [beta, m] : image.modulus_sq) sum += m * monomial_norm_sq_exact(space, beta);
  return sum;
}

ExactPoly sum_squares_compose(const ExactPoly& f, int k, int d) {
  EmbeddingSpec{EmbeddingKind::Sk, k, d}.validate();
  check_one_variable(f);
  ExactPoly s(static_cast<std::size_t>(d));
  for (int j = 0; j < k; ++j) s.add_term(MultiIndex::unit(d, j, 2), GaussianRational(1));
  ExactPoly out(static_cast<std::size_t>(d));
  ExactPoly power = ExactPoly::constant(d, GaussianRational(1));
  int current = 0;
  for (const auto& [lam, a] : f.terms()) {
    while (current < lam.degree()) {
      power = power * s;
      ++current;
    }
    out += power * a;
  }
  return out;
}

std::vector<Rational> sk_coefficients(int d, int max_n) {
  if (d < 1) throw InvalidInput("sk_coefficients needs d >= 1");
  if (max_n < 0) return {};
  // central binomials C(2j, j)
  std::vector<BigInt> central(static_cast<std::size_t>(max_n) + 1);
  for (int j = 0; j <= max_n; ++j)
    mpz_bin_uiui(central[j].get_mpz_t(), 2UL * static_cast<unsigned long>(j), static_cast<unsigned long>(j));
  // S_e(n) = sum_{|a| = n, a in N_0^e} prod C(2 a_i, a_i);  S_{e+1} = S_e * central.
  std::vector<BigInt> s = central;
  for (int e = 2; e <= d; ++e) {
    std::vector<BigInt> next(s.size());
    for (int n = 0; n <= max_n; ++n) {
      BigInt acc = 0;
      for (int j = 0; j <= n; ++j) acc += s[j] * central[n - j];
      next[n] = acc;
    }
    s = std::move(next);
  }
  std::vector<Rational> out;
  out.reserve(s.size());
  for (int n = 0; n <= max_n; ++n) out.push_back(make_rational(s[n], central[n]));
  return out;
}

Rational sk_coefficient(int d, int n) {
  if (n < 0) throw InvalidInput("sk_coefficient needs n >= 0");
  return sk_coefficients(d, n).back();
}

double tau_norm_ratio(int k, int n) {
  // log of k^(nk) (n!)^k / (nk)!
  const double lg = n * k * std::log(static_cast<double>(k)) + k * std::lgamma(n + 1.0) - std::lgamma(n * k + 1.0);
  return std::exp(lg - 0.5 * (k - 1) * std::log(n + 1.0));
}

double sk_norm_ratio(int d, int n) {
  return sk_coefficient(d, n).get_d() / std::pow(n + 1.0, 0.5 * (d - 1));
}

}  // namespace besov
