#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "besov/spaces.hpp"

namespace besov {

enum class EmbeddingKind { Tkd, Sk, ProjectionLift };

struct EmbeddingSpec {
  EmbeddingKind kind = EmbeddingKind::Tkd;
  int k = 1;
  int d = 1;

  /// Throws InvalidInput unless 1 <= k <= d.
  void validate() const;
};

EmbeddingKind parse_embedding_kind(const std::string& name);

/// Image of a one-variable polynomial under f -> f o tau_k, where
/// tau_k(z) = k^(k/2) z_1 ... z_k.
///
/// When k^(nk/2) is irrational for some exponent n the coefficients exist only
/// in floating point; |coefficient|^2 = |a_n|^2 k^(nk) is always rational and
/// kept exactly, so norms of the image stay exact.
struct TauImage {
  int k = 1;
  int d = 1;
  FloatPoly poly{1};
  std::map<MultiIndex, Rational> modulus_sq;
  std::optional<ExactPoly> exact;
};

TauImage tau_compose(const ExactPoly& f, int k, int d);

/// Exact squared norm of a T_{k,d} image; monomials are orthogonal, so only
/// the squared moduli enter.
Rational norm_sq(const SpaceSpec& space, const TauImage& image);

/// S_k f(z) = f(z_1^2 + ... + z_k^2), expanded exactly in d variables.
ExactPoly sum_squares_compose(const ExactPoly& f, int k, int d);

/// c_n^(d) = (n!)^2/(2n)! * sum_{|a| = n, a in N_0^d} (2a)!/(a!)^2, so that
/// ||S_d lambda^n||^2_{H^2_d} = c_n^(d). Returns c_0..c_max_n via the
/// convolution recursion over the number of variables.
std::vector<Rational> sk_coefficients(int d, int max_n);
Rational sk_coefficient(int d, int n);

/// Zero-padding of exponents: the isometric copy of H^2_k inside H^2_d.
template <class C>
SparsePoly<C> projection_lift(const SparsePoly<C>& f, int d) {
  if (static_cast<int>(f.dimension()) > d) throw InvalidInput("projection_lift needs k <= d");
  SparsePoly<C> out(static_cast<std::size_t>(d));
  for (const auto& [beta, c] : f.terms()) out.add_term(beta.resized(d), c);
  return out;
}

/// Keeps only the "diagonal" exponents (n, ..., n, 0, ..., 0) with n in the
/// first k slots; these are exactly the monomials reachable from T_{k,d}.
template <class C>
SparsePoly<C> diagonal_projection(const SparsePoly<C>& q, int k) {
  if (k < 1 || k > static_cast<int>(q.dimension())) throw InvalidInput("diagonal_projection needs 1 <= k <= d");
  SparsePoly<C> out(q.dimension());
  for (const auto& [beta, c] : q.terms()) {
    bool diag = true;
    for (std::size_t i = 0; i < beta.size() && diag; ++i)
      diag = static_cast<int>(i) < k ? beta[i] == beta[0] : beta[i] == 0;
    if (diag) out.add_term(beta, c);
  }
  return out;
}

/// ||T_{k,d} lambda^n||^2_{H^2_d} / ||lambda^n||^2_{D_{(k-1)/2}(D)}
///   = k^(nk) (n!)^k / (nk)! / (n+1)^((k-1)/2).
double tau_norm_ratio(int k, int n);

/// c_n^(d) / (n+1)^((d-1)/2).
double sk_norm_ratio(int d, int n);

}  // namespace besov
