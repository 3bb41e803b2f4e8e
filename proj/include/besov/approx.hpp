#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "besov/linalg.hpp"
#include "besov/spaces.hpp"

namespace besov {

/// Normal equations for min ||g - p f||^2 over polynomials p of degree <= m.
///
/// G[beta][gamma] = <z^gamma f, z^beta f> and c[beta] = <g, z^beta f>, so that
/// G a = c for the coefficient vector a of p. G is stored sparsely by rows:
/// the entry is non-zero only if gamma - beta is a difference of two exponents
/// in the support of f. The connected components of that pattern split G into
/// independent diagonal blocks.
template <class C>
struct GramSystem {
  SpaceSpec space;
  SparsePoly<C> f;
  SparsePoly<C> g;
  int degree = 0;
  std::vector<MultiIndex> basis;                    // graded-lex, |beta| <= degree
  std::vector<std::vector<std::pair<int, C>>> rows;  // rows[i]: (j, G[i][j]) sorted by j
  std::vector<C> c;
  C g_norm_sq{0};
  std::vector<std::vector<int>> blocks;  // index sets of the diagonal blocks

  C entry(int i, int j) const;
  DenseMatrix<C> dense() const;
};

using ExactGramSystem = GramSystem<GaussianRational>;
using FloatGramSystem = GramSystem<Complex>;

/// Exact entries; throws NotExact if the space has no exact weights.
ExactGramSystem assemble_gram(const SpaceSpec& space, const ExactPoly& f, const ExactPoly& g, int m);
FloatGramSystem assemble_gram(const SpaceSpec& space, const FloatPoly& f, const FloatPoly& g, int m);

enum class Precision { Double, LongDouble, Exact };
std::string to_string(Precision p);

enum class SolveMode {
  Auto,   // double, then long double, then exact rationals on small exact blocks
  Float,  // double only
  Exact,  // exact rationals throughout (exact systems only)
};

struct SolveOptions {
  SolveMode mode = SolveMode::Auto;
  /// Largest block handed to the exact fallback in Auto mode.
  std::size_t exact_limit = 150;
  /// Relative pivot threshold that triggers a rerun in higher precision.
  double pivot_tolerance = 1e-13;
};

struct SolveReport {
  Precision precision = Precision::Double;  // highest precision any block needed
  double min_pivot = 0.0;    // smallest pivot of the factorizations used (diagonally scaled on float
                             // paths); NaN when the target is orthogonal to every block
  double pivot_ratio = 1.0;  // smallest min/max pivot ratio over the solved blocks
  bool flagged = false;      // some block was rerun or stayed below the pivot tolerance
  int blocks_solved = 0;
  int largest_block = 0;
  int system_size = 0;
};

struct ApproximantResult {
  int degree = 0;
  std::string basis_ordering;
  FloatPoly p{1};
  std::optional<ExactPoly> p_exact;  // SolveMode::Exact only
  double dist_sq = 0.0;
  std::optional<Rational> dist_sq_exact;
  SolveReport report;
};

ApproximantResult optimal_approximant(const ExactGramSystem& sys, const SolveOptions& opts = {});
ApproximantResult optimal_approximant(const FloatGramSystem& sys, const SolveOptions& opts = {});

/// Assembles and solves, taking the exact path when the space allows it and
/// the float path otherwise.
ApproximantResult approximate(const SpaceSpec& space, const ExactPoly& f, const ExactPoly& g, int m,
                              const SolveOptions& opts = {});
ApproximantResult approximate(const SpaceSpec& space, const FloatPoly& f, const FloatPoly& g, int m,
                              const SolveOptions& opts = {});

struct ProfilePoint {
  int m = 0;
  double dist_sq = 0.0;
  std::optional<Rational> dist_sq_exact;
  SolveReport report;
  double runtime_ms = 0.0;
};

/// dist(1, {p f : deg p <= m})^2 for each m; degrees run in parallel.
std::vector<ProfilePoint> cyclicity_profile(const SpaceSpec& space, const ExactPoly& f, const std::vector<int>& degrees,
                                            const SolveOptions& opts = {});

struct HcProfile {
  ExactPoly phi;
  int n = 0;
  std::vector<ProfilePoint> points;
};

/// dist(phi^n, {p phi^(n+1) : deg p <= m})^2 for each m.
HcProfile hc_profile(const SpaceSpec& space, const ExactPoly& phi, int n, const std::vector<int>& degrees,
                     const SolveOptions& opts = {});

/// dist(h, {p f^k : deg p <= m})^2 for each m.
std::vector<ProfilePoint> membership_profile(const SpaceSpec& space, const ExactPoly& h, const ExactPoly& f, int k,
                                             const std::vector<int>& degrees, const SolveOptions& opts = {});

/// sup ||phi q|| / ||q|| over q in span{z^beta : |beta| <= m}: a lower bound
/// for the multiplier norm of phi, nondecreasing in m.
double finite_section_mult_bound(const SpaceSpec& space, const FloatPoly& phi, int m);

struct RatioSweepRow {
  double r = 0.0;
  int M = 0;
  double norm_sq = 0.0;
  double last_block_rel = 0.0;  // contribution of the top homogeneous blocks
  double tail_rel = 0.0;        // geometric estimate of the omitted tail
  bool accepted = false;
};

struct RatioSweepResult {
  std::vector<RatioSweepRow> rows;
  std::vector<RatioSweepRow> accepted;  // one per r: the first accepted truncation (or the last tried)
  double sup_norm_sq = 0.0;             // over the accepted rows
  bool all_converged = true;
};

struct RatioSweepOptions {
  double last_block_tolerance = 1e-8;
  double tail_tolerance = 1e-6;
  int adaptive_start = 32;
  int adaptive_max = 16384;
};

/// ||trunc_M(p^(s+k) / p_r^s)||^2 in the given space, for each r and M. An
/// empty M grid doubles M from adaptive_start until the truncation is accepted.
RatioSweepResult ratio_norm_sweep(const SpaceSpec& space, const FloatPoly& p, int s, int k,
                                  const std::vector<double>& r_grid, const std::vector<int>& M_grid,
                                  const RatioSweepOptions& opts = {});

/// Per-degree contributions b_n = ||F_n||^2 for n <= M.
std::vector<double> degree_blocks(const SpaceSpec& space, const FloatPoly& F, int M);

}  // namespace besov
