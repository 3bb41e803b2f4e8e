#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "besov/certify.hpp"
#include "besov/spaces.hpp"

namespace besov {

std::string library_version();

// ---------------------------------------------------------------------------
// Lemma checks
// ---------------------------------------------------------------------------

struct LemmaReport {
  std::string name;
  bool passed = false;
  int checks = 0;
  int failures = 0;
  double worst_margin = 0.0;  // smallest (bound - value) / bound seen; negative on failure
  Json details;

  Json to_json() const;
};

/// Registered names, in a fixed order.
std::vector<std::string> lemma_names();

/// Runs one registered check. Parameters are optional overrides of the
/// documented defaults; unknown names and malformed parameters throw
/// InvalidInput.
///   dilation-contraction      ||f - f_r||_{B^(N-1)} <= (1 - r) ||f||_{B^N}, exact
///   slice-bound               sum_n |f_n(z)|^2 <= ||f||^2 in H^2_d
///   slice-outer               slices of T_{k,d} f have no zeros in the disc
///   onevar-derivative-bound   sup |(p^n/p_r)^(k)|, k < n, and disc L^2 norm of the n-th derivative
///   rphi-bound                finite-section multiplier bounds of R(phi_r), observational
///   decomposition-isometry    ||z^a z_d^k||^2 / ||z^a||^2 = 1 / C(|a| + k, k), exact
///   besov-da-window           B^1_sigma / H^2_3 weight ratio = 2n^2/((n+1)(n+2)) in [1/3, 2], exact
LemmaReport verify_lemma(const std::string& name, const Json& params = Json::object());

// ---------------------------------------------------------------------------
// Experiments
// ---------------------------------------------------------------------------

enum class ExperimentKind { Profile, Hc, Member, RatioSweep };

struct ExperimentSpec {
  std::string name;
  std::string anchor;  // the result the experiment illustrates
  ExperimentKind kind = ExperimentKind::Profile;
  SpaceSpec space = SpaceSpec::drury_arveson(2);
  ExactPoly f{2};                // generator (profile, member) or phi (hc)
  std::optional<ExactPoly> h;    // member target
  int n = 1;                     // hc exponent
  int k = 1;                     // member power, or ratio-sweep k
  int s = 1;                     // ratio-sweep s
  std::vector<int> degrees;      // profile degrees
  std::vector<double> r_grid;    // ratio-sweep
  std::vector<int> M_grid;       // ratio-sweep; empty means adaptive
  std::optional<Json> certificate;  // {"type": "energy", "measure": {...}} or {"type": "dual", "j": int}
  std::uint64_t seed = 1;
  bool include_runtime = false;  // adds a runtime_ms column (not reproducible)
  double budget_seconds = 0.0;   // stop scheduling new degrees after this (0 = unlimited)
  std::string output_dir;        // empty: nothing written

  Json to_json() const;
  /// Errors name the offending field, e.g. "spec.space.measure.beta: ...".
  static ExperimentSpec from_json(const Json& j);
};

std::string to_string(ExperimentKind k);

/// 0, 1, 2, 4, 6, ... up to max_degree.
std::vector<int> default_schedule(int max_degree);

std::vector<std::string> builtin_names();
ExperimentSpec builtin_experiment(const std::string& name);

struct ExperimentResult {
  std::string csv;
  Json manifest;
  bool passed = true;  // every recorded check held
};

/// Runs the experiment; writes <output_dir>/<name>.csv and
/// <output_dir>/<name>.manifest.json when output_dir is set.
ExperimentResult run_experiment(const ExperimentSpec& spec);

}  // namespace besov
