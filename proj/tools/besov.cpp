#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "besov/approx.hpp"
#include "besov/certify.hpp"
#include "besov/operators.hpp"
#include "besov/xcli.hpp"

using namespace besov;

namespace {

constexpr int kOk = 0;
constexpr int kCheckFailed = 1;
constexpr int kInputError = 2;

SpaceSpec load_space(const std::string& arg) { return SpaceSpec::from_json(load_json_arg(arg)); }

ExactPoly load_poly(const std::string& arg, const std::string& what, std::size_t dim) {
  try {
    return poly_from_json(load_json_arg(arg), dim);
  } catch (const std::exception& e) {
    throw InvalidInput(what + ": " + e.what());
  }
}

void require_dim(const ExactPoly& f, const SpaceSpec& space, const std::string& what) {
  if (static_cast<int>(f.dimension()) != space.dimension())
    throw InvalidInput(what + ": dimension " + std::to_string(f.dimension()) + " does not match the space (d = " +
                       std::to_string(space.dimension()) + ")");
}

SolveOptions solve_options(const std::string& mode) {
  SolveOptions o;
  if (mode == "auto") o.mode = SolveMode::Auto;
  else if (mode == "float") o.mode = SolveMode::Float;
  else if (mode == "exact") o.mode = SolveMode::Exact;
  else throw InvalidInput("--mode: expected auto, float or exact");
  return o;
}

std::vector<int> degree_list(const std::vector<int>& degrees, int max_degree) {
  if (!degrees.empty()) return degrees;
  if (max_degree >= 0) return default_schedule(max_degree);
  throw InvalidInput("give --degrees or --max");
}

Json report_json(const SolveReport& r) {
  return Json{{"precision", to_string(r.precision)}, {"min_pivot", r.min_pivot},
              {"pivot_ratio", r.pivot_ratio},       {"flagged", r.flagged},
              {"blocks_solved", r.blocks_solved},   {"largest_block", r.largest_block},
              {"system_size", r.system_size}};
}

void print_profile(const std::vector<ProfilePoint>& pts, bool runtime) {
  std::cout << "m,dist_sq,min_pivot" << (runtime ? ",runtime_ms" : "") << '\n';
  std::cout.precision(17);
  for (const auto& p : pts) {
    std::cout << p.m << ',' << p.dist_sq << ',' << p.report.min_pivot;
    if (runtime) std::cout << ',' << p.runtime_ms;
    std::cout << '\n';
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Norms, optimal approximants and non-cyclicity certificates in radially weighted Besov spaces"};
  app.set_help_flag("--help", "print this help");
  app.require_subcommand(1);
  int threads = 0;
  app.add_option("--threads", threads, "worker budget (overrides BESOV_THREADS)")->check(CLI::PositiveNumber);

  std::string space_arg, f_arg, g_arg, h_arg, phi_arg, cube_arg, params_arg, spec_arg, out_dir, mode = "auto";
  std::vector<int> degrees;
  int m = 0, max_degree = -1, n = 1, k = 1, d = 1, j = 0, nodes = 8;
  double alpha = 0.0, scale = 1.0, budget = 0.0;
  bool runtime = false;
  std::string embed_kind = "tkd", name;

  auto* norm = app.add_subcommand("norm", "squared norm of a polynomial");
  norm->add_option("--space", space_arg, "space spec (inline JSON or file)")->required();
  norm->add_option("--f", f_arg, "polynomial (inline JSON or file)")->required();

  auto* ip = app.add_subcommand("ip", "inner product <f, g>");
  ip->add_option("--space", space_arg)->required();
  ip->add_option("--f", f_arg)->required();
  ip->add_option("--g", g_arg)->required();

  auto* approx = app.add_subcommand("approx", "optimal approximant of g by p f with deg p <= m");
  approx->add_option("--space", space_arg)->required();
  approx->add_option("--f", f_arg)->required();
  approx->add_option("--g", g_arg, "target (default 1)");
  approx->add_option("--m", m)->required()->check(CLI::NonNegativeNumber);
  approx->add_option("--mode", mode, "auto, float or exact");

  auto add_schedule = [&](CLI::App* c) {
    c->add_option("--degrees", degrees, "comma-separated degrees")->delimiter(',');
    c->add_option("--max", max_degree, "use the default schedule 0,1,2,4,6,... up to this degree");
    c->add_flag("--runtime", runtime, "add a runtime_ms column");
    c->add_option("--mode", mode, "auto, float or exact");
  };
  auto* profile = app.add_subcommand("profile", "dist(1, {p f})^2 over a degree schedule (CSV)");
  profile->add_option("--space", space_arg)->required();
  profile->add_option("--f", f_arg)->required();
  add_schedule(profile);

  auto* hc = app.add_subcommand("hc", "dist(phi^n, {p phi^(n+1)})^2 over a degree schedule (CSV)");
  hc->add_option("--space", space_arg)->required();
  hc->add_option("--phi", phi_arg)->required();
  hc->add_option("--n", n)->check(CLI::NonNegativeNumber);
  add_schedule(hc);

  auto* member = app.add_subcommand("member", "dist(h, {p f^k})^2 over a degree schedule (CSV)");
  member->add_option("--space", space_arg)->required();
  member->add_option("--h", h_arg)->required();
  member->add_option("--f", f_arg)->required();
  member->add_option("--k", k)->check(CLI::PositiveNumber);
  add_schedule(member);

  auto* embed = app.add_subcommand("embed", "apply T_{k,d}, S_k or the projection lift to f");
  embed->add_option("--kind", embed_kind, "tkd, sk or lift");
  embed->add_option("--k", k)->required();
  embed->add_option("--d", d)->required();
  embed->add_option("--f", f_arg)->required();

  auto* certify = app.add_subcommand("certify", "lower-bound certificates");
  certify->require_subcommand(1);
  auto* dual = certify->add_subcommand("dual", "derivative-at-1 functional on D_alpha of the disc");
  dual->add_option("--alpha", alpha)->required();
  dual->add_option("--j", j)->required()->check(CLI::NonNegativeNumber);
  dual->add_option("--g", g_arg)->required();
  dual->add_option("--h", h_arg)->required();
  auto* en = certify->add_subcommand("energy", "finite-energy cube measure on Z(f) in H^2_d");
  en->add_option("--f", f_arg)->required();
  en->add_option("--cube", cube_arg, "{\"type\": \"torus\"|\"sphere\", \"k\", \"d\", \"a\"?}")->required();
  en->add_option("--scale", scale)->check(CLI::PositiveNumber);
  en->add_option("--nodes", nodes)->check(CLI::PositiveNumber);

  auto* lemma = app.add_subcommand("verify-lemma", "run a registered quantitative check");
  lemma->add_option("name", name, "check name (use --list)");
  lemma->add_option("--params", params_arg, "JSON parameter overrides");
  bool list = false;
  lemma->add_flag("--list", list);

  auto* run = app.add_subcommand("run", "run a builtin experiment or a spec file");
  run->add_option("name", name, "builtin name");
  run->add_option("--spec", spec_arg, "experiment spec (inline JSON or file)");
  run->add_option("--out", out_dir, "output directory for CSV and manifest");
  run->add_option("--budget", budget, "wall-clock budget in seconds");
  run->add_flag("--runtime", runtime);
  run->add_flag("--list", list);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kInputError;
  }
  if (threads > 0) setenv("BESOV_THREADS", std::to_string(threads).c_str(), 1);

  try {
    std::cout.precision(17);
    if (norm->parsed()) {
      auto space = load_space(space_arg);
      auto f = load_poly(f_arg, "--f", space.dimension());
      require_dim(f, space, "--f");
      Json out{{"space", space.describe()}};
      if (space.has_exact_weights()) {
        auto q = norm_sq(space, f);
        out["norm_sq_exact"] = q.get_str();
        out["norm_sq"] = q.get_d();
      } else {
        out["norm_sq"] = norm_sq(space, to_float(f));
      }
      std::cout << out.dump(2) << '\n';
    } else if (ip->parsed()) {
      auto space = load_space(space_arg);
      auto f = load_poly(f_arg, "--f", space.dimension());
      auto g = load_poly(g_arg, "--g", space.dimension());
      require_dim(f, space, "--f");
      require_dim(g, space, "--g");
      Json out;
      if (space.has_exact_weights()) {
        auto v = inner_product(space, f, g);
        out["exact"] = {v.re.get_str(), v.im.get_str()};
        out["value"] = {v.re.get_d(), v.im.get_d()};
      } else {
        auto v = inner_product(space, to_float(f), to_float(g));
        out["value"] = {v.real(), v.imag()};
      }
      std::cout << out.dump(2) << '\n';
    } else if (approx->parsed()) {
      auto space = load_space(space_arg);
      auto f = load_poly(f_arg, "--f", space.dimension());
      auto g = g_arg.empty() ? ExactPoly::constant(space.dimension(), GaussianRational(1))
                             : load_poly(g_arg, "--g", space.dimension());
      require_dim(f, space, "--f");
      require_dim(g, space, "--g");
      auto res = approximate(space, f, g, m, solve_options(mode));
      Json out{{"degree", res.degree},
               {"basis_ordering", res.basis_ordering},
               {"dist_sq", res.dist_sq},
               {"p", float_poly_to_json(res.p)},
               {"report", report_json(res.report)}};
      if (res.p_exact) out["p_exact"] = poly_to_json(*res.p_exact);
      if (res.dist_sq_exact) out["dist_sq_exact"] = res.dist_sq_exact->get_str();
      std::cout << out.dump(2) << '\n';
    } else if (profile->parsed()) {
      auto space = load_space(space_arg);
      auto f = load_poly(f_arg, "--f", space.dimension());
      require_dim(f, space, "--f");
      print_profile(cyclicity_profile(space, f, degree_list(degrees, max_degree), solve_options(mode)), runtime);
    } else if (hc->parsed()) {
      auto space = load_space(space_arg);
      auto phi = load_poly(phi_arg, "--phi", space.dimension());
      require_dim(phi, space, "--phi");
      print_profile(hc_profile(space, phi, n, degree_list(degrees, max_degree), solve_options(mode)).points, runtime);
    } else if (member->parsed()) {
      auto space = load_space(space_arg);
      auto h = load_poly(h_arg, "--h", space.dimension());
      auto f = load_poly(f_arg, "--f", space.dimension());
      require_dim(h, space, "--h");
      require_dim(f, space, "--f");
      print_profile(membership_profile(space, h, f, k, degree_list(degrees, max_degree), solve_options(mode)), runtime);
    } else if (embed->parsed()) {
      EmbeddingSpec es{parse_embedding_kind(embed_kind), k, d};
      es.validate();
      const auto da = SpaceSpec::drury_arveson(d);
      Json out{{"kind", embed_kind}, {"k", k}, {"d", d}};
      if (es.kind == EmbeddingKind::Tkd) {
        auto image = tau_compose(load_poly(f_arg, "--f", 1), k, d);
        out["image"] = image.exact ? poly_to_json(*image.exact) : float_poly_to_json(image.poly);
        out["image_exact"] = image.exact.has_value();
        out["norm_sq_H2d"] = norm_sq(da, image).get_str();
      } else if (es.kind == EmbeddingKind::Sk) {
        auto image = sum_squares_compose(load_poly(f_arg, "--f", 1), k, d);
        out["image"] = poly_to_json(image);
        out["norm_sq_H2d"] = norm_sq(da, image).get_str();
      } else {
        auto image = projection_lift(load_poly(f_arg, "--f", static_cast<std::size_t>(k)), d);
        out["image"] = poly_to_json(image);
        out["norm_sq_H2d"] = norm_sq(da, image).get_str();
      }
      std::cout << out.dump(2) << '\n';
    } else if (dual->parsed()) {
      auto cert = dual_lower_bound(SpaceSpec::alpha_scale(1, alpha), load_poly(g_arg, "--g", 1),
                                   load_poly(h_arg, "--h", 1), j);
      std::cout << cert.to_json().dump(2) << '\n';
      return verify_certificate(cert) ? kOk : kCheckFailed;
    } else if (en->parsed()) {
      CubeMeasure mu{CubeParametrization::from_json(load_json_arg(cube_arg)), scale, nodes};
      const auto space = SpaceSpec::drury_arveson(mu.phi.d());
      auto f = load_poly(f_arg, "--f", space.dimension());
      require_dim(f, space, "--f");
      auto cert = energy_lower_bound(space, to_float(f), mu);
      std::cout << cert.to_json().dump(2) << '\n';
      return verify_certificate(cert) ? kOk : kCheckFailed;
    } else if (lemma->parsed()) {
      if (list) {
        for (const auto& l : lemma_names()) std::cout << l << '\n';
        return kOk;
      }
      if (name.empty()) throw InvalidInput("verify-lemma: missing check name");
      auto report = verify_lemma(name, params_arg.empty() ? Json::object() : load_json_arg(params_arg));
      std::cout << report.to_json().dump(2) << '\n';
      return report.passed ? kOk : kCheckFailed;
    } else if (run->parsed()) {
      if (list) {
        for (const auto& b : builtin_names()) std::cout << b << '\n';
        return kOk;
      }
      if (name.empty() == spec_arg.empty()) throw InvalidInput("run: give exactly one of a builtin name or --spec");
      ExperimentSpec spec = name.empty() ? ExperimentSpec::from_json(load_json_arg(spec_arg)) : builtin_experiment(name);
      if (!out_dir.empty()) spec.output_dir = out_dir;
      if (budget > 0) spec.budget_seconds = budget;
      if (runtime) spec.include_runtime = true;
      auto res = run_experiment(spec);
      if (spec.output_dir.empty()) std::cout << res.csv;
      std::cerr << spec.name << ": " << (res.passed ? "checks passed" : "CHECK FAILED") << '\n';
      return res.passed ? kOk : kCheckFailed;
    }
  } catch (const InvalidInput& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInputError;
  } catch (const NotExact& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInputError;
  } catch (const Json::exception& e) {
    std::cerr << "error: malformed JSON: " << e.what() << '\n';
    return kInputError;
  }
  return kOk;
}
