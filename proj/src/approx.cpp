#include "besov/approx.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>
#include <numeric>

#include <Eigen/Eigenvalues>

#include "besov/parallel.hpp"

namespace besov {

namespace {

std::vector<std::vector<int>> components(const std::vector<std::vector<std::pair<int, int>>>& edges, std::size_t n) {
  std::vector<int> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (const auto& row : edges)
    for (auto [i, j] : row) {
      int a = find(i), b = find(j);
      if (a != b) parent[std::max(a, b)] = std::min(a, b);
    }
  std::map<int, std::vector<int>> groups;
  for (std::size_t i = 0; i < n; ++i) groups[find(static_cast<int>(i))].push_back(static_cast<int>(i));
  std::vector<std::vector<int>> out;
  out.reserve(groups.size());
  for (auto& [root, members] : groups) out.push_back(std::move(members));
  return out;
}

template <class C, class NormFn>
GramSystem<C> assemble_impl(const SpaceSpec& space, const SparsePoly<C>& f, const SparsePoly<C>& g, int m,
                            NormFn&& mono_norm) {
  if (f.is_zero()) throw InvalidInput("generator f must be non-zero");
  if (m < 0) throw InvalidInput("degree must be non-negative");
  const auto d = static_cast<std::size_t>(space.dimension());
  if (f.dimension() != d || g.dimension() != d) throw InvalidInput("polynomial dimension does not match the space");

  GramSystem<C> sys{space, f, g, m, graded_basis(d, m), {}, {}, C(0), {}};
  const std::size_t n = sys.basis.size();
  std::map<MultiIndex, int> index;
  for (std::size_t i = 0; i < n; ++i) index.emplace(sys.basis[i], static_cast<int>(i));
  std::vector<std::pair<MultiIndex, C>> fs(f.terms().begin(), f.terms().end());

  sys.rows.resize(n);
  sys.c.assign(n, C(0));
  parallel_for(n, [&](std::size_t i) {
    const MultiIndex& beta = sys.basis[i];
    std::map<int, C> acc;
    C ci(0);
    for (const auto& [b, fb] : fs) {
      const MultiIndex shifted = beta + b;
      const C w = mono_norm(shifted);
      const C fbw = scalar::conj(fb) * w;
      auto gt = g.terms().find(shifted);
      if (gt != g.terms().end()) ci += gt->second * fbw;
      for (const auto& [a, fa] : fs) {
        MultiIndex gamma;
        if (!shifted.try_subtract(a, gamma) || gamma.degree() > m) continue;
        acc[index.at(gamma)] += fa * fbw;
      }
    }
    for (auto& [j, v] : acc)
      if (!is_zero(v)) sys.rows[i].emplace_back(j, v);
    sys.c[i] = ci;
  });

  std::vector<std::vector<std::pair<int, int>>> edges(n);
  for (std::size_t i = 0; i < n; ++i)
    for (const auto& [j, v] : sys.rows[i]) edges[i].emplace_back(static_cast<int>(i), j);
  sys.blocks = components(edges, n);
  return sys;
}

template <class T, class C>
T convert(const C& x) {
  if constexpr (std::is_same_v<C, GaussianRational>) return scalar::from_exact<T>(x);
  else return scalar::from_complex<T>(x);
}

template <class C>
bool block_is_real(const GramSystem<C>& sys, const std::vector<int>& idx) {
  auto real = [](const C& v) {
    if constexpr (std::is_same_v<C, GaussianRational>) return v.is_real();
    else return v.imag() == 0.0;
  };
  for (int i : idx) {
    if (!real(sys.c[i])) return false;
    for (const auto& [j, v] : sys.rows[i])
      if (!real(v)) return false;
  }
  return true;
}

template <class T>
struct BlockSolve {
  bool ok = false;
  std::vector<T> a;  // unscaled solution
  double min_pivot = 0.0;
  double max_pivot = 0.0;
  double ratio() const { return max_pivot > 0.0 ? min_pivot / max_pivot : 0.0; }
};

template <class T, class C>
BlockSolve<T> solve_block(const GramSystem<C>& sys, const std::vector<int>& idx) {
  constexpr bool exact = std::is_same_v<T, GaussianRational>;
  const std::size_t n = idx.size();
  std::map<int, std::size_t> local;
  for (std::size_t k = 0; k < n; ++k) local.emplace(idx[k], k);

  DenseMatrix<T> mat(n);
  std::vector<T> rhs(n);
  for (std::size_t k = 0; k < n; ++k) {
    for (const auto& [j, v] : sys.rows[idx[k]]) mat(k, local.at(j)) = convert<T>(v);
    rhs[k] = convert<T>(sys.c[idx[k]]);
  }
  // Diagonal pre-scaling on the float paths: unit diagonal.
  std::vector<T> s(n, T(1));
  if constexpr (!exact) {
    for (std::size_t k = 0; k < n; ++k) s[k] = T(1) / std::sqrt(T(scalar::real(mat(k, k))));
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) mat(i, j) *= s[i] * s[j];
      rhs[i] *= s[i];
    }
  }
  HermitianLDL<T> ldl(std::move(mat));
  BlockSolve<T> out;
  out.min_pivot = ldl.min_pivot();
  out.max_pivot = ldl.max_pivot();
  out.ok = ldl.ok();
  if (!out.ok) return out;
  out.a = ldl.solve(std::move(rhs));
  for (std::size_t k = 0; k < n; ++k) out.a[k] = out.a[k] * s[k];
  return out;
}

// conj(c)^T a over one block, as a real number in the block's precision.
template <class T, class C>
long double block_gain(const GramSystem<C>& sys, const std::vector<int>& idx, const std::vector<T>& a) {
  T acc(0);
  for (std::size_t k = 0; k < idx.size(); ++k) acc += scalar::conj(convert<T>(sys.c[idx[k]])) * a[k];
  if constexpr (std::is_same_v<T, GaussianRational>) return static_cast<long double>(acc.re.get_d());
  else return static_cast<long double>(scalar::real(acc));
}

template <class T>
Complex to_cplx(const T& x) {
  if constexpr (std::is_same_v<T, GaussianRational>) return x.to_complex();
  else if constexpr (scalar::is_complex<T>::value) return Complex(static_cast<double>(x.real()), static_cast<double>(x.imag()));
  else return Complex(static_cast<double>(x), 0.0);
}

template <class C>
ApproximantResult solve_impl(const GramSystem<C>& sys, const SolveOptions& opts) {
  constexpr bool exact_system = std::is_same_v<C, GaussianRational>;
  if (opts.mode == SolveMode::Exact && !exact_system)
    throw NotExact("exact solve requested for a system with floating-point entries");

  ApproximantResult res;
  res.degree = sys.degree;
  res.basis_ordering = std::string(kBasisOrdering);
  res.p = FloatPoly(sys.f.dimension());
  res.report.system_size = static_cast<int>(sys.basis.size());
  res.report.min_pivot = std::numeric_limits<double>::infinity();
  ExactPoly p_exact(sys.f.dimension());
  Rational gain_exact(0);
  long double gain = 0.0L;

  auto note = [&](double min_pivot, double ratio, Precision prec, std::size_t size) {
    res.report.min_pivot = std::min(res.report.min_pivot, min_pivot);
    res.report.pivot_ratio = std::min(res.report.pivot_ratio, ratio);
    res.report.precision = std::max(res.report.precision, prec);
    res.report.blocks_solved += 1;
    res.report.largest_block = std::max(res.report.largest_block, static_cast<int>(size));
  };
  auto emit = [&](const std::vector<int>& idx, const auto& a) {
    for (std::size_t k = 0; k < idx.size(); ++k) res.p.add_term(sys.basis[idx[k]], to_cplx(a[k]));
  };

  for (const auto& idx : sys.blocks) {
    bool active = false;
    for (int i : idx) active = active || !is_zero(sys.c[i]);
    if (!active) continue;  // c vanishes on the block, so does the solution
    const bool real = block_is_real(sys, idx);

    if constexpr (exact_system) {
      auto solve_exact = [&] {
        auto r = solve_block<GaussianRational>(sys, idx);
        if (!r.ok) throw FactorizationError("Gram matrix is not positive definite", r.min_pivot);
        return r;
      };
      if (opts.mode == SolveMode::Exact) {
        auto r = solve_exact();
        note(r.min_pivot, r.ratio(), Precision::Exact, idx.size());
        emit(idx, r.a);
        for (std::size_t k = 0; k < idx.size(); ++k) p_exact.add_term(sys.basis[idx[k]], r.a[k]);
        Rational g(0);
        for (std::size_t k = 0; k < idx.size(); ++k) g += (conj(sys.c[idx[k]]) * r.a[k]).re;
        gain_exact += g;
        continue;
      }
    }

    auto attempt = [&](auto tag) {
      using T = decltype(tag);
      return solve_block<T>(sys, idx);
    };
    auto finish = [&](const auto& r, Precision prec) {
      note(r.min_pivot, r.ratio(), prec, idx.size());
      emit(idx, r.a);
      gain += block_gain(sys, idx, r.a);
    };

    // double
    bool done = false;
    auto try_double = [&](auto tag) {
      auto r = attempt(tag);
      if (r.ok && (r.ratio() >= opts.pivot_tolerance || opts.mode == SolveMode::Float)) {
        if (r.ratio() < opts.pivot_tolerance) res.report.flagged = true;
        finish(r, Precision::Double);
        done = true;
      } else if (opts.mode == SolveMode::Float) {
        throw FactorizationError("Gram block is numerically singular in double precision", r.min_pivot);
      }
      return r;
    };
    auto rd_min = real ? try_double(double{}).min_pivot : try_double(Complex{}).min_pivot;
    if (done) continue;
    res.report.flagged = true;

    // long double
    auto try_long = [&](auto tag) {
      auto r = attempt(tag);
      if (r.ok && r.ratio() >= opts.pivot_tolerance * 1e-3) {
        finish(r, Precision::LongDouble);
        done = true;
      }
      return r;
    };
    BlockSolve<std::complex<long double>> lc;
    BlockSolve<long double> lr;
    if (real) lr = try_long(static_cast<long double>(0));
    else lc = try_long(std::complex<long double>{});
    if (done) continue;

    if constexpr (exact_system) {
      if (idx.size() <= opts.exact_limit) {
        auto r = solve_block<GaussianRational>(sys, idx);
        if (!r.ok) throw FactorizationError("Gram matrix is not positive definite", r.min_pivot);
        finish(r, Precision::Exact);
        continue;
      }
    }
    // Nothing better available: keep the extended-precision answer if it exists.
    if (real && lr.ok) finish(lr, Precision::LongDouble);
    else if (!real && lc.ok) finish(lc, Precision::LongDouble);
    else throw FactorizationError("Gram block is numerically singular", std::min(rd_min, real ? lr.min_pivot : lc.min_pivot));
  }

  if (res.report.blocks_solved == 0) res.report.min_pivot = std::numeric_limits<double>::quiet_NaN();
  if constexpr (exact_system) {
    if (opts.mode == SolveMode::Exact) {
      Rational dist = sys.g_norm_sq.re - gain_exact;
      res.dist_sq_exact = dist;
      res.dist_sq = dist.get_d();
      res.p_exact = std::move(p_exact);
      return res;
    }
  }
  const long double gn = static_cast<long double>(to_complex(sys.g_norm_sq).real());
  long double dist = gn - gain;
  if (dist < 0.0L) {
    if (dist >= -1e-12L * std::max(1.0L, gn)) dist = 0.0L;
    else res.report.flagged = true;
  }
  res.dist_sq = static_cast<double>(dist);
  return res;
}

double elapsed_ms(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
}

std::vector<ProfilePoint> run_profile(const SpaceSpec& space, const ExactPoly& target, const ExactPoly& generator,
                                      const std::vector<int>& degrees, const SolveOptions& opts) {
  std::vector<ProfilePoint> out(degrees.size());
  parallel_for(degrees.size(), [&](std::size_t i) {
    auto t0 = std::chrono::steady_clock::now();
    auto r = approximate(space, generator, target, degrees[i], opts);
    out[i] = ProfilePoint{degrees[i], r.dist_sq, r.dist_sq_exact, r.report, elapsed_ms(t0)};
  });
  return out;
}

}  // namespace

template <class C>
C GramSystem<C>::entry(int i, int j) const {
  const auto& row = rows.at(static_cast<std::size_t>(i));
  auto it = std::lower_bound(row.begin(), row.end(), j, [](const auto& e, int x) { return e.first < x; });
  return it != row.end() && it->first == j ? it->second : C(0);
}

template <class C>
DenseMatrix<C> GramSystem<C>::dense() const {
  DenseMatrix<C> m(basis.size());
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (const auto& [j, v] : rows[i]) m(i, static_cast<std::size_t>(j)) = v;
  return m;
}

template struct GramSystem<GaussianRational>;
template struct GramSystem<Complex>;

ExactGramSystem assemble_gram(const SpaceSpec& space, const ExactPoly& f, const ExactPoly& g, int m) {
  if (!space.has_exact_weights()) throw NotExact("space " + space.describe() + " has no exact weights");
  auto w = space.weights(m + std::max(f.degree(), 0) + 1);
  auto sys = assemble_impl(space, f, g, m, [&w](const MultiIndex& beta) {
    return GaussianRational(Rational(w->exact[beta.degree()] * factorial_ratio(beta)));
  });
  sys.g_norm_sq = GaussianRational(norm_sq(space, g));
  return sys;
}

FloatGramSystem assemble_gram(const SpaceSpec& space, const FloatPoly& f, const FloatPoly& g, int m) {
  auto w = space.weights(m + std::max(f.degree(), 0) + 1);
  auto sys = assemble_impl(space, f, g, m, [&w](const MultiIndex& beta) {
    return Complex(w->values[beta.degree()] * factorial_ratio_double(beta), 0.0);
  });
  sys.g_norm_sq = Complex(norm_sq(space, g), 0.0);
  return sys;
}

std::string to_string(Precision p) {
  switch (p) {
    case Precision::Double: return "double";
    case Precision::LongDouble: return "long-double";
    case Precision::Exact: return "exact";
  }
  return "?";
}

ApproximantResult optimal_approximant(const ExactGramSystem& sys, const SolveOptions& opts) {
  return solve_impl(sys, opts);
}
ApproximantResult optimal_approximant(const FloatGramSystem& sys, const SolveOptions& opts) {
  return solve_impl(sys, opts);
}

ApproximantResult approximate(const SpaceSpec& space, const ExactPoly& f, const ExactPoly& g, int m,
                              const SolveOptions& opts) {
  if (space.has_exact_weights()) return optimal_approximant(assemble_gram(space, f, g, m), opts);
  return optimal_approximant(assemble_gram(space, to_float(f), to_float(g), m), opts);
}

ApproximantResult approximate(const SpaceSpec& space, const FloatPoly& f, const FloatPoly& g, int m,
                              const SolveOptions& opts) {
  return optimal_approximant(assemble_gram(space, f, g, m), opts);
}

std::vector<ProfilePoint> cyclicity_profile(const SpaceSpec& space, const ExactPoly& f, const std::vector<int>& degrees,
                                            const SolveOptions& opts) {
  return run_profile(space, ExactPoly::constant(f.dimension(), GaussianRational(1)), f, degrees, opts);
}

HcProfile hc_profile(const SpaceSpec& space, const ExactPoly& phi, int n, const std::vector<int>& degrees,
                     const SolveOptions& opts) {
  if (n < 0) throw InvalidInput("hc_profile needs n >= 0");
  if (phi.is_zero()) throw InvalidInput("phi must be non-zero");
  return HcProfile{phi, n, run_profile(space, pow(phi, n), pow(phi, n + 1), degrees, opts)};
}

std::vector<ProfilePoint> membership_profile(const SpaceSpec& space, const ExactPoly& h, const ExactPoly& f, int k,
                                             const std::vector<int>& degrees, const SolveOptions& opts) {
  if (k < 1) throw InvalidInput("membership_profile needs k >= 1");
  if (f.is_zero()) throw InvalidInput("generator f must be non-zero");
  return run_profile(space, h, pow(f, k), degrees, opts);
}

double finite_section_mult_bound(const SpaceSpec& space, const FloatPoly& phi, int m) {
  auto sys = assemble_gram(space, phi, phi, m);
  std::vector<double> inv_norm(sys.basis.size());
  for (std::size_t i = 0; i < sys.basis.size(); ++i) inv_norm[i] = 1.0 / std::sqrt(monomial_norm_sq(space, sys.basis[i]));
  double best = 0.0;
  for (const auto& idx : sys.blocks) {
    const auto n = static_cast<Eigen::Index>(idx.size());
    std::map<int, Eigen::Index> local;
    for (Eigen::Index k = 0; k < n; ++k) local.emplace(idx[k], k);
    Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(n, n);
    for (Eigen::Index k = 0; k < n; ++k)
      for (const auto& [j, v] : sys.rows[idx[k]]) h(k, local.at(j)) = v * inv_norm[idx[k]] * inv_norm[j];
    double top;
    if (block_is_real(sys, idx)) {
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h.real(), Eigen::EigenvaluesOnly);
      top = es.eigenvalues().maxCoeff();
    } else {
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h, Eigen::EigenvaluesOnly);
      top = es.eigenvalues().maxCoeff();
    }
    best = std::max(best, top);
  }
  return std::sqrt(best);
}

std::vector<double> degree_blocks(const SpaceSpec& space, const FloatPoly& F, int M) {
  auto w = space.weights(M);
  std::vector<long double> b(static_cast<std::size_t>(M) + 1, 0.0L);
  for (const auto& [beta, c] : F.terms()) {
    if (beta.degree() > M) continue;
    b[beta.degree()] += static_cast<long double>(std::norm(c)) * w->values[beta.degree()] * factorial_ratio_double(beta);
  }
  return {b.begin(), b.end()};
}

RatioSweepResult ratio_norm_sweep(const SpaceSpec& space, const FloatPoly& p, int s, int k,
                                  const std::vector<double>& r_grid, const std::vector<int>& M_grid,
                                  const RatioSweepOptions& opts) {
  if (s < 0 || k < 0) throw InvalidInput("ratio sweep needs s, k >= 0");
  if (is_zero(p.constant_term())) throw InvalidInput("ratio sweep needs p(0) != 0");
  if (static_cast<int>(p.dimension()) != space.dimension()) throw InvalidInput("polynomial dimension does not match the space");
  for (double r : r_grid)
    if (!(r >= 0.0 && r < 1.0)) throw InvalidInput("dilation radii must lie in [0, 1)");

  const FloatPoly numerator = pow(p, s + k);

  auto evaluate_row = [&](double r, int M) {
    FloatPoly inv = series_invert(dilate(p, r), M);
    FloatPoly F = FloatPoly::constant(p.dimension(), Complex(1.0));
    for (int i = 0; i < s; ++i) F = FloatPoly::multiply(F, inv, M);
    F = FloatPoly::multiply(numerator, F, M);
    auto b = degree_blocks(space, F, M);
    long double total = 0.0L;
    for (double v : b) total += v;
    // top of the series: max of the last two blocks guards against parity gaps
    auto top = [&](int n) { return std::max(b[n], n > 0 ? b[n - 1] : 0.0); };
    const double last = top(M);
    double tail = 0.0;
    if (last > 0.0) {
      const int w = std::max(1, M / 8);
      const double prev = top(std::max(0, M - w));
      const double rho = prev > 0.0 ? std::pow(last / prev, 1.0 / w) : std::numeric_limits<double>::infinity();
      tail = rho < 1.0 ? last * rho / (1.0 - rho) : std::numeric_limits<double>::infinity();
    }
    RatioSweepRow row;
    row.r = r;
    row.M = M;
    row.norm_sq = static_cast<double>(total);
    row.last_block_rel = total > 0 ? last / static_cast<double>(total) : 0.0;
    row.tail_rel = total > 0 ? tail / static_cast<double>(total) : 0.0;
    row.accepted = row.last_block_rel < opts.last_block_tolerance && row.tail_rel < opts.tail_tolerance;
    return row;
  };

  RatioSweepResult out;
  std::vector<std::vector<RatioSweepRow>> per_r(r_grid.size());
  parallel_for(r_grid.size(), [&](std::size_t i) {
    if (!M_grid.empty()) {
      for (int M : M_grid) per_r[i].push_back(evaluate_row(r_grid[i], M));
      return;
    }
    for (int M = opts.adaptive_start;; M *= 2) {
      M = std::min(M, opts.adaptive_max);
      per_r[i].push_back(evaluate_row(r_grid[i], M));
      if (per_r[i].back().accepted || M >= opts.adaptive_max) break;
    }
  });
  for (auto& rows : per_r) {
    if (rows.empty()) continue;
    auto it = std::find_if(rows.begin(), rows.end(), [](const RatioSweepRow& r) { return r.accepted; });
    const RatioSweepRow& chosen = it != rows.end() ? *it : rows.back();
    out.all_converged = out.all_converged && chosen.accepted;
    out.accepted.push_back(chosen);
    out.sup_norm_sq = std::max(out.sup_norm_sq, chosen.norm_sq);
    out.rows.insert(out.rows.end(), rows.begin(), rows.end());
  }
  return out;
}

}  // namespace besov
