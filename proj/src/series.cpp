#include "besov/series.hpp"

#include <algorithm>
#include <limits>

#include <Eigen/Eigenvalues>

namespace besov {

namespace {

// |q(t)| / sum |a_i| |t|^i, the componentwise backward error at t.
double relative_residual(const std::vector<Complex>& a, Complex t) {
  Complex v = 0.0;
  double scale = 0.0;
  double at = std::abs(t);
  for (std::size_t n = a.size(); n-- > 0;) {
    v = v * t + a[n];
    scale = scale * at + std::abs(a[n]);
  }
  return scale > 0.0 ? std::abs(v) / scale : std::abs(v);
}

Complex newton_polish(const std::vector<Complex>& a, Complex t) {
  for (int it = 0; it < 8; ++it) {
    Complex v = 0.0, dv = 0.0;
    for (std::size_t n = a.size(); n-- > 0;) {
      dv = dv * t + v;
      v = v * t + a[n];
    }
    if (dv == Complex(0.0)) break;
    Complex next = t - v / dv;
    if (relative_residual(a, next) >= relative_residual(a, t)) break;
    t = next;
  }
  return t;
}

// True when the Taylor coefficients q^(j)(c)/j!, j < order, all vanish up to
// their componentwise rounding scale (repeated synthetic division).
bool vanishes_to_order(const std::vector<Complex>& a, Complex c, int order) {
  std::vector<Complex> b = a;
  std::vector<double> s(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) s[i] = std::abs(a[i]);
  const double ac = std::abs(c);
  for (int j = 0; j < order; ++j) {
    const std::size_t n = b.size();
    if (n == 0) return false;
    for (std::size_t i = n - 1; i-- > 0;) {
      b[i] += b[i + 1] * c;
      s[i] += s[i + 1] * ac;
    }
    if (std::abs(b[0]) > 1e-10 * s[0]) return false;
    b.erase(b.begin());
    s.erase(s.begin());
  }
  return true;
}

}  // namespace

RootReport roots_1d(const Series1D<Complex>& q) {
  std::vector<Complex> a = q.coefficients();
  double norm1 = 0.0;
  for (const auto& c : a) norm1 = std::max(norm1, std::abs(c));
  if (norm1 == 0.0) throw InvalidInput("roots_1d: polynomial is identically zero");
  while (a.size() > 1 && std::abs(a.back()) <= 1e-14 * norm1) a.pop_back();

  RootReport report;
  const int deg = static_cast<int>(a.size()) - 1;
  if (deg == 0) {
    report.validated = true;
    return report;
  }

  std::vector<Complex> raw;
  raw.reserve(deg);
  // Roots at the origin are split off exactly.
  std::size_t low = 0;
  while (low < a.size() && std::abs(a[low]) <= 1e-14 * norm1) ++low;
  for (std::size_t i = 0; i < low; ++i) raw.emplace_back(0.0);
  std::vector<Complex> b(a.begin() + static_cast<std::ptrdiff_t>(low), a.end());
  const int m = static_cast<int>(b.size()) - 1;
  if (m > 0) {
    Eigen::MatrixXcd companion = Eigen::MatrixXcd::Zero(m, m);
    for (int i = 1; i < m; ++i) companion(i, i - 1) = 1.0;
    for (int i = 0; i < m; ++i) companion(i, m - 1) = -b[i] / b[m];
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(companion, false);
    if (solver.info() != Eigen::Success) throw std::runtime_error("roots_1d: eigenvalue iteration failed");
    for (int i = 0; i < m; ++i) raw.push_back(solver.eigenvalues()[i]);
  }

  std::vector<bool> used(raw.size(), false);
  for (std::size_t i = 0; i < raw.size(); ++i) {
    if (used[i]) continue;
    Complex sum = raw[i];
    int mult = 1;
    used[i] = true;
    for (std::size_t j = i + 1; j < raw.size(); ++j) {
      if (!used[j] && std::abs(raw[j] - raw[i]) < 1e-7) {
        used[j] = true;
        sum += raw[j];
        ++mult;
      }
    }
    report.roots.push_back({sum / static_cast<double>(mult), mult});
  }

  // A root of multiplicity m is perturbed by about eps^(1/m), beyond the
  // primary clustering radius. Merge nearby clusters when q vanishes to the
  // combined order at their centroid.
  for (bool merged = true; merged;) {
    merged = false;
    auto& rs = report.roots;
    for (std::size_t i = 0; i < rs.size() && !merged; ++i) {
      std::vector<std::size_t> near;
      for (std::size_t j = 0; j < rs.size(); ++j)
        if (j != i && std::abs(rs[i].value - rs[j].value) <= 1e-3 * std::max(1.0, std::abs(rs[i].value)))
          near.push_back(j);
      std::sort(near.begin(), near.end(), [&](std::size_t x, std::size_t y) {
        return std::abs(rs[x].value - rs[i].value) < std::abs(rs[y].value - rs[i].value);
      });
      // largest group first: nearest k neighbours together with root i
      for (std::size_t k = near.size(); k >= 1 && !merged; --k) {
        int mult = rs[i].multiplicity;
        Complex c = rs[i].value * static_cast<double>(rs[i].multiplicity);
        for (std::size_t t = 0; t < k; ++t) {
          mult += rs[near[t]].multiplicity;
          c += rs[near[t]].value * static_cast<double>(rs[near[t]].multiplicity);
        }
        c /= static_cast<double>(mult);
        if (!vanishes_to_order(a, c, mult)) continue;
        std::vector<std::size_t> drop(near.begin(), near.begin() + static_cast<std::ptrdiff_t>(k));
        rs[i] = {c, mult};
        std::sort(drop.rbegin(), drop.rend());
        for (auto j : drop) rs.erase(rs.begin() + static_cast<std::ptrdiff_t>(j));
        merged = true;
      }
    }
  }

  // Newton is only quadratically convergent at simple roots; multiple roots
  // keep their cluster centroid, which is far more accurate than any member.
  for (auto& r : report.roots) {
    if (r.multiplicity == 1) r.value = newton_polish(a, r.value);
    report.max_residual = std::max(report.max_residual, relative_residual(a, r.value));
  }
  report.validated = report.max_residual < 1e-9;
  return report;
}

double min_root_modulus(const RootReport& roots) {
  double m = std::numeric_limits<double>::infinity();
  for (const auto& r : roots.roots) m = std::min(m, std::abs(r.value));
  return m;
}

bool is_outer(const RootReport& roots, double tolerance) { return min_root_modulus(roots) >= 1.0 - tolerance; }

}  // namespace besov
