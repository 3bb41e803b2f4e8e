#include "besov/multi_index.hpp"

#include <charconv>
#include <numeric>

namespace besov {

namespace {

int checked_degree(const std::vector<int>& e) {
  int s = 0;
  for (int v : e) {
    if (v < 0) throw InvalidInput("multi-index entries must be non-negative");
    s += v;
  }
  return s;
}

}  // namespace

MultiIndex::MultiIndex(std::initializer_list<int> exps) : e_(exps), degree_(checked_degree(e_)) {}

MultiIndex::MultiIndex(std::vector<int> exps) : e_(std::move(exps)), degree_(checked_degree(e_)) {}

MultiIndex MultiIndex::unit(std::size_t dimension, std::size_t i, int power) {
  std::vector<int> e(dimension, 0);
  e.at(i) = power;
  return MultiIndex(std::move(e));
}

MultiIndex MultiIndex::operator+(const MultiIndex& o) const {
  if (o.size() != size()) throw InvalidInput("multi-index dimension mismatch");
  MultiIndex r = *this;
  for (std::size_t i = 0; i < e_.size(); ++i) r.e_[i] += o.e_[i];
  r.degree_ = degree_ + o.degree_;
  return r;
}

bool MultiIndex::try_subtract(const MultiIndex& o, MultiIndex& out) const {
  if (o.size() != size()) throw InvalidInput("multi-index dimension mismatch");
  out = *this;
  for (std::size_t i = 0; i < e_.size(); ++i) {
    out.e_[i] -= o.e_[i];
    if (out.e_[i] < 0) return false;
  }
  out.degree_ = degree_ - o.degree_;
  return true;
}

MultiIndex MultiIndex::resized(std::size_t dimension) const {
  std::vector<int> e(dimension, 0);
  for (std::size_t i = 0; i < e_.size(); ++i) {
    if (i < dimension) {
      e[i] = e_[i];
    } else if (e_[i] != 0) {
      throw InvalidInput("cannot drop a variable with non-zero exponent");
    }
  }
  return MultiIndex(std::move(e));
}

std::strong_ordering operator<=>(const MultiIndex& a, const MultiIndex& b) {
  if (auto c = a.degree_ <=> b.degree_; c != 0) return c;
  if (auto c = a.e_.size() <=> b.e_.size(); c != 0) return c;
  for (std::size_t i = 0; i < a.e_.size(); ++i) {
    if (a.e_[i] != b.e_[i]) return b.e_[i] <=> a.e_[i];
  }
  return std::strong_ordering::equal;
}

std::string MultiIndex::to_string() const {
  std::string s;
  for (std::size_t i = 0; i < e_.size(); ++i) {
    if (i) s += ',';
    s += std::to_string(e_[i]);
  }
  return s;
}

MultiIndex MultiIndex::parse(std::string_view text) {
  std::vector<int> e;
  std::size_t pos = 0;
  while (true) {
    std::size_t comma = text.find(',', pos);
    std::string_view part = text.substr(pos, comma == std::string_view::npos ? text.npos : comma - pos);
    while (!part.empty() && part.front() == ' ') part.remove_prefix(1);
    while (!part.empty() && part.back() == ' ') part.remove_suffix(1);
    int v = 0;
    auto [ptr, ec] = std::from_chars(part.data(), part.data() + part.size(), v);
    if (ec != std::errc() || ptr != part.data() + part.size() || part.empty()) {
      throw InvalidInput("malformed exponent string '" + std::string(text) + "'");
    }
    e.push_back(v);
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  return MultiIndex(std::move(e));
}

Rational factorial_ratio(const MultiIndex& beta) {
  BigInt num = 1;
  for (int v : beta.exponents()) num *= factorial(static_cast<unsigned>(v));
  return make_rational(num, factorial(static_cast<unsigned>(beta.degree())));
}

double factorial_ratio_double(const MultiIndex& beta) {
  // beta!/|beta|! = prod over the build-up of |beta|! of j / t, each factor <= 1.
  double r = 1.0;
  int t = 0;
  for (int v : beta.exponents()) {
    for (int j = 1; j <= v; ++j) {
      ++t;
      r *= static_cast<double>(j) / static_cast<double>(t);
    }
  }
  return r;
}

namespace {

void enumerate_degree(std::size_t dimension, int n, std::size_t pos, std::vector<int>& cur,
                      std::vector<MultiIndex>& out) {
  if (pos + 1 == dimension) {
    cur[pos] = n;
    out.emplace_back(cur);
    return;
  }
  for (int v = n; v >= 0; --v) {
    cur[pos] = v;
    enumerate_degree(dimension, n - v, pos + 1, cur, out);
  }
}

}  // namespace

std::vector<MultiIndex> indices_of_degree(std::size_t dimension, int n) {
  if (dimension == 0) throw InvalidInput("dimension must be positive");
  std::vector<MultiIndex> out;
  if (n < 0) return out;
  std::vector<int> cur(dimension, 0);
  enumerate_degree(dimension, n, 0, cur, out);
  return out;
}

std::vector<MultiIndex> graded_basis(std::size_t dimension, int max_degree) {
  std::vector<MultiIndex> out;
  for (int n = 0; n <= max_degree; ++n) {
    auto block = indices_of_degree(dimension, n);
    out.insert(out.end(), block.begin(), block.end());
  }
  return out;
}

}  // namespace besov
