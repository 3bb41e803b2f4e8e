#pragma once

#include <compare>
#include <cstddef>
#include <initializer_list>
#include <string>
#include <string_view>
#include <vector>

#include "besov/rational.hpp"

namespace besov {

/// Exponent vector (beta_1, ..., beta_d) of a monomial z^beta.
///
/// Ordering is graded lexicographic: total degree ascending, then exponents
/// compared left to right with the larger leading exponent first, so that
/// 1 < z1 < z2 < z1^2 < z1 z2 < z2^2 < ...
class MultiIndex {
 public:
  MultiIndex() = default;
  explicit MultiIndex(std::size_t dimension) : e_(dimension, 0) {}
  MultiIndex(std::initializer_list<int> exps);
  explicit MultiIndex(std::vector<int> exps);

  static MultiIndex unit(std::size_t dimension, std::size_t i, int power = 1);

  std::size_t size() const { return e_.size(); }
  int operator[](std::size_t i) const { return e_[i]; }
  const std::vector<int>& exponents() const { return e_; }
  int degree() const { return degree_; }

  MultiIndex operator+(const MultiIndex& o) const;
  /// Componentwise difference; false if some component would go negative.
  bool try_subtract(const MultiIndex& o, MultiIndex& out) const;
  /// Pads with zeros (or truncates zero entries) to a new dimension.
  MultiIndex resized(std::size_t dimension) const;

  friend bool operator==(const MultiIndex& a, const MultiIndex& b) { return a.e_ == b.e_; }
  friend std::strong_ordering operator<=>(const MultiIndex& a, const MultiIndex& b);

  /// "e1,e2,...,ed"
  std::string to_string() const;
  static MultiIndex parse(std::string_view text);

 private:
  std::vector<int> e_;
  int degree_ = 0;
};

/// beta! / |beta|!, exact.
Rational factorial_ratio(const MultiIndex& beta);
/// beta! / |beta|! in double precision, computed as a running product of
/// factors <= 1 so that large degrees do not overflow.
double factorial_ratio_double(const MultiIndex& beta);

/// All multi-indices of the given dimension with degree exactly n, in
/// graded-lex order.
std::vector<MultiIndex> indices_of_degree(std::size_t dimension, int n);
/// All multi-indices with degree <= max_degree, graded-lex order.
std::vector<MultiIndex> graded_basis(std::size_t dimension, int max_degree);

inline constexpr std::string_view kBasisOrdering = "graded-lex (degree ascending, leading exponent descending)";

}  // namespace besov
