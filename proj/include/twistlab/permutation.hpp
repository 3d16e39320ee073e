#pragma once

#include <string>
#include <vector>

#include "twistlab/errors.hpp"

namespace twistlab {

/// Permutation of {1, ..., d}. Text form is cycle notation: parenthesized
/// cycles of one-based indices separated by spaces or commas, fixed points
/// omissible, e.g. "(1 2 3 4)" or "(1 3)(2)" or "(1,2)(3)".
class Permutation {
 public:
  Permutation() = default;
  static Permutation identity(int degree);

  /// Parses cycle notation. The degree is the largest index mentioned, or
  /// min_degree if that is larger. Throws ParseError with the offending
  /// position.
  static Permutation parse(const std::string& text, int min_degree = 0);

  int degree() const { return static_cast<int>(img_.size()); }

  /// Image of i, one-based.
  int apply(int i) const { return img_[static_cast<size_t>(i) - 1]; }

  Permutation inverse() const;

  /// Composition: (p * q)(i) = p(q(i)).
  friend Permutation operator*(const Permutation& p, const Permutation& q);

  /// Same mapping extended by fixed points up to the given degree.
  Permutation extended(int degree) const;

  /// Cycles in canonical order (each starting at its smallest element,
  /// sorted by that element). Fixed points included when requested.
  std::vector<std::vector<int>> cycles(bool include_fixed = true) const;

  int cycle_count() const { return static_cast<int>(cycles(true).size()); }

  std::string cycle_string() const;

  bool operator==(const Permutation& o) const { return img_ == o.img_; }

 private:
  std::vector<int> img_;  // img_[i-1] = image of i
};

}  // namespace twistlab
