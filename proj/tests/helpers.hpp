#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "twistlab/quat.hpp"
#include "twistlab/rng.hpp"

namespace testutil {

// Two-sample Kolmogorov-Smirnov distance.
inline double ks_distance(std::vector<double> u, std::vector<double> v) {
  std::sort(u.begin(), u.end());
  std::sort(v.begin(), v.end());
  size_t i = 0, j = 0;
  double d = 0.0;
  while (i < u.size() && j < v.size()) {
    if (u[i] <= v[j]) {
      ++i;
    } else {
      ++j;
    }
    double fu = static_cast<double>(i) / static_cast<double>(u.size());
    double fv = static_cast<double>(j) / static_cast<double>(v.size());
    d = std::max(d, std::abs(fu - fv));
  }
  return d;
}

// Rank of a set of vectors by modified Gram-Schmidt with pivoting;
// independent of the Eigen SVD path used by the library.
inline int gram_schmidt_rank(std::vector<std::vector<double>> vecs, double tol = 1e-9) {
  int rank = 0;
  const size_t dim = vecs.empty() ? 0 : vecs[0].size();
  std::vector<std::vector<double>> basis;
  for (auto& v : vecs) {
    for (const auto& b : basis) {
      double dot = 0.0;
      for (size_t k = 0; k < dim; ++k) dot += v[k] * b[k];
      for (size_t k = 0; k < dim; ++k) v[k] -= dot * b[k];
    }
    double norm = 0.0;
    for (size_t k = 0; k < dim; ++k) norm += v[k] * v[k];
    norm = std::sqrt(norm);
    if (norm > tol) {
      for (size_t k = 0; k < dim; ++k) v[k] /= norm;
      basis.push_back(v);
      ++rank;
    }
  }
  return rank;
}

inline double quat_distance(const twistlab::Quat& a, const twistlab::Quat& b) {
  return (a - b).norm();
}

}  // namespace testutil
