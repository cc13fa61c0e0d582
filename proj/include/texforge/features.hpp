#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "texforge/glcm.hpp"

namespace texforge {

struct FeatureVector {
  double energy = 0.0;
  double contrast = 0.0;
  double homogeneity = 0.0;
  double entropy = 0.0;  // bits
  double correlation = 0.0;
};

namespace detail {

// Compensated sum; the normalization check must not drown in fp noise at L=256.
inline double kahan_sum(const std::vector<double>& xs) {
  double sum = 0.0, carry = 0.0;
  for (double x : xs) {
    double y = x - carry;
    double t = sum + y;
    carry = (t - sum) - y;
    sum = t;
  }
  return sum;
}

}  // namespace detail

/// Five Haralick-style statistics of a normalized GLCM.
/// Correlation of a degenerate (zero-variance) distribution is defined as 0.
inline FeatureVector extract_features(const GlcmProbabilities& p) {
  if (std::abs(detail::kahan_sum(p.values) - 1.0) > 1e-12)
    throw std::invalid_argument("extract_features: input is not normalized");

  const int n = p.levels;
  FeatureVector f;
  double mean_i = 0.0, mean_j = 0.0;
  double cross = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const double v = p.at(i, j);
      const double diff = static_cast<double>(i - j);
      f.energy += v * v;
      f.contrast += diff * diff * v;
      f.homogeneity += v / (1.0 + diff * diff);
      if (v > 0.0) f.entropy -= v * std::log2(v);
      mean_i += i * v;
      mean_j += j * v;
      cross += static_cast<double>(i) * j * v;
    }
  }
  double var_i = 0.0, var_j = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const double v = p.at(i, j);
      var_i += (i - mean_i) * (i - mean_i) * v;
      var_j += (j - mean_j) * (j - mean_j) * v;
    }
  }
  const double sigma = std::sqrt(var_i) * std::sqrt(var_j);
  f.correlation = sigma > 0.0 ? (cross - mean_i * mean_j) / sigma : 0.0;
  return f;
}

}  // namespace texforge
