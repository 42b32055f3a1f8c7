#pragma once

// Plain two-pass summaries shared by the population and sample code paths so
// that a census sample reproduces population values bit-for-bit.

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

namespace tpcorr::detail {

inline double mean(std::span<const double> v) {
  double sum = 0.0;
  for (double a : v) sum += a;
  return sum / static_cast<double>(v.size());
}

// Divisor n-1.
inline double variance(std::span<const double> v, double centre) {
  double sum = 0.0;
  for (double a : v) sum += (a - centre) * (a - centre);
  return sum / static_cast<double>(v.size() - 1);
}

// Divisor n-1.
inline double covariance(std::span<const double> a, std::span<const double> b, double ca, double cb) {
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) sum += (a[i] - ca) * (b[i] - cb);
  return sum / static_cast<double>(a.size() - 1);
}

inline double correlation(double cov, double var_a, double var_b) {
  double r = cov / std::sqrt(var_a * var_b);
  // Rounding can push |r| a hair past one on exactly collinear data.
  if (r > 1.0) r = 1.0;
  if (r < -1.0) r = -1.0;
  return r;
}

inline std::vector<double> gather(std::span<const double> values, std::span<const std::size_t> index) {
  std::vector<double> out;
  out.reserve(index.size());
  for (std::size_t i : index) out.push_back(values[i]);
  return out;
}

}  // namespace tpcorr::detail
