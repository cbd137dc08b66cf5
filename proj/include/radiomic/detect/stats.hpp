#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "radiomic/core/error.hpp"

namespace radiomic::detect {

// Median of a copy; even sizes average the two middle values.
inline double median(std::vector<double> v) {
  detail::require(!v.empty(), "median of an empty set");
  const std::size_t mid = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
  const double hi = v[mid];
  if (v.size() % 2 == 1) return hi;
  const double lo = *std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid));
  return 0.5 * (lo + hi);
}

struct RobustStats {
  double median = 0.0;
  double mad = 0.0;  // raw median absolute deviation, no Gaussian consistency factor
};

inline RobustStats robust_stats(const std::vector<double>& v) {
  RobustStats s;
  s.median = median(v);
  std::vector<double> dev(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) dev[i] = std::abs(v[i] - s.median);
  s.mad = median(std::move(dev));
  return s;
}

}  // namespace radiomic::detect
