#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "radiomic/core/error.hpp"
#include "radiomic/core/types.hpp"

namespace radiomic::metrics {

// Sorted copy of `spans`, checked to be non-empty, in range and disjoint.
inline std::vector<Span> checked_spans(std::vector<Span> spans, std::size_t length) {
  detail::require(!spans.empty(), "snr_silent: no silent spans");
  std::sort(spans.begin(), spans.end(), [](const Span& a, const Span& b) { return a.begin < b.begin; });
  for (std::size_t i = 0; i < spans.size(); ++i) {
    detail::require(!spans[i].empty(), "snr_silent: empty silent span");
    detail::require(spans[i].end <= length, "snr_silent: silent span exceeds signal");
    if (i > 0) detail::require(spans[i].begin >= spans[i - 1].end, "snr_silent: silent spans overlap");
  }
  return spans;
}

// 10 log10(active power / silent power); samples outside the silent spans are
// active, and when the spans cover everything the whole signal is the active
// part. Returns +inf when the silent part is exactly zero.
inline double snr_silent(std::span<const double> x, const std::vector<Span>& silent_spans) {
  const auto spans = checked_spans(silent_spans, x.size());
  std::vector<bool> silent(x.size(), false);
  for (const auto& s : spans)
    for (std::size_t i = s.begin; i < s.end; ++i) silent[i] = true;
  double ps = 0, pa = 0;
  std::size_t ns = 0, na = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (silent[i]) {
      ps += x[i] * x[i];
      ++ns;
    } else {
      pa += x[i] * x[i];
      ++na;
    }
  }
  if (na == 0) {
    pa = ps;
    na = ns;
  }
  if (ps == 0) return std::numeric_limits<double>::infinity();
  return 10.0 * std::log10((pa / static_cast<double>(na)) / (ps / static_cast<double>(ns)));
}

inline double snr_silent(const AudioSignal& signal, const std::vector<Span>& silent_spans) {
  return snr_silent(std::span<const double>(signal.samples), silent_spans);
}

}  // namespace radiomic::metrics
