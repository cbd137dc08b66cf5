#pragma once

#include <algorithm>
#include <numeric>
#include <vector>

#include "radiomic/core/error.hpp"
#include "radiomic/core/types.hpp"

namespace radiomic::detect {

struct RocPoint {
  double false_alarm_rate = 0.0;
  double detection_rate = 0.0;
};

namespace internal {

struct Counts {
  std::size_t positives = 0, negatives = 0;
};

inline Counts count_truth(const LabelMatrix& truth, const RealMatrix& scores) {
  detail::require(truth.same_shape(scores), "roc: truth and score shapes differ");
  Counts c;
  for (auto t : truth.data) (t ? c.positives : c.negatives) += 1;
  if (c.positives == 0 || c.negatives == 0) throw DegenerateError("roc: truth is all-positive or all-negative");
  return c;
}

}  // namespace internal

// Full threshold sweep (one vertex per distinct score, descending), then
// thinned to at most `points` vertices by even index spacing. The curve always
// starts at (0,0) and ends at (1,1).
inline std::vector<RocPoint> roc_curve(const LabelMatrix& truth, const RealMatrix& scores, std::size_t points = 101) {
  detail::require(points >= 2, "roc: need at least 2 points");
  const auto counts = internal::count_truth(truth, scores);
  std::vector<std::size_t> order(scores.data.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores.data[a] > scores.data[b]; });
  std::vector<RocPoint> full{{0.0, 0.0}};
  std::size_t tp = 0, fp = 0;
  for (std::size_t i = 0; i < order.size(); ++i) {
    (truth.data[order[i]] ? tp : fp) += 1;
    const bool last_of_tie = i + 1 == order.size() || scores.data[order[i + 1]] != scores.data[order[i]];
    if (last_of_tie)
      full.push_back({static_cast<double>(fp) / static_cast<double>(counts.negatives),
                      static_cast<double>(tp) / static_cast<double>(counts.positives)});
  }
  if (full.size() <= points) return full;
  std::vector<RocPoint> thin;
  thin.reserve(points);
  for (std::size_t i = 0; i < points; ++i) {
    const std::size_t idx = (i * (full.size() - 1) + (points - 1) / 2) / (points - 1);
    thin.push_back(full[std::min(idx, full.size() - 1)]);
  }
  thin.front() = full.front();
  thin.back() = full.back();
  return thin;
}

// Area under the ROC as the Mann-Whitney statistic: probability that a
// random positive outscores a random negative, ties counting one half.
inline double roc_auc(const LabelMatrix& truth, const RealMatrix& scores) {
  const auto counts = internal::count_truth(truth, scores);
  std::vector<std::size_t> order(scores.data.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores.data[a] < scores.data[b]; });
  double rank_sum = 0.0;
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    while (j < order.size() && scores.data[order[j]] == scores.data[order[i]]) ++j;
    const double mid_rank = 0.5 * static_cast<double>(i + 1 + j);  // average of ranks i+1..j
    for (std::size_t t = i; t < j; ++t)
      if (truth.data[order[t]]) rank_sum += mid_rank;
    i = j;
  }
  const double p = static_cast<double>(counts.positives), n = static_cast<double>(counts.negatives);
  return (rank_sum - p * (p + 1) / 2.0) / (p * n);
}

// Trapezoidal area under a curve of ROC vertices.
inline double curve_area(const std::vector<RocPoint>& curve) {
  double a = 0.0;
  for (std::size_t i = 1; i < curve.size(); ++i)
    a += (curve[i].false_alarm_rate - curve[i - 1].false_alarm_rate) *
         (curve[i].detection_rate + curve[i - 1].detection_rate) / 2.0;
  return a;
}

}  // namespace radiomic::detect
