#pragma once

#include <algorithm>
#include <vector>

#include "radiomic/core/parallel.hpp"
#include "radiomic/detect/detection.hpp"
#include "radiomic/detect/metric.hpp"
#include "radiomic/detect/stats.hpp"
#include "radiomic/spectral/range_doppler.hpp"

namespace radiomic::detect {

inline constexpr double kMadEpsilon = 1e-12;

// Frames [begin, end) of the history window that judges frame k: the trailing
// `history` frames, stretched forward at the start of the record so at least
// `min_frames` are pooled.
inline Span history_window(std::size_t k, std::size_t frames, std::size_t history, std::size_t min_frames) {
  const std::size_t end = k + 1;
  const std::size_t begin = end > history ? end - history : 0;
  return {begin, std::max(end, std::min(frames, begin + min_frames))};
}

// Per-cell robust score (m - median) / MAD with median and MAD pooled over all
// bins of the frame's history window. A zero MAD is replaced by 1e-12.
inline RealMatrix outlier_scores(const SoundMetricMap& metric) {
  const auto& m = metric.values;
  const auto& cfg = metric.config;
  detail::require(m.cols >= cfg.min_frames, "detect_outlier: too few frames");
  RealMatrix scores(m.rows, m.cols);
  std::vector<double> pool;
  Span cached{};
  RobustStats stats;
  for (std::size_t k = 0; k < m.cols; ++k) {
    const Span w = history_window(k, m.cols, cfg.history_frames, cfg.min_frames);
    if (!(w == cached)) {
      pool.clear();
      for (std::size_t b = 0; b < m.rows; ++b)
        for (std::size_t j = w.begin; j < w.end; ++j) pool.push_back(m.at(b, j));
      stats = robust_stats(pool);
      if (stats.mad <= 0) stats.mad = kMadEpsilon;
      cached = w;
    }
    for (std::size_t b = 0; b < m.rows; ++b) scores.at(b, k) = (m.at(b, k) - stats.median) / stats.mad;
  }
  return scores;
}

// Positive-side MAD outlier labels: m > median + threshold_scale * MAD.
inline DetectionResult detect_outlier(const SoundMetricMap& metric, double threshold_scale) {
  detail::require(threshold_scale > 0, "threshold_scale must be > 0");
  auto scores = outlier_scores(metric);
  LabelMatrix labels(scores.rows, scores.cols, 0);
  for (std::size_t i = 0; i < scores.data.size(); ++i) labels.data[i] = scores.data[i] > threshold_scale;
  return make_result(std::move(labels), std::move(scores), Method::RadiomicOutlier);
}

inline DetectionResult detect_outlier(const SoundMetricMap& metric) {
  return detect_outlier(metric, metric.config.threshold_scale);
}

// Fixed absolute threshold on the metric.
inline DetectionResult detect_threshold(const SoundMetricMap& metric, double threshold) {
  LabelMatrix labels(metric.values.rows, metric.values.cols, 0);
  for (std::size_t i = 0; i < labels.data.size(); ++i) labels.data[i] = metric.values.data[i] > threshold;
  return make_result(std::move(labels), metric.values, Method::RadiomicThreshold);
}

// Metric + outlier detection on every receiver, OR-combined.
inline DetectionResult detect_radiomic(const RangeDopplerSpectrogram& spec, const DetectConfig& config = {}) {
  std::vector<DetectionResult> parts(spec.num_receivers());
  parallel_for(spec.num_receivers(), [&](std::size_t rx) { parts[rx] = detect_outlier(sound_metric(spec, rx, config)); });
  return combine_or(parts);
}

}  // namespace radiomic::detect
