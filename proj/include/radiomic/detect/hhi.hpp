#pragma once

#include <vector>

#include "radiomic/core/types.hpp"
#include "radiomic/detect/config.hpp"
#include "radiomic/detect/detection.hpp"

namespace radiomic::detect {

struct HhiConfig {
  double threshold = 0.2;
  double dc_guard_hz = 60.0;
};

// Herfindahl-Hirschman index of a share vector after normalization.
inline double hhi(const std::vector<double>& power) {
  double total = 0.0;
  for (double p : power) total += p;
  if (total <= 0) return 0.0;
  double acc = 0.0;
  for (double p : power) acc += (p / total) * (p / total);
  return acc;
}

// Per frame, range bins' non-DC Doppler power (summed over receivers) is
// turned into shares s_r and HHI = sum s_r^2. Bins whose share is at least
// the HHI are flagged when HHI exceeds the threshold. The cell score is the
// frame's HHI on those bins and 0 elsewhere.
inline DetectionResult detect_hhi(const RangeDopplerSpectrogram& spec, const HhiConfig& cfg = {}) {
  const std::size_t bins = spec.num_range_bins(), frames = spec.num_frames();
  const std::size_t n = spec.num_freqs(), half = n / 2;
  const std::size_t dc = guard_rows(cfg.dc_guard_hz, n, spec.sample_rate());
  RealMatrix scores(bins, frames);
  LabelMatrix labels(bins, frames, 0);
  std::vector<double> power(bins);
  for (std::size_t k = 0; k < frames; ++k) {
    std::fill(power.begin(), power.end(), 0.0);
    for (std::size_t rx = 0; rx < spec.num_receivers(); ++rx)
      for (std::size_t f = 0; f < n; ++f) {
        const std::size_t d = f >= half ? f - half : half - f;
        if (d < dc) continue;
        for (std::size_t b = 0; b < bins; ++b) power[b] += std::norm(spec.at(rx, f, b, k));
      }
    const double h = hhi(power);
    double total = 0.0;
    for (double p : power) total += p;
    if (total <= 0) continue;
    for (std::size_t b = 0; b < bins; ++b) {
      if (power[b] / total < h) continue;
      scores.at(b, k) = h;
      labels.at(b, k) = h > cfg.threshold;
    }
  }
  return make_result(std::move(labels), std::move(scores), Method::Hhi);
}

}  // namespace radiomic::detect
