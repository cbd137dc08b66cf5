#pragma once

#include <cmath>
#include <vector>

#include "radiomic/core/error.hpp"
#include "radiomic/core/parallel.hpp"
#include "radiomic/detect/config.hpp"
#include "radiomic/detect/detection.hpp"

namespace radiomic::detect {

struct CfarConfig {
  std::size_t guard = 2;
  std::size_t train = 8;  // per side
  double scale = 19.0;  // ~1e-3 false alarms per (bin, frame) cell over 256 rows
  double dc_guard_hz = 60.0;
};

// False-alarm probability of cell-averaging CFAR on exponentially distributed
// cells with `n` training cells and threshold multiplier `scale`.
inline double cfar_false_alarm_rate(double scale, std::size_t n) {
  return std::pow(1.0 + scale / static_cast<double>(n), -static_cast<double>(n));
}

// Threshold multiplier that achieves `pfa` with `n` training cells.
inline double cfar_scale_for_rate(double pfa, std::size_t n) {
  detail::require(pfa > 0 && pfa < 1, "pfa must lie in (0, 1)");
  return static_cast<double>(n) * (std::pow(pfa, -1.0 / static_cast<double>(n)) - 1.0);
}

// Cell-averaging CFAR along range on the Doppler energy |G|^2 of every
// (receiver, freq, frame) row outside the DC guard. Near the axis ends the
// training set is whichever side is available. A (bin, frame) cell is
// detected if any receiver/row exceeds scale * local mean; its score is the
// largest ratio seen.
inline DetectionResult detect_cfar(const RangeDopplerSpectrogram& spec, const CfarConfig& cfg = {}) {
  detail::require(cfg.train >= 1, "cfar train must be >= 1");
  detail::require(cfg.scale > 0, "cfar scale must be > 0");
  const std::size_t bins = spec.num_range_bins();
  if (2 * (cfg.guard + cfg.train) + 1 > bins) throw ParameterError("cfar window exceeds the range axis");
  const std::size_t n = spec.num_freqs(), half = n / 2, frames = spec.num_frames();
  const std::size_t dc = guard_rows(cfg.dc_guard_hz, n, spec.sample_rate());

  // Ratio maxima per receiver, reduced afterwards so threads never share cells.
  std::vector<RealMatrix> per_rx(spec.num_receivers(), RealMatrix(bins, frames));
  parallel_for(spec.num_receivers(), [&](std::size_t rx) {
    auto& best = per_rx[rx];
    std::vector<double> energy(bins), prefix(bins + 1);
    for (std::size_t f = 0; f < n; ++f) {
      const std::size_t d = f >= half ? f - half : half - f;
      if (d < dc) continue;
      for (std::size_t k = 0; k < frames; ++k) {
        for (std::size_t b = 0; b < bins; ++b) energy[b] = std::norm(spec.at(rx, f, b, k));
        prefix[0] = 0;
        for (std::size_t b = 0; b < bins; ++b) prefix[b + 1] = prefix[b] + energy[b];
        auto sum = [&](std::ptrdiff_t lo, std::ptrdiff_t hi) {  // [lo, hi) clipped to the axis
          lo = std::max<std::ptrdiff_t>(lo, 0);
          hi = std::min<std::ptrdiff_t>(hi, static_cast<std::ptrdiff_t>(bins));
          return hi > lo ? std::pair{prefix[static_cast<std::size_t>(hi)] - prefix[static_cast<std::size_t>(lo)], hi - lo}
                         : std::pair{0.0, std::ptrdiff_t{0}};
        };
        const auto g = static_cast<std::ptrdiff_t>(cfg.guard), t = static_cast<std::ptrdiff_t>(cfg.train);
        for (std::size_t b = 0; b < bins; ++b) {
          const auto c = static_cast<std::ptrdiff_t>(b);
          // Near an edge the missing training cells move to the other side.
          const auto nb = static_cast<std::ptrdiff_t>(bins);
          const std::ptrdiff_t short_left = std::max<std::ptrdiff_t>(0, t + g - c);
          const std::ptrdiff_t short_right = std::max<std::ptrdiff_t>(0, c + g + 1 + t - nb);
          const auto [ls, ln] = sum(c - g - t - short_right, c - g);
          const auto [rs, rn] = sum(c + g + 1, c + g + 1 + t + short_left);
          const double mean = (ls + rs) / static_cast<double>(ln + rn);
          const double ratio = mean > 0 ? energy[b] / mean : (energy[b] > 0 ? INFINITY : 0.0);
          best.at(b, k) = std::max(best.at(b, k), ratio);
        }
      }
    }
  });
  RealMatrix scores(bins, frames);
  for (const auto& m : per_rx)
    for (std::size_t i = 0; i < scores.data.size(); ++i) scores.data[i] = std::max(scores.data[i], m.data[i]);
  LabelMatrix labels(bins, frames, 0);
  for (std::size_t i = 0; i < scores.data.size(); ++i) labels.data[i] = scores.data[i] > cfg.scale;
  return make_result(std::move(labels), std::move(scores), Method::Cfar);
}

}  // namespace radiomic::detect
