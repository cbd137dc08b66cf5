#pragma once

#include <cmath>
#include <cstddef>

#include "radiomic/core/error.hpp"
#include "radiomic/spectral/stft.hpp"

namespace radiomic::detect {

struct DetectConfig {
  spectral::StftConfig stft;
  double dc_guard_hz = 60.0;     // rows with |f| below this are ignored
  bool normalized_metric = false;  // sum G+ G- instead of sum (G+ G-)^2
  double threshold_scale = 80.0;  // MAD multiplier, calibrated on noise-only scenes
  std::size_t history_frames = 250;
  std::size_t min_frames = 25;

  void validate() const {
    stft.validate();
    detail::require(std::isfinite(dc_guard_hz) && dc_guard_hz >= 0, "dc_guard_hz must be >= 0");
    detail::require(std::isfinite(threshold_scale) && threshold_scale > 0, "threshold_scale must be > 0");
    detail::require(history_frames >= 1, "history_frames must be >= 1");
    detail::require(min_frames >= 1, "min_frames must be >= 1");
  }
};

// Smallest positive Doppler offset (in rows) at or above `guard_hz`.
inline std::size_t guard_rows(double guard_hz, std::size_t frame_length, double sample_rate) {
  const double df = sample_rate / static_cast<double>(frame_length);
  return static_cast<std::size_t>(std::max(1.0, std::ceil(guard_hz / df - 1e-9)));
}

}  // namespace radiomic::detect
