#pragma once

#include <cmath>

#include "radiomic/core/error.hpp"
#include "radiomic/core/types.hpp"

namespace radiomic::detect {

struct LivenessConfig {
  double band_low_hz = 35.0;
  double band_high_hz = 60.0;
  double floor_hz = 5.0;  // rows below this count as DC
  double threshold = 1e-5;  // calibrated on synthetic throat and loudspeaker scenes
};

// Energy in Doppler rows with |f| in [band_low, band_high] over energy in all
// rows with |f| >= floor, summed over receivers, for one bin and frame span.
inline double liveness_score(const RangeDopplerSpectrogram& spec, std::size_t bin, Span frames,
                             const LivenessConfig& cfg = {}) {
  if (frames.empty()) throw ParameterError("liveness_score: empty frame span");
  detail::require(bin < spec.num_range_bins(), "liveness_score: bin out of range");
  detail::require(frames.end <= spec.num_frames(), "liveness_score: span exceeds spectrogram");
  double band = 0.0, total = 0.0;
  for (std::size_t rx = 0; rx < spec.num_receivers(); ++rx)
    for (std::size_t f = 0; f < spec.num_freqs(); ++f) {
      const double hz = std::abs(spec.row_frequency(f));
      if (hz < cfg.floor_hz) continue;
      const bool in_band = hz >= cfg.band_low_hz && hz <= cfg.band_high_hz;
      for (std::size_t k = frames.begin; k < frames.end; ++k) {
        const double e = std::norm(spec.at(rx, f, bin, k));
        total += e;
        if (in_band) band += e;
      }
    }
  return total > 0 ? band / total : 0.0;
}

inline bool is_live(double score, const LivenessConfig& cfg = {}) { return score > cfg.threshold; }

}  // namespace radiomic::detect
