#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "radiomic/core/error.hpp"
#include "radiomic/core/types.hpp"
#include "radiomic/detect/config.hpp"
#include "radiomic/detect/stats.hpp"

namespace radiomic::detect {

namespace internal {

// |G| of one receiver, laid out [freq][bin][frame] like the spectrogram.
inline std::vector<double> magnitudes(const RangeDopplerSpectrogram& spec, std::size_t receiver) {
  const std::size_t per_rx = spec.num_freqs() * spec.num_range_bins() * spec.num_frames();
  std::vector<double> mag(per_rx);
  const cplx* g = spec.data().data() + receiver * per_rx;
  for (std::size_t i = 0; i < per_rx; ++i) mag[i] = std::sqrt(std::norm(g[i]));
  return mag;
}

inline RealMatrix floor_from(const std::vector<double>& mag, std::size_t freqs, std::size_t bins, std::size_t frames) {
  RealMatrix floor(freqs, bins);
  std::vector<double> row(frames);
  for (std::size_t f = 0; f < freqs; ++f)
    for (std::size_t b = 0; b < bins; ++b) {
      const double* src = mag.data() + (f * bins + b) * frames;
      row.assign(src, src + frames);
      floor.at(f, b) = median(row);
    }
  return floor;
}

}  // namespace internal

// Per (freq, bin) median of |G| over all frames of one receiver.
inline RealMatrix noise_floor(const RangeDopplerSpectrogram& spec, std::size_t receiver, std::size_t min_frames = 25) {
  detail::require(receiver < spec.num_receivers(), "receiver index out of range");
  detail::require(spec.num_frames() >= min_frames, "noise_floor: too few frames");
  return internal::floor_from(internal::magnitudes(spec, receiver), spec.num_freqs(), spec.num_range_bins(),
                              spec.num_frames());
}

struct SoundMetricMap {
  RealMatrix values;       // [range_bin x frame]
  RealMatrix noise_floor;  // [freq x range_bin]
  DetectConfig config;
  std::size_t receiver = 0;
};

// m(r, k) = sum_f (G+ G-)^2 / max(sum_f G+^2, sum_f G-^2) over matched +-f
// rows outside the DC guard, G = max(0, |G| - floor). With
// `normalized_metric` the numerator is sum_f G+ G- instead.
inline SoundMetricMap sound_metric(const RangeDopplerSpectrogram& spec, std::size_t receiver, const DetectConfig& config = {}) {
  config.validate();
  SoundMetricMap out;
  out.config = config;
  out.receiver = receiver;
  detail::require(receiver < spec.num_receivers(), "receiver index out of range");
  detail::require(spec.num_frames() >= config.min_frames, "noise_floor: too few frames");
  const std::size_t n = spec.num_freqs(), bins = spec.num_range_bins(), frames = spec.num_frames();
  const auto mag = internal::magnitudes(spec, receiver);
  out.noise_floor = internal::floor_from(mag, n, bins, frames);
  const std::size_t half = n / 2;
  const std::size_t guard = guard_rows(config.dc_guard_hz, n, spec.sample_rate());
  out.values = RealMatrix(bins, frames);
  std::vector<double> num(frames), pos(frames), neg(frames);
  for (std::size_t b = 0; b < bins; ++b) {
    std::fill(num.begin(), num.end(), 0.0);
    std::fill(pos.begin(), pos.end(), 0.0);
    std::fill(neg.begin(), neg.end(), 0.0);
    for (std::size_t d = guard; d < half; ++d) {
      const std::size_t fp = half + d, fn = half - d;
      const double floor_p = out.noise_floor.at(fp, b), floor_n = out.noise_floor.at(fn, b);
      const double* mp = mag.data() + (fp * bins + b) * frames;
      const double* mn = mag.data() + (fn * bins + b) * frames;
      for (std::size_t k = 0; k < frames; ++k) {
        const double gp = std::max(0.0, mp[k] - floor_p);
        const double gn = std::max(0.0, mn[k] - floor_n);
        const double prod = gp * gn;
        num[k] += config.normalized_metric ? prod : prod * prod;
        pos[k] += gp * gp;
        neg[k] += gn * gn;
      }
    }
    for (std::size_t k = 0; k < frames; ++k) {
      const double den = std::max(pos[k], neg[k]);
      out.values.at(b, k) = den > 0 ? num[k] / den : 0.0;
    }
  }
  return out;
}

}  // namespace radiomic::detect
