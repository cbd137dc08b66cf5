#pragma once

#include <cstddef>
#include <vector>

#include "radiomic/core/parallel.hpp"
#include "radiomic/core/types.hpp"
#include "radiomic/spectral/stft.hpp"

namespace radiomic::spectral {

// STFT over slow time for every (receiver, range bin) pair.
inline RangeDopplerSpectrogram range_doppler(const CirFrameSeries& cir, const StftConfig& config = {}) {
  config.validate();
  if (cir.num_samples() < config.frame_length) throw ParameterError("range_doppler: slow-time length shorter than one frame");
  const std::size_t receivers = cir.num_receivers();
  const std::size_t bins = cir.num_range_bins();
  RangeDopplerSpectrogram out(receivers, config.frame_length, bins, config.num_frames(cir.num_samples()), config.hop(),
                              cir.params().slow_time_rate);
  parallel_for(receivers * bins, [&](std::size_t job) {
    const std::size_t rx = job / bins;
    const std::size_t bin = job % bins;
    const StftMatrix m = stft(cir.series(rx, bin), config);
    for (std::size_t f = 0; f < m.num_freqs; ++f)
      for (std::size_t k = 0; k < m.num_frames; ++k) out.at(rx, f, bin, k) = m.at(f, k);
  });
  return out;
}

// Frequency-by-frame slice of one (receiver, range bin).
inline StftMatrix slice(const RangeDopplerSpectrogram& spec, std::size_t rx, std::size_t bin) {
  StftMatrix m{spec.num_freqs(), spec.num_frames(), {}};
  m.data.resize(m.num_freqs * m.num_frames);
  for (std::size_t f = 0; f < m.num_freqs; ++f)
    for (std::size_t k = 0; k < m.num_frames; ++k) m.at(f, k) = spec.at(rx, f, bin, k);
  return m;
}

}  // namespace radiomic::spectral
