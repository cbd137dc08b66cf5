#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "radiomic/core/types.hpp"
#include "radiomic/sim/displacement.hpp"
#include "radiomic/sim/scene.hpp"
#include "radiomic/spectral/stft.hpp"

namespace radiomic::sim {

// Per-frame sound activity of one source: frame k is active when the
// Hann-weighted energy of its sound displacement is within `relative_db` of
// the source's loudest frame.
inline std::vector<bool> source_activity(const SceneDescription& scene, std::size_t source,
                                         const spectral::StftConfig& config = {}, double relative_db = -20.0) {
  const std::size_t samples = scene.num_samples();
  const auto x = sound_displacement(scene.sources.at(source), scene.radar.slow_time_rate, samples);
  const std::size_t frames = config.num_frames(samples);
  const auto window = spectral::periodic_hann(config.frame_length);
  std::vector<double> energy(frames, 0.0);
  for (std::size_t k = 0; k < frames; ++k)
    for (std::size_t i = 0; i < config.frame_length; ++i) {
      const double v = x[k * config.hop() + i] * window[i];
      energy[k] += v * v;
    }
  const double peak = energy.empty() ? 0.0 : *std::max_element(energy.begin(), energy.end());
  std::vector<bool> active(frames, false);
  if (peak <= 0) return active;
  const double floor = peak * std::pow(10.0, relative_db / 10.0);
  for (std::size_t k = 0; k < frames; ++k) active[k] = energy[k] >= floor;
  return active;
}

// Ground-truth sound labels [range bin x frame] covering source bins and
// their declared multipath bins.
inline LabelMatrix sound_truth(const SceneDescription& scene, const spectral::StftConfig& config = {},
                               double relative_db = -20.0) {
  const std::size_t frames = config.num_frames(scene.num_samples());
  LabelMatrix truth(scene.radar.num_range_bins, frames, 0);
  for (std::size_t s = 0; s < scene.sources.size(); ++s) {
    const auto active = source_activity(scene, s, config, relative_db);
    std::vector<std::size_t> bins{scene.bin_of(scene.sources[s].range)};
    for (const auto& m : scene.multipath)
      if (m.source_index == s)
        bins.push_back(static_cast<std::size_t>(static_cast<std::ptrdiff_t>(bins.front()) + m.extra_delay_bins));
    for (std::size_t b : bins)
      for (std::size_t k = 0; k < frames; ++k)
        if (active[k]) truth.at(b, k) = 1;
  }
  return truth;
}

}  // namespace radiomic::sim
