#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "radiomic/core/error.hpp"
#include "radiomic/core/filters.hpp"
#include "radiomic/core/resample.hpp"
#include "radiomic/core/types.hpp"
#include "radiomic/sim/scene.hpp"

namespace radiomic::sim {

// x = h * a, with h the zero-phase realization of `channel`, scaled so that
// max |x| equals `peak_displacement`. An all-zero result stays zero.
inline DisplacementSignal synthesize_displacement(const AudioSignal& audio, const ChannelResponse& channel,
                                                  double peak_displacement) {
  audio.validate();
  detail::require(!audio.samples.empty(), "synthesize_displacement: empty audio");
  detail::require(peak_displacement > 0 && peak_displacement < 1e-3, "peak_displacement must lie in (0, 1 mm)");
  const auto h = filters::realize_channel(channel, audio.sample_rate);
  DisplacementSignal out;
  out.sample_rate = audio.sample_rate;
  out.samples = filters::apply_centered<double>(audio.samples, h);
  double peak = 0.0;
  for (double v : out.samples) peak = std::max(peak, std::abs(v));
  if (peak > 0)
    for (double& v : out.samples) v *= peak_displacement / peak;
  return out;
}

// Sound-driven displacement of one source on the scene's slow-time grid
// (audio resampled, delayed by start_time, zero outside the audio).
inline std::vector<double> sound_displacement(const VibrationSource& source, double slow_time_rate, std::size_t samples) {
  AudioSignal audio = *source.audio;
  if (std::abs(audio.sample_rate - slow_time_rate) > 1e-9) audio = resample(audio, slow_time_rate);
  std::vector<double> x(samples, 0.0);
  if (audio.samples.empty()) return x;
  const auto sound = synthesize_displacement(audio, source.channel, source.peak_displacement);
  const auto offset = static_cast<std::ptrdiff_t>(std::llround(source.start_time * slow_time_rate));
  for (std::size_t i = 0; i < sound.samples.size(); ++i) {
    const std::ptrdiff_t t = offset + static_cast<std::ptrdiff_t>(i);
    if (t >= 0 && t < static_cast<std::ptrdiff_t>(samples)) x[static_cast<std::size_t>(t)] = sound.samples[i];
  }
  return x;
}

// Total displacement x(t): sound vibration plus body-motion tones.
inline std::vector<double> source_displacement(const VibrationSource& source, double slow_time_rate, std::size_t samples) {
  auto x = sound_displacement(source, slow_time_rate, samples);
  for (const auto& m : source.body_motion)
    for (std::size_t t = 0; t < samples; ++t)
      x[t] += m.amplitude * std::sin(2.0 * kPi * m.frequency * static_cast<double>(t) / slow_time_rate + m.phase);
  return x;
}

}  // namespace radiomic::sim
