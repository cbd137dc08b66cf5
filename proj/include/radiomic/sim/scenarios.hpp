#pragma once

// Seeded scene families used by the benchmark suites: detection with walking
// interferers, two-talker separation, projection studies and throat/speaker
// liveness.

#include <memory>
#include <vector>

#include "radiomic/core/rng.hpp"
#include "radiomic/sim/scene.hpp"
#include "radiomic/sim/signals.hpp"

namespace radiomic::sim {

// Channel templates: flat, a gentle tilt, and an object-like lowpass that
// loses most content above 2 kHz.
inline std::vector<ChannelResponse> channel_templates() {
  return {
      ChannelResponse{{0, 3125}, {0, 0}, 0},
      ChannelResponse{{0, 500, 1500, 3125}, {0, 0, -6, -18}, 0},
      ChannelResponse{{0, 300, 2000, 2400, 3125}, {-3, 0, -12, -60, -60}, 0},
  };
}

inline double bin_center_range(const RadarParams& radar, std::size_t bin) {
  return (static_cast<double>(bin) + 0.5) * radar.range_bin_spacing();
}

inline std::shared_ptr<const AudioSignal> shared_audio(AudioSignal a) {
  return std::make_shared<const AudioSignal>(std::move(a));
}

struct DetectionSuiteOptions {
  std::size_t range_bins = 64;
  std::size_t receivers = 2;
  double duration = 3.0;
  double min_displacement = 3e-6, max_displacement = 10e-6;
  double min_noise = 1e-6, max_noise = 1e-5;
  double min_speed = 0.5, max_speed = 1.5;  // m/s
};

// One scene of the detection benchmark: a speech- or music-driven source and
// a walking interferer that keeps at least three bins away from it, plus a
// static reflector or two.
inline SceneDescription detection_scene(std::uint64_t seed, const DetectionSuiteOptions& opt = {}) {
  Rng rng(seed);
  SceneDescription s;
  s.radar.num_range_bins = opt.range_bins;
  s.radar.num_receivers = opt.receivers;
  s.duration = opt.duration;
  s.seed = seed;
  for (std::size_t rx = 0; rx < opt.receivers; ++rx)
    s.noise_power_per_receiver.push_back(std::exp(rng.uniform(std::log(opt.min_noise), std::log(opt.max_noise))));

  const double fs = s.radar.slow_time_rate;
  const bool near_side = rng.uniform() < 0.5;
  const std::size_t third = opt.range_bins / 3;
  const std::size_t src_bin = near_side ? 3 + rng.index(third - 3) : opt.range_bins - 3 - rng.index(third - 3);

  VibrationSource src;
  Rng audio_rng = rng.fork(1);
  src.audio = shared_audio(rng.uniform() < 0.7 ? speech_like(opt.duration, fs, audio_rng) : music_like(opt.duration, fs, audio_rng));
  const auto templates = channel_templates();
  src.channel = templates[rng.index(templates.size())];
  src.peak_displacement = rng.uniform(opt.min_displacement, opt.max_displacement);
  src.range = bin_center_range(s.radar, src_bin);
  src.reflectivity = std::polar(rng.uniform(0.5, 1.0), rng.uniform(-kPi, kPi));
  s.sources.push_back(src);

  // Walk within the part of the axis on the far side of the source.
  const double spacing = s.radar.range_bin_spacing();
  const double lo = near_side ? (static_cast<double>(src_bin) + 4) * spacing : 1.0 * spacing;
  const double hi = near_side ? (static_cast<double>(opt.range_bins) - 1) * spacing : (static_cast<double>(src_bin) - 3) * spacing;
  const double speed = rng.uniform(opt.min_speed, opt.max_speed);
  const double walk_time = std::min(opt.duration * rng.uniform(0.4, 1.0), (hi - lo) / speed);
  const double t0 = rng.uniform(0.0, opt.duration - walk_time);
  const bool outward = rng.uniform() < 0.5;
  const double start = outward ? lo : hi;
  const double end = outward ? start + speed * walk_time : start - speed * walk_time;
  MotionInterferer walker;
  walker.trajectory = {{t0, start}, {t0 + walk_time, end}};
  walker.reflectivity = std::polar(rng.uniform(1.0, 3.0), rng.uniform(-kPi, kPi));
  s.interferers.push_back(walker);

  const std::size_t reflectors = 1 + rng.index(2);
  for (std::size_t i = 0; i < reflectors; ++i)
    s.background.push_back({bin_center_range(s.radar, rng.index(opt.range_bins)), std::polar(rng.uniform(0.5, 4.0), rng.uniform(-kPi, kPi))});
  return s;
}

inline std::vector<SceneDescription> detection_suite(std::size_t count, std::uint64_t seed,
                                                     const DetectionSuiteOptions& opt = {}) {
  const Rng root(seed);
  std::vector<SceneDescription> scenes;
  for (std::size_t i = 0; i < count; ++i) {
    Rng r = root.fork(i);
    scenes.push_back(detection_scene(r.engine()(), opt));
  }
  return scenes;
}

// Two talkers at 0.75 m and 1.25 m, independent speech, 4 receivers.
inline SceneDescription separation_scene(std::uint64_t seed, double duration = 3.0) {
  Rng rng(seed);
  SceneDescription s;
  s.radar.num_range_bins = 40;
  s.radar.num_receivers = 4;
  s.duration = duration;
  s.seed = seed;
  s.noise_power_per_receiver.assign(4, 1e-6);
  for (double range : {0.75, 1.25}) {
    VibrationSource v;
    Rng audio_rng = rng.fork(static_cast<std::uint64_t>(range * 100));
    v.audio = shared_audio(speech_like(duration, s.radar.slow_time_rate, audio_rng));
    v.channel = channel_templates()[1];
    v.peak_displacement = 6e-6;
    v.range = range;
    v.reflectivity = std::polar(1.0, rng.uniform(-kPi, kPi));
    s.sources.push_back(v);
  }
  s.background.push_back({0.3, {2.0, 0.5}});
  return s;
}

// Single talker with leading and trailing silence; the silent spans are
// [0, lead) and [duration - tail, duration) seconds.
struct ProjectionScene {
  SceneDescription scene;
  double lead = 0.5;
  double tail = 0.5;
};

inline ProjectionScene projection_scene(std::uint64_t seed) {
  Rng rng(seed);
  ProjectionScene p;
  auto& s = p.scene;
  s.radar.num_range_bins = 16;
  s.radar.num_receivers = 1;
  s.duration = 3.0;
  s.seed = seed;
  s.noise_power_per_receiver = {std::exp(rng.uniform(std::log(1e-6), std::log(1e-5)))};
  VibrationSource v;
  Rng audio_rng = rng.fork(1);
  v.audio = shared_audio(speech_like(s.duration - p.lead - p.tail, s.radar.slow_time_rate, audio_rng));
  v.start_time = p.lead;
  v.channel = channel_templates()[rng.index(3)];
  v.peak_displacement = rng.uniform(4e-6, 10e-6);
  v.range = bin_center_range(s.radar, 8);
  v.reflectivity = std::polar(rng.uniform(0.5, 1.0), rng.uniform(-kPi, kPi));
  s.sources.push_back(v);
  return p;
}

// Talking-throat scene: weak reflection, strongly lowpassed vibration and
// 35-60 Hz body micro-motion. With `live` false it is a loudspeaker instead:
// strong reflection, flat channel and no body motion.
inline SceneDescription liveness_scene(std::uint64_t seed, bool live, double duration = 2.0) {
  Rng rng(seed);
  SceneDescription s;
  s.radar.num_range_bins = 16;
  s.radar.num_receivers = 2;
  s.duration = duration;
  s.seed = seed;
  s.noise_power_per_receiver.assign(2, std::exp(rng.uniform(std::log(1e-6), std::log(1e-5))));
  VibrationSource v;
  Rng audio_rng = rng.fork(1);
  SpeechLikeOptions speech;
  speech.min_gap = 0.02;
  speech.max_gap = 0.08;
  v.audio = shared_audio(speech_like(duration, s.radar.slow_time_rate, audio_rng, speech));
  v.range = bin_center_range(s.radar, 8);
  if (live) {
    v.channel = ChannelResponse{{0, 200, 800, 1500, 3125}, {-6, 0, -12, -40, -60}, 0};
    v.peak_displacement = rng.uniform(2e-6, 6e-6);
    v.reflectivity = std::polar(rng.uniform(0.2, 0.5), rng.uniform(-kPi, kPi));
    const std::size_t tones = 1 + rng.index(2);
    for (std::size_t i = 0; i < tones; ++i)
      v.body_motion.push_back({rng.uniform(35.0, 60.0), rng.uniform(10e-6, 30e-6), rng.uniform(-kPi, kPi)});
  } else {
    v.channel = channel_templates()[rng.index(2)];
    v.peak_displacement = rng.uniform(4e-6, 10e-6);
    v.reflectivity = std::polar(rng.uniform(0.7, 1.5), rng.uniform(-kPi, kPi));
  }
  s.sources.push_back(v);
  return s;
}

}  // namespace radiomic::sim
