#pragma once

#include <cmath>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "radiomic/core/error.hpp"
#include "radiomic/core/types.hpp"

namespace radiomic::sim {

enum class SourceKind { Active, Passive };

// Sinusoidal displacement added on top of the sound-driven vibration; models
// body micro-motion of a live talker.
struct MotionTone {
  double frequency = 0.0;  // Hz
  double amplitude = 0.0;  // m
  double phase = 0.0;      // rad
};

struct VibrationSource {
  std::shared_ptr<const AudioSignal> audio;
  std::string audio_ref;  // origin of `audio` as written in a scene file
  ChannelResponse channel;
  double peak_displacement = 5e-6;  // m
  double range = 1.0;               // m
  cplx reflectivity{1.0, 0.0};
  SourceKind kind = SourceKind::Active;
  double start_time = 0.0;  // s, audio onset within the scene
  std::vector<MotionTone> body_motion;
};

struct TrajectoryPoint {
  double time = 0.0;   // s
  double range = 0.0;  // m
};

// Point reflector moving through the trajectory's points, held still outside
// their time span. Each velocity change is eased over `ease_time` seconds with
// a raised-cosine velocity step, keeping acceleration finite.
struct MotionInterferer {
  std::vector<TrajectoryPoint> trajectory;
  cplx reflectivity{1.0, 0.0};
  double ease_time = 0.5;  // s

  double range_at(double t) const {
    double r = trajectory.front().range;
    double v_prev = 0.0;
    for (std::size_t i = 0; i < trajectory.size(); ++i) {
      const double v = i + 1 < trajectory.size() ? (trajectory[i + 1].range - trajectory[i].range) /
                                                       (trajectory[i + 1].time - trajectory[i].time)
                                                 : 0.0;
      r += (v - v_prev) * eased_ramp(t - trajectory[i].time);
      v_prev = v;
    }
    return r;
  }

 private:
  // Integral of the eased unit step centered at 0: 0 before, u after.
  double eased_ramp(double u) const {
    const double half = 0.5 * ease_time;
    if (ease_time <= 0) return u > 0 ? u : 0.0;
    if (u <= -half) return 0.0;
    if (u >= half) return u;
    const double s = u + half;
    return 0.5 * s - ease_time / (2.0 * kPi) * std::sin(kPi * s / ease_time);
  }
};

struct StaticReflector {
  double range = 0.0;
  cplx reflectivity{1.0, 0.0};
};

struct MultipathSpec {
  std::size_t source_index = 0;
  int extra_delay_bins = 0;
  double attenuation_db = 0.0;
};

// Through-wall sensing: extra attenuation on every reflection and a noise
// power increase on every receiver.
struct WallSpec {
  double attenuation_db = 0.0;
  double extra_noise_power = 0.0;
};

inline constexpr double kMaxInterfererSpeed = 5.0;  // m/s
inline constexpr double kMaxPeakDisplacement = 1e-4;

struct SceneDescription {
  RadarParams radar;
  double duration = 1.0;  // s
  std::uint64_t seed = 0;
  std::vector<VibrationSource> sources;
  std::vector<MotionInterferer> interferers;
  std::vector<StaticReflector> background;
  std::vector<double> noise_power_per_receiver;
  std::vector<MultipathSpec> multipath;
  std::optional<WallSpec> wall;

  std::size_t num_samples() const { return static_cast<std::size_t>(std::llround(duration * radar.slow_time_rate)); }

  std::size_t bin_of(double range) const { return static_cast<std::size_t>(std::floor(range / radar.range_bin_spacing())); }

  void validate() const {
    radar.validate();
    detail::require(std::isfinite(duration) && duration > 0, "scene duration must be > 0");
    const double max_range = radar.max_range();
    auto in_axis = [&](double r) { return std::isfinite(r) && r >= 0 && r < max_range; };
    detail::require(noise_power_per_receiver.size() == radar.num_receivers,
                    "noise_power_per_receiver must have one entry per receiver");
    for (double p : noise_power_per_receiver) detail::require(std::isfinite(p) && p >= 0, "noise power must be >= 0");
    for (const auto& s : sources) {
      detail::require(s.audio != nullptr, "vibration source lacks audio");
      s.audio->validate();
      detail::require(in_axis(s.range), "source range outside the range axis");
      detail::require(s.peak_displacement > 0 && s.peak_displacement <= kMaxPeakDisplacement,
                      "peak_displacement must lie in (0, 1e-4] m");
      detail::require(std::abs(s.reflectivity) > 0, "source reflectivity must be nonzero");
      s.channel.validate(radar.slow_time_rate / 2.0);
      double motion = s.peak_displacement;
      for (const auto& m : s.body_motion) {
        detail::require(m.frequency >= 0 && std::isfinite(m.amplitude), "invalid body motion tone");
        motion += std::abs(m.amplitude);
      }
      detail::require(motion < 1e-3, "total source displacement must stay below 1 mm");
    }
    for (const auto& it : interferers) {
      detail::require(!it.trajectory.empty(), "interferer trajectory is empty");
      detail::require(std::isfinite(it.ease_time) && it.ease_time >= 0, "interferer ease_time must be >= 0");
      detail::require(std::abs(it.reflectivity) > 0, "interferer reflectivity must be nonzero");
      for (std::size_t i = 0; i < it.trajectory.size(); ++i) {
        detail::require(in_axis(it.trajectory[i].range), "interferer range outside the range axis");
        if (i == 0) continue;
        const double dt = it.trajectory[i].time - it.trajectory[i - 1].time;
        detail::require(dt > 0, "interferer trajectory times must ascend");
        const double speed = std::abs(it.trajectory[i].range - it.trajectory[i - 1].range) / dt;
        detail::require(speed <= kMaxInterfererSpeed + 1e-9, "interferer speed exceeds 5 m/s");
      }
    }
    for (const auto& b : background) detail::require(in_axis(b.range), "static reflector outside the range axis");
    for (const auto& m : multipath) {
      detail::require(m.source_index < sources.size(), "multipath source_index out of range");
      detail::require(std::abs(m.extra_delay_bins) <= 4, "multipath offset limited to 4 bins");
      detail::require(m.attenuation_db >= 0, "multipath attenuation must be >= 0 dB");
      const auto bin = static_cast<std::ptrdiff_t>(bin_of(sources[m.source_index].range)) + m.extra_delay_bins;
      detail::require(bin >= 0 && bin < static_cast<std::ptrdiff_t>(radar.num_range_bins),
                      "multipath bin outside the range axis");
    }
    if (wall) {
      detail::require(wall->attenuation_db >= 0, "wall attenuation must be >= 0 dB");
      detail::require(wall->extra_noise_power >= 0, "wall extra noise power must be >= 0");
    }
  }
};

}  // namespace radiomic::sim
