#pragma once

#include <cmath>
#include <vector>

#include "radiomic/core/parallel.hpp"
#include "radiomic/core/rng.hpp"
#include "radiomic/core/types.hpp"
#include "radiomic/sim/displacement.hpp"
#include "radiomic/sim/scene.hpp"

namespace radiomic::sim {

namespace internal {

inline constexpr std::uint64_t kReceiverPhaseStream = 0x1000;
inline constexpr std::uint64_t kNoiseStream = 0x2000;

inline double db_to_amplitude(double db) { return std::pow(10.0, -db / 20.0); }

// Contribution of one source (or one of its multipath copies) to a single bin.
struct BinTrack {
  std::size_t bin = 0;
  double static_range = 0.0;  // R0 of this path
  cplx amplitude;
  const std::vector<double>* displacement = nullptr;
};

}  // namespace internal

// Per-receiver antenna phase offsets; they depend on the seed alone so that
// superposing scenes is exact.
inline std::vector<double> receiver_phases(const SceneDescription& scene) {
  const Rng root(scene.seed);
  std::vector<double> phases(scene.radar.num_receivers);
  for (std::size_t rx = 0; rx < phases.size(); ++rx)
    phases[rx] = root.fork(internal::kReceiverPhaseStream + rx).uniform(-kPi, kPi);
  return phases;
}

// Synthesizes the CIR of a scene. Every source bin carries
// alpha * exp(-j 2 pi (R0 + x(t)) / lambda); interferers are spread over the two
// nearest bins with cos^2 weights; static reflectors are constant; circular
// white noise of the per-receiver power is added to every cell.
inline CirFrameSeries simulate(const SceneDescription& scene) {
  scene.validate();
  const RadarParams& radar = scene.radar;
  const std::size_t samples = scene.num_samples();
  const double fs = radar.slow_time_rate;
  const double lambda = radar.wavelength();
  const double spacing = radar.range_bin_spacing();
  const double wall_gain = scene.wall ? internal::db_to_amplitude(scene.wall->attenuation_db) : 1.0;
  const double extra_noise = scene.wall ? scene.wall->extra_noise_power : 0.0;

  std::vector<std::vector<double>> displacement;
  displacement.reserve(scene.sources.size());
  for (const auto& s : scene.sources) displacement.push_back(source_displacement(s, fs, samples));

  std::vector<internal::BinTrack> tracks;
  for (std::size_t i = 0; i < scene.sources.size(); ++i) {
    const auto& s = scene.sources[i];
    tracks.push_back({scene.bin_of(s.range), s.range, s.reflectivity * wall_gain, &displacement[i]});
  }
  for (const auto& m : scene.multipath) {
    const auto& s = scene.sources[m.source_index];
    const auto bin = static_cast<std::size_t>(static_cast<std::ptrdiff_t>(scene.bin_of(s.range)) + m.extra_delay_bins);
    tracks.push_back({bin, s.range + m.extra_delay_bins * spacing,
                      s.reflectivity * wall_gain * internal::db_to_amplitude(m.attenuation_db), &displacement[m.source_index]});
  }

  const auto phases = receiver_phases(scene);
  const Rng root(scene.seed);
  CirFrameSeries cir(radar, samples);

  parallel_for(radar.num_receivers, [&](std::size_t rx) {
    const cplx antenna = std::polar(1.0, phases[rx]);
    for (const auto& track : tracks) {
      auto out = cir.series(rx, track.bin);
      const cplx gain = track.amplitude * antenna;
      for (std::size_t t = 0; t < samples; ++t) {
        const double range = track.static_range + (*track.displacement)[t];
        out[t] += gain * std::polar(1.0, -2.0 * kPi * range / lambda);
      }
    }
    for (const auto& it : scene.interferers) {
      const cplx gain = it.reflectivity * wall_gain * antenna;
      for (std::size_t t = 0; t < samples; ++t) {
        const double range = it.range_at(static_cast<double>(t) / fs);
        const cplx echo = gain * std::polar(1.0, -2.0 * kPi * range / lambda);
        const double u = range / spacing - 0.5;
        const double lower = std::floor(u);
        const double frac = u - lower;
        const double w_lo = std::cos(0.5 * kPi * frac);
        const double w_hi = std::sin(0.5 * kPi * frac);
        const auto b = static_cast<std::ptrdiff_t>(lower);
        if (b >= 0 && b < static_cast<std::ptrdiff_t>(radar.num_range_bins))
          cir.at(rx, static_cast<std::size_t>(b), t) += echo * (w_lo * w_lo);
        if (b + 1 >= 0 && b + 1 < static_cast<std::ptrdiff_t>(radar.num_range_bins))
          cir.at(rx, static_cast<std::size_t>(b + 1), t) += echo * (w_hi * w_hi);
      }
    }
    for (const auto& r : scene.background) {
      const cplx value = r.reflectivity * wall_gain * antenna * std::polar(1.0, -2.0 * kPi * r.range / lambda);
      for (auto& v : cir.series(rx, scene.bin_of(r.range))) v += value;
    }
    const double power = scene.noise_power_per_receiver[rx] + extra_noise;
    if (power > 0) {
      Rng noise = root.fork(internal::kNoiseStream + rx);
      for (std::size_t bin = 0; bin < radar.num_range_bins; ++bin)
        for (auto& v : cir.series(rx, bin)) v += noise.complex_normal(power);
    }
  });
  return cir;
}

}  // namespace radiomic::sim
