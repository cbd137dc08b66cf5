#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "radiomic/core/rng.hpp"
#include "radiomic/core/types.hpp"

namespace radiomic::sim {

inline AudioSignal tone(double frequency, double amplitude, double duration, double sample_rate, double phase = 0.0) {
  AudioSignal a;
  a.sample_rate = sample_rate;
  a.label = "tone";
  a.samples.resize(static_cast<std::size_t>(std::llround(duration * sample_rate)));
  for (std::size_t i = 0; i < a.samples.size(); ++i)
    a.samples[i] = amplitude * std::sin(2.0 * kPi * frequency * static_cast<double>(i) / sample_rate + phase);
  return a;
}

inline AudioSignal white_noise(double rms, double duration, double sample_rate, Rng& rng) {
  AudioSignal a;
  a.sample_rate = sample_rate;
  a.label = "noise";
  a.samples.resize(static_cast<std::size_t>(std::llround(duration * sample_rate)));
  for (double& v : a.samples) v = rng.normal(0.0, rms);
  return a;
}

inline void normalize_peak(AudioSignal& a, double peak) {
  double m = 0.0;
  for (double v : a.samples) m = std::max(m, std::abs(v));
  if (m > 0)
    for (double& v : a.samples) v *= peak / m;
}

struct SpeechLikeOptions {
  double min_syllable = 0.15, max_syllable = 0.35;  // s
  double min_gap = 0.08, max_gap = 0.25;            // s
  double min_f0 = 95.0, max_f0 = 210.0;             // Hz
  double max_harmonic_frequency = 3000.0;           // Hz
};

// Voiced, syllable-structured signal: glottal harmonic series shaped by three
// random formant resonances, separated by silent gaps. Stands in for speech
// in scenes and metric tests; it has the LPC structure and on/off envelope
// the pipeline relies on.
inline AudioSignal speech_like(double duration, double sample_rate, Rng& rng, const SpeechLikeOptions& opt = {}) {
  AudioSignal a;
  a.sample_rate = sample_rate;
  a.label = "speech_like";
  const std::size_t total = static_cast<std::size_t>(std::llround(duration * sample_rate));
  a.samples.assign(total, 0.0);
  double t = rng.uniform(opt.min_gap, opt.max_gap);
  while (t < duration) {
    const double len = rng.uniform(opt.min_syllable, opt.max_syllable);
    const double f0_start = rng.uniform(opt.min_f0, opt.max_f0);
    const double f0_end = f0_start * rng.uniform(0.8, 1.2);
    const double formants[3] = {rng.uniform(300, 800), rng.uniform(900, 2200), rng.uniform(2300, 2900)};
    const double widths[3] = {rng.uniform(60, 120), rng.uniform(80, 160), rng.uniform(100, 200)};
    const double level = rng.uniform(0.4, 1.0);
    const auto begin = static_cast<std::size_t>(t * sample_rate);
    const auto end = std::min(total, static_cast<std::size_t>((t + len) * sample_rate));
    const double nyq_limit = std::min(opt.max_harmonic_frequency, 0.45 * sample_rate);
    double glottal_phase = 0.0;
    for (std::size_t i = begin; i < end; ++i) {
      const double u = static_cast<double>(i - begin) / static_cast<double>(std::max<std::size_t>(1, end - begin));
      const double f0 = f0_start + (f0_end - f0_start) * u;
      glottal_phase += 2.0 * kPi * f0 / sample_rate;
      double acc = 0.0;
      for (int h = 1; h * f0 < nyq_limit; ++h) {
        const double fh = h * f0;
        double gain = 0.0;
        for (int k = 0; k < 3; ++k) {
          const double d = (fh - formants[k]) / widths[k];
          gain += 1.0 / (1.0 + d * d) / (1.0 + k);
        }
        acc += gain / std::sqrt(static_cast<double>(h)) * std::sin(h * glottal_phase);
      }
      const double env = std::pow(std::sin(kPi * u), 2.0);
      a.samples[i] = level * env * acc;
    }
    t += len + rng.uniform(opt.min_gap, opt.max_gap);
  }
  normalize_peak(a, 0.9);
  return a;
}

// Sustained notes with a few partials and short releases; mostly continuous.
inline AudioSignal music_like(double duration, double sample_rate, Rng& rng) {
  AudioSignal a;
  a.sample_rate = sample_rate;
  a.label = "music_like";
  const std::size_t total = static_cast<std::size_t>(std::llround(duration * sample_rate));
  a.samples.assign(total, 0.0);
  double t = 0.0;
  while (t < duration) {
    const double len = rng.uniform(0.2, 0.6);
    const double base = 110.0 * std::pow(2.0, std::floor(rng.uniform(0, 24)) / 12.0);
    const auto begin = static_cast<std::size_t>(t * sample_rate);
    const auto end = std::min(total, static_cast<std::size_t>((t + len) * sample_rate));
    const int partials = 2 + static_cast<int>(rng.index(4));
    for (std::size_t i = begin; i < end; ++i) {
      const double tt = static_cast<double>(i - begin) / sample_rate;
      const double env = std::min(1.0, tt / 0.02) * std::exp(-2.5 * tt);
      double acc = 0.0;
      for (int p = 1; p <= partials; ++p)
        if (p * base < 0.45 * sample_rate) acc += std::sin(2.0 * kPi * p * base * tt) / p;
      a.samples[i] += env * acc;
    }
    t += len;
  }
  normalize_peak(a, 0.9);
  return a;
}

}  // namespace radiomic::sim
