#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <vector>

#include "radiomic/core/error.hpp"
#include "radiomic/core/filters.hpp"
#include "radiomic/core/types.hpp"

namespace radiomic {

struct ResampleOptions {
  // Filter support measured in samples of the lower of the two rates.
  std::size_t taps_per_phase = 64;
  double kaiser_beta = 8.0;
  // Cutoff as a fraction of the lower rate; 0.5 would sit exactly at Nyquist.
  double cutoff_fraction = 0.475;
};

// Rational-ratio polyphase resampler with a Kaiser-windowed sinc prototype.
// Rates are rounded to integers (Hz) to form the up/down ratio.
inline AudioSignal resample(const AudioSignal& signal, double target_rate, const ResampleOptions& opt = {}) {
  signal.validate();
  detail::require(std::isfinite(target_rate) && target_rate > 0, "target_rate must be > 0");
  const auto in_rate = static_cast<std::uint64_t>(std::llround(signal.sample_rate));
  const auto out_rate = static_cast<std::uint64_t>(std::llround(target_rate));
  detail::require(in_rate > 0 && out_rate > 0, "sample rates must round to >= 1 Hz");
  if (in_rate == out_rate) {
    AudioSignal same = signal;
    same.sample_rate = target_rate;
    return same;
  }
  const std::uint64_t g = std::gcd(in_rate, out_rate);
  const std::uint64_t up = out_rate / g;
  const std::uint64_t down = in_rate / g;

  const double low_rate = static_cast<double>(std::min(in_rate, out_rate));
  const double cutoff = opt.cutoff_fraction * low_rate;  // Hz
  // Kernel half-width in input samples.
  const double half_width = 0.5 * static_cast<double>(opt.taps_per_phase) * static_cast<double>(in_rate) / low_rate;
  const auto reach = static_cast<std::ptrdiff_t>(std::ceil(half_width));
  const std::size_t taps = static_cast<std::size_t>(2 * reach + 1);
  const double fc = cutoff / static_cast<double>(in_rate);  // cycles per input sample

  // Phase p covers output instants whose input position has fractional part p/up.
  std::vector<double> table(static_cast<std::size_t>(up) * taps);
  for (std::uint64_t p = 0; p < up; ++p) {
    const double frac = static_cast<double>(p) / static_cast<double>(up);
    double sum = 0.0;
    double* row = table.data() + p * taps;
    for (std::size_t k = 0; k < taps; ++k) {
      const double dt = frac - (static_cast<double>(k) - static_cast<double>(reach));
      const double u = dt / (half_width + 1.0);
      row[k] = 2.0 * fc * filters::sinc(2.0 * fc * dt) * filters::kaiser(u, opt.kaiser_beta);
      sum += row[k];
    }
    for (std::size_t k = 0; k < taps; ++k) row[k] /= sum;
  }

  const std::size_t n_in = signal.samples.size();
  const std::size_t n_out = static_cast<std::size_t>((static_cast<std::uint64_t>(n_in) * up + down / 2) / down);
  AudioSignal out;
  out.sample_rate = target_rate;
  out.label = signal.label;
  out.samples.resize(n_out);
  const auto n = static_cast<std::ptrdiff_t>(n_in);
  for (std::size_t i = 0; i < n_out; ++i) {
    const std::uint64_t pos = static_cast<std::uint64_t>(i) * down;  // in units of 1/up input samples
    const auto base = static_cast<std::ptrdiff_t>(pos / up);
    const double* row = table.data() + (pos % up) * taps;
    double acc = 0.0;
    const std::ptrdiff_t first = base - reach;
    const std::size_t k0 = static_cast<std::size_t>(std::max<std::ptrdiff_t>(0, -first));
    const std::size_t k1 = static_cast<std::size_t>(std::clamp<std::ptrdiff_t>(n - first, 0, static_cast<std::ptrdiff_t>(taps)));
    for (std::size_t k = k0; k < k1; ++k) acc += row[k] * signal.samples[static_cast<std::size_t>(first + static_cast<std::ptrdiff_t>(k))];
    out.samples[i] = acc;
  }
  return out;
}

}  // namespace radiomic
