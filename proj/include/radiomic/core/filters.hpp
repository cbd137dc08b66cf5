#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "radiomic/core/error.hpp"
#include "radiomic/core/fft.hpp"
#include "radiomic/core/rng.hpp"
#include "radiomic/core/types.hpp"

namespace radiomic::filters {

inline double bessel_i0(double x) { return std::cyl_bessel_i(0.0, x); }

// Kaiser window evaluated at normalized position u in [-1, 1].
inline double kaiser(double u, double beta) {
  if (u <= -1.0 || u >= 1.0) return std::abs(u) == 1.0 ? bessel_i0(0.0) / bessel_i0(beta) : 0.0;
  return bessel_i0(beta * std::sqrt(1.0 - u * u)) / bessel_i0(beta);
}

inline std::vector<double> kaiser_window(std::size_t length, double beta) {
  std::vector<double> w(length, 1.0);
  if (length < 2) return w;
  const double half = static_cast<double>(length - 1) / 2.0;
  for (std::size_t n = 0; n < length; ++n) w[n] = kaiser((static_cast<double>(n) - half) / half, beta);
  return w;
}

inline double sinc(double x) {
  if (std::abs(x) < 1e-12) return 1.0;
  return std::sin(kPi * x) / (kPi * x);
}

// Linear-phase lowpass, Kaiser-windowed sinc, unit DC gain. `taps` must be odd.
inline std::vector<double> design_lowpass(double cutoff_hz, double sample_rate, std::size_t taps, double beta = 8.0) {
  detail::require(taps % 2 == 1, "filter taps must be odd");
  detail::require(cutoff_hz > 0 && cutoff_hz < sample_rate / 2, "cutoff must lie in (0, nyquist)");
  const auto window = kaiser_window(taps, beta);
  const double fc = cutoff_hz / sample_rate;
  const double mid = static_cast<double>(taps / 2);
  std::vector<double> h(taps);
  double sum = 0.0;
  for (std::size_t n = 0; n < taps; ++n) {
    h[n] = 2.0 * fc * sinc(2.0 * fc * (static_cast<double>(n) - mid)) * window[n];
    sum += h[n];
  }
  for (double& v : h) v /= sum;
  return h;
}

// Spectral inversion of the lowpass: DC gain is exactly zero up to rounding.
inline std::vector<double> design_highpass(double cutoff_hz, double sample_rate, std::size_t taps, double beta = 8.0) {
  auto h = design_lowpass(cutoff_hz, sample_rate, taps, beta);
  for (double& v : h) v = -v;
  h[taps / 2] += 1.0;
  return h;
}

// Magnitude response |H(f)| of a centered (zero-phase) FIR.
inline double zero_phase_response(std::span<const double> h, double freq_hz, double sample_rate) {
  const double mid = static_cast<double>(h.size() / 2);
  double acc = 0.0;
  for (std::size_t n = 0; n < h.size(); ++n)
    acc += h[n] * std::cos(2.0 * kPi * freq_hz / sample_rate * (static_cast<double>(n) - mid));
  return acc;
}

enum class Padding { Zero, Reflect };

// Applies an odd-length FIR centered on each sample, so the output is aligned
// with the input (group delay removed). Edges are padded per `padding`.
template <typename T>
std::vector<T> apply_centered(std::span<const T> x, std::span<const double> h, Padding padding = Padding::Zero) {
  detail::require(h.size() % 2 == 1, "centered FIR needs odd length");
  const auto n = static_cast<std::ptrdiff_t>(x.size());
  const auto half = static_cast<std::ptrdiff_t>(h.size() / 2);
  std::vector<T> y(x.size(), T{});
  if (n == 0) return y;
  auto sample = [&](std::ptrdiff_t i) -> T {
    if (i >= 0 && i < n) return x[static_cast<std::size_t>(i)];
    if (padding == Padding::Zero || n == 1) return T{};
    // Whole-sample symmetric reflection, repeated as needed for short inputs.
    const std::ptrdiff_t period = 2 * (n - 1);
    std::ptrdiff_t j = ((i % period) + period) % period;
    if (j >= n) j = period - j;
    return x[static_cast<std::size_t>(j)];
  };
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    T acc{};
    const bool interior = i - half >= 0 && i + half < n;
    if (interior) {
      const T* base = x.data() + (i - half);
      for (std::size_t k = 0; k < h.size(); ++k) acc += base[h.size() - 1 - k] * h[k];
    } else {
      for (std::size_t k = 0; k < h.size(); ++k) acc += sample(i + half - static_cast<std::ptrdiff_t>(k)) * h[k];
    }
    y[static_cast<std::size_t>(i)] = acc;
  }
  return y;
}

// Gain in dB at `freq` from a piecewise-linear dB curve, held constant
// beyond the outer breakpoints.
inline double interpolate_db(std::span<const double> freqs, std::span<const double> gains_db, double freq) {
  if (freq <= freqs.front()) return gains_db.front();
  if (freq >= freqs.back()) return gains_db.back();
  const auto it = std::upper_bound(freqs.begin(), freqs.end(), freq);
  const std::size_t hi = static_cast<std::size_t>(it - freqs.begin());
  const std::size_t lo = hi - 1;
  const double t = (freq - freqs[lo]) / (freqs[hi] - freqs[lo]);
  return gains_db[lo] + t * (gains_db[hi] - gains_db[lo]);
}

inline constexpr std::size_t kChannelTaps = 257;

// Realizes a ChannelResponse as a zero-phase FIR: the piecewise-linear dB
// curve is sampled on a dense grid, inverted to an ideal symmetric impulse
// response and truncated with a Kaiser window. With `rng`, each breakpoint is
// perturbed by a uniform draw in [-jitter_db, +jitter_db].
inline std::vector<double> realize_channel(const ChannelResponse& channel, double sample_rate, Rng* rng = nullptr,
                                           std::size_t taps = kChannelTaps) {
  channel.validate(sample_rate / 2.0);
  detail::require(taps % 2 == 1, "channel taps must be odd");
  std::vector<double> gains = channel.breakpoint_gains_db;
  if (rng != nullptr && channel.jitter_db > 0)
    for (double& g : gains) g += rng->uniform(-channel.jitter_db, channel.jitter_db);

  constexpr std::size_t kGrid = 8192;
  std::vector<double> magnitude(kGrid / 2 + 1);
  for (std::size_t k = 0; k <= kGrid / 2; ++k) {
    const double f = static_cast<double>(k) * sample_rate / static_cast<double>(kGrid);
    magnitude[k] = std::pow(10.0, interpolate_db(channel.breakpoint_frequencies, gains, f) / 20.0);
  }
  std::vector<std::complex<double>> spectrum(kGrid), ideal(kGrid);
  for (std::size_t k = 0; k < kGrid; ++k) spectrum[k] = magnitude[k <= kGrid / 2 ? k : kGrid - k];
  fft::backward(spectrum, ideal);
  const auto window = kaiser_window(taps, 8.0);
  const auto half = static_cast<std::ptrdiff_t>(taps / 2);
  std::vector<double> h(taps);
  for (std::ptrdiff_t n = -half; n <= half; ++n) {
    const auto idx = static_cast<std::size_t>((n + static_cast<std::ptrdiff_t>(kGrid)) % static_cast<std::ptrdiff_t>(kGrid));
    h[static_cast<std::size_t>(n + half)] = ideal[idx].real() / static_cast<double>(kGrid) * window[static_cast<std::size_t>(n + half)];
  }
  return h;
}

}  // namespace radiomic::filters
