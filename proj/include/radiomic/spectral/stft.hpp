#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "radiomic/core/error.hpp"
#include "radiomic/core/fft.hpp"
#include "radiomic/core/types.hpp"

namespace radiomic::spectral {

struct StftConfig {
  std::size_t frame_length = 256;
  double overlap = 0.75;

  std::size_t hop() const {
    return static_cast<std::size_t>(std::llround(static_cast<double>(frame_length) * (1.0 - overlap)));
  }

  void validate() const {
    detail::require(frame_length >= 4 && (frame_length & (frame_length - 1)) == 0,
                    "frame_length must be a power of two >= 4");
    detail::require(overlap == 0.5 || overlap == 0.75, "overlap must be 0.5 or 0.75");
  }

  // Frames produced for a signal of `length` samples.
  std::size_t num_frames(std::size_t length) const {
    return length < frame_length ? 0 : 1 + (length - frame_length) / hop();
  }
  // Samples spanned by `frames` frames.
  std::size_t signal_length(std::size_t frames) const { return frames == 0 ? 0 : (frames - 1) * hop() + frame_length; }
};

// Periodic Hann: w[n] = 0.5 - 0.5 cos(2 pi n / N).
inline std::vector<double> periodic_hann(std::size_t n) {
  std::vector<double> w(n);
  for (std::size_t i = 0; i < n; ++i) w[i] = 0.5 - 0.5 * std::cos(2.0 * kPi * static_cast<double>(i) / static_cast<double>(n));
  return w;
}

// Frequency-by-frame matrix, rows DC-centered: row f holds bin f - N/2.
struct StftMatrix {
  std::size_t num_freqs = 0;
  std::size_t num_frames = 0;
  std::vector<cplx> data;  // [freq][frame]

  cplx& at(std::size_t f, std::size_t k) { return data[f * num_frames + k]; }
  const cplx& at(std::size_t f, std::size_t k) const { return data[f * num_frames + k]; }
};

namespace internal {

// Unshifted DFT of one windowed frame.
inline void analyze_frame(std::span<const cplx> x, std::span<const double> window, std::vector<cplx>& scratch,
                          std::vector<cplx>& spectrum) {
  const std::size_t n = window.size();
  for (std::size_t i = 0; i < n; ++i) scratch[i] = x[i] * window[i];
  fft::forward(scratch, spectrum);
}

}  // namespace internal

inline StftMatrix stft(std::span<const cplx> signal, const StftConfig& config = {}) {
  config.validate();
  const std::size_t n = config.frame_length;
  if (signal.size() < n) throw ParameterError("stft: signal shorter than one frame");
  const std::size_t hop = config.hop();
  const auto window = periodic_hann(n);
  StftMatrix out{n, config.num_frames(signal.size()), {}};
  out.data.resize(out.num_freqs * out.num_frames);
  std::vector<cplx> scratch(n), spectrum(n);
  for (std::size_t k = 0; k < out.num_frames; ++k) {
    internal::analyze_frame(signal.subspan(k * hop, n), window, scratch, spectrum);
    for (std::size_t f = 0; f < n; ++f) out.at(f, k) = spectrum[(f + n / 2) % n];
  }
  return out;
}

inline StftMatrix stft(std::span<const double> signal, const StftConfig& config = {}) {
  std::vector<cplx> c(signal.begin(), signal.end());
  return stft(std::span<const cplx>(c), config);
}

// Weighted overlap-add inverse with the analysis window as synthesis window.
// Each sample is divided by the summed squared window covering it, floored at
// a tenth of the interior mean so the sparsely covered edges stay bounded.
// Output has signal_length(frames) samples; only samples at least one frame
// away from either end are guaranteed to reconstruct exactly.
inline std::vector<cplx> istft(const StftMatrix& spec, const StftConfig& config = {}) {
  config.validate();
  const std::size_t n = config.frame_length;
  if (spec.num_freqs != n || spec.data.size() != spec.num_freqs * spec.num_frames)
    throw ParameterError("istft: matrix dimensions do not match config");
  const std::size_t hop = config.hop();
  const auto window = periodic_hann(n);
  double interior_mean = 0.0;
  for (double w : window) interior_mean += w * w;
  interior_mean /= static_cast<double>(hop);

  const std::size_t length = config.signal_length(spec.num_frames);
  std::vector<cplx> out(length);
  std::vector<double> weight(length, 0.0);
  std::vector<cplx> spectrum(n), frame(n);
  for (std::size_t k = 0; k < spec.num_frames; ++k) {
    for (std::size_t f = 0; f < n; ++f) spectrum[(f + n / 2) % n] = spec.at(f, k);
    fft::backward(spectrum, frame);
    for (std::size_t i = 0; i < n; ++i) {
      out[k * hop + i] += frame[i] * (window[i] / static_cast<double>(n));
      weight[k * hop + i] += window[i] * window[i];
    }
  }
  const double floor = 0.1 * interior_mean;
  for (std::size_t i = 0; i < length; ++i) out[i] /= std::max(weight[i], floor);
  return out;
}

inline std::vector<double> istft_real(const StftMatrix& spec, const StftConfig& config = {}) {
  const auto c = istft(spec, config);
  std::vector<double> r(c.size());
  for (std::size_t i = 0; i < c.size(); ++i) r[i] = c[i].real();
  return r;
}

// Doppler frequency in Hz of DC-centered row f.
inline double row_frequency(std::size_t f, std::size_t frame_length, double sample_rate) {
  return (static_cast<double>(f) - static_cast<double>(frame_length / 2)) * sample_rate /
         static_cast<double>(frame_length);
}

}  // namespace radiomic::spectral
