#pragma once

// Short-time objective intelligibility (Taal et al.), following the widely
// used reference implementation: 10 kHz, 256-sample frames zero-padded to
// 512, 15 third-octave bands from 150 Hz, 30-frame (384 ms) segments,
// -15 dB clipping bound, 40 dB silent-frame removal.

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "radiomic/core/error.hpp"
#include "radiomic/core/fft.hpp"
#include "radiomic/core/resample.hpp"
#include "radiomic/core/types.hpp"

namespace radiomic::metrics {

namespace stoi_internal {

inline constexpr double kRate = 10000.0;
inline constexpr std::size_t kFrame = 256;
inline constexpr std::size_t kFft = 512;
inline constexpr std::size_t kBands = 15;
inline constexpr double kMinFreq = 150.0;
inline constexpr std::size_t kSegment = 30;
inline constexpr double kBeta = -15.0;
inline constexpr double kDynRange = 40.0;
inline constexpr double kEps = std::numeric_limits<double>::epsilon();

// Hann of length n+2 with both zero end points dropped.
inline std::vector<double> inner_hann(std::size_t n) {
  std::vector<double> w(n);
  for (std::size_t i = 0; i < n; ++i) w[i] = 0.5 - 0.5 * std::cos(2.0 * kPi * static_cast<double>(i + 1) / static_cast<double>(n + 1));
  return w;
}

// Drops frames more than `kDynRange` dB below the loudest frame of x, in both
// signals, and overlap-adds what is left.
inline void remove_silent_frames(std::vector<double>& x, std::vector<double>& y) {
  const std::size_t hop = kFrame / 2;
  const auto w = inner_hann(kFrame);
  std::vector<std::size_t> starts;
  for (std::size_t i = 0; i + kFrame <= x.size(); i += hop) starts.push_back(i);
  std::vector<double> energy(starts.size());
  for (std::size_t f = 0; f < starts.size(); ++f) {
    double acc = 0.0;
    for (std::size_t i = 0; i < kFrame; ++i) {
      const double v = w[i] * x[starts[f] + i];
      acc += v * v;
    }
    energy[f] = 20.0 * std::log10(std::sqrt(acc) + kEps);
  }
  const double top = energy.empty() ? 0.0 : *std::max_element(energy.begin(), energy.end());
  std::vector<std::size_t> kept;
  for (std::size_t f = 0; f < starts.size(); ++f)
    if (top - kDynRange - energy[f] < 0) kept.push_back(starts[f]);
  const std::size_t out_len = kept.empty() ? 0 : (kept.size() - 1) * hop + kFrame;
  std::vector<double> xs(out_len, 0.0), ys(out_len, 0.0);
  for (std::size_t j = 0; j < kept.size(); ++j)
    for (std::size_t i = 0; i < kFrame; ++i) {
      xs[j * hop + i] += w[i] * x[kept[j] + i];
      ys[j * hop + i] += w[i] * y[kept[j] + i];
    }
  x = std::move(xs);
  y = std::move(ys);
}

// |rfft|^2 of windowed 256-sample frames at hop 128, zero padded to 512;
// [frame][bin]. Like the reference, the frame ending exactly at the last
// sample is not taken.
inline std::vector<std::vector<double>> power_spectrogram(const std::vector<double>& x) {
  const auto w = inner_hann(kFrame);
  std::vector<std::vector<double>> out;
  std::vector<cplx> buf(kFft), spec(kFft);
  for (std::size_t start = 0; start + kFrame < x.size(); start += kFrame / 2) {
    std::fill(buf.begin(), buf.end(), cplx{});
    for (std::size_t i = 0; i < kFrame; ++i) buf[i] = w[i] * x[start + i];
    fft::forward(buf, spec);
    std::vector<double> p(kFft / 2 + 1);
    for (std::size_t k = 0; k <= kFft / 2; ++k) p[k] = std::norm(spec[k]);
    out.push_back(std::move(p));
  }
  return out;
}

// Band edges as FFT bin ranges [lo, hi) for the one-third octave bands.
inline std::vector<std::pair<std::size_t, std::size_t>> third_octave_bins() {
  std::vector<double> f(kFft / 2 + 1);
  for (std::size_t k = 0; k < f.size(); ++k) f[k] = kRate * static_cast<double>(k) / static_cast<double>(kFft);
  auto nearest = [&](double target) {
    std::size_t best = 0;
    for (std::size_t k = 1; k < f.size(); ++k)
      if ((f[k] - target) * (f[k] - target) < (f[best] - target) * (f[best] - target)) best = k;
    return best;
  };
  std::vector<std::pair<std::size_t, std::size_t>> bands;
  for (std::size_t b = 0; b < kBands; ++b) {
    const double k = static_cast<double>(b);
    bands.push_back({nearest(kMinFreq * std::pow(2.0, (2 * k - 1) / 6.0)), nearest(kMinFreq * std::pow(2.0, (2 * k + 1) / 6.0))});
  }
  return bands;
}

}  // namespace stoi_internal

// STOI in [0, 1] (nominally); higher is better.
inline double stoi(const AudioSignal& reference, const AudioSignal& estimate) {
  using namespace stoi_internal;
  reference.validate();
  estimate.validate();
  detail::require(reference.sample_rate == estimate.sample_rate, "stoi: sample rates differ");
  detail::require(reference.duration() >= 1.0 && estimate.duration() >= 1.0, "stoi: signals shorter than 1 s");
  auto x = resample(reference, kRate).samples;
  auto y = resample(estimate, kRate).samples;
  const std::size_t a = x.size(), b = y.size();
  detail::require((a > b ? a - b : b - a) <= kFrame, "stoi: reference and estimate lengths differ by more than one frame");
  x.resize(std::min(a, b));
  y.resize(std::min(a, b));

  remove_silent_frames(x, y);
  const auto xs = power_spectrogram(x);
  const auto ys = power_spectrogram(y);
  if (xs.size() < kSegment) throw ParameterError("stoi: too little non-silent speech for one 384 ms segment");
  const auto bands = third_octave_bins();
  const std::size_t frames = xs.size();
  std::vector<std::vector<double>> xt(kBands, std::vector<double>(frames)), yt = xt;
  for (std::size_t j = 0; j < kBands; ++j)
    for (std::size_t m = 0; m < frames; ++m) {
      double ex = 0, ey = 0;
      for (std::size_t k = bands[j].first; k < bands[j].second; ++k) {
        ex += xs[m][k];
        ey += ys[m][k];
      }
      xt[j][m] = std::sqrt(ex);
      yt[j][m] = std::sqrt(ey);
    }

  const double clip = std::pow(10.0, -kBeta / 20.0);
  double total = 0.0;
  std::size_t segments = 0;
  std::vector<double> xv(kSegment), yv(kSegment);
  for (std::size_t end = kSegment; end <= frames; ++end, ++segments) {
    for (std::size_t j = 0; j < kBands; ++j) {
      double nx = 0, ny = 0;
      for (std::size_t i = 0; i < kSegment; ++i) {
        xv[i] = xt[j][end - kSegment + i];
        yv[i] = yt[j][end - kSegment + i];
        nx += xv[i] * xv[i];
        ny += yv[i] * yv[i];
      }
      const double scale = std::sqrt(nx) / (std::sqrt(ny) + kEps);
      double mx = 0, my = 0;
      for (std::size_t i = 0; i < kSegment; ++i) {
        yv[i] = std::min(yv[i] * scale, xv[i] * (1.0 + clip));
        mx += xv[i];
        my += yv[i];
      }
      mx /= static_cast<double>(kSegment);
      my /= static_cast<double>(kSegment);
      double sxx = 0, syy = 0, sxy = 0;
      for (std::size_t i = 0; i < kSegment; ++i) {
        xv[i] -= mx;
        yv[i] -= my;
        sxx += xv[i] * xv[i];
        syy += yv[i] * yv[i];
      }
      const double dx = std::sqrt(sxx) + kEps, dy = std::sqrt(syy) + kEps;
      for (std::size_t i = 0; i < kSegment; ++i) sxy += (xv[i] / dx) * (yv[i] / dy);
      total += sxy;
    }
  }
  return total / static_cast<double>(kBands * segments);
}

}  // namespace radiomic::metrics
