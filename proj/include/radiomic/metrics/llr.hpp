#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "radiomic/core/error.hpp"
#include "radiomic/core/types.hpp"

namespace radiomic::metrics {

struct LlrConfig {
  std::size_t order = 10;
  double frame_seconds = 0.025;
  double overlap = 0.5;
};

namespace internal {

inline std::vector<double> autocorrelation(std::span<const double> x, std::size_t order) {
  std::vector<double> r(order + 1, 0.0);
  for (std::size_t lag = 0; lag <= order && lag < x.size(); ++lag)
    for (std::size_t i = lag; i < x.size(); ++i) r[lag] += x[i] * x[i - lag];
  return r;
}

// Levinson-Durbin; returns [1, a1, ..., ap]. Stops early (remaining
// coefficients zero) once the prediction error vanishes.
inline std::vector<double> levinson(const std::vector<double>& r) {
  const std::size_t p = r.size() - 1;
  std::vector<double> a(p + 1, 0.0), prev(p + 1, 0.0);
  a[0] = 1.0;
  double err = r[0];
  for (std::size_t i = 1; i <= p; ++i) {
    if (err <= r[0] * 1e-14 || err <= 0) break;
    double acc = r[i];
    for (std::size_t j = 1; j < i; ++j) acc += a[j] * r[i - j];
    const double k = -acc / err;
    prev = a;
    for (std::size_t j = 1; j < i; ++j) a[j] = prev[j] + k * prev[i - j];
    a[i] = k;
    err *= (1.0 - k * k);
  }
  return a;
}

// a^T R a for the symmetric Toeplitz R built from autocorrelation r.
inline double toeplitz_form(const std::vector<double>& a, const std::vector<double>& r) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a.size(); ++j) acc += a[i] * a[j] * r[i > j ? i - j : j - i];
  return acc;
}

}  // namespace internal

// Per-frame LPC log-likelihood ratios, each clamped to [0, 2]; frames whose
// reference is digitally silent are skipped.
inline std::vector<double> llr_frames(const AudioSignal& reference, const AudioSignal& estimate, const LlrConfig& cfg = {}) {
  reference.validate();
  estimate.validate();
  detail::require(reference.sample_rate == estimate.sample_rate, "llr: sample rates differ");
  const auto frame = static_cast<std::size_t>(std::llround(cfg.frame_seconds * reference.sample_rate));
  const auto hop = std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(static_cast<double>(frame) * (1.0 - cfg.overlap))));
  detail::require(frame > cfg.order, "llr: frame shorter than LPC order");
  const std::size_t a = reference.samples.size(), b = estimate.samples.size();
  detail::require((a > b ? a - b : b - a) <= frame, "llr: reference and estimate lengths differ by more than one frame");
  const std::size_t len = std::min(a, b);
  detail::require(len >= frame, "llr: signals shorter than one frame");

  std::vector<double> window(frame);
  for (std::size_t i = 0; i < frame; ++i) window[i] = 0.5 - 0.5 * std::cos(2.0 * kPi * static_cast<double>(i) / static_cast<double>(frame));
  std::vector<double> out, xr(frame), xe(frame);
  for (std::size_t start = 0; start + frame <= len; start += hop) {
    for (std::size_t i = 0; i < frame; ++i) {
      xr[i] = reference.samples[start + i] * window[i];
      xe[i] = estimate.samples[start + i] * window[i];
    }
    const auto rr = internal::autocorrelation(xr, cfg.order);
    if (rr[0] <= 0) continue;
    const auto re = internal::autocorrelation(xe, cfg.order);
    const auto ar = internal::levinson(rr);
    const auto ae = re[0] > 0 ? internal::levinson(re) : std::vector<double>{1.0};
    std::vector<double> ae_full(cfg.order + 1, 0.0);
    std::copy(ae.begin(), ae.end(), ae_full.begin());
    const double num = internal::toeplitz_form(ae_full, rr);
    const double den = internal::toeplitz_form(ar, rr);
    const double v = den > 0 ? std::log(num / den) : 2.0;
    out.push_back(std::clamp(std::isfinite(v) ? v : 2.0, 0.0, 2.0));
  }
  return out;
}

// Mean LPC log-likelihood ratio in [0, 2]; lower is better.
inline double llr(const AudioSignal& reference, const AudioSignal& estimate, const LlrConfig& cfg = {}) {
  const auto frames = llr_frames(reference, estimate, cfg);
  if (frames.empty()) throw DegenerateError("llr: reference is silent in every frame");
  double acc = 0.0;
  for (double v : frames) acc += v;
  return acc / static_cast<double>(frames.size());
}

}  // namespace radiomic::metrics
