#pragma once

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <vector>

#include "radiomic/core/error.hpp"
#include "radiomic/core/parallel.hpp"
#include "radiomic/core/types.hpp"
#include "radiomic/detect/detection.hpp"
#include "radiomic/metrics/snr.hpp"
#include "radiomic/recover/projection.hpp"
#include "radiomic/spectral/stft.hpp"

namespace radiomic::recover {

struct RecoverConfig {
  double highpass_cutoff = 100.0;  // Hz
  std::size_t highpass_taps = 255;
  spectral::StftConfig stft;
  double output_peak = 0.9;
  std::size_t neighbor_bins = 2;  // candidate bins on each side of a detection
  std::size_t group_gap = 2;      // detected bins further apart start a new source
  double quiet_fraction = 0.25;   // share of frames assumed silent when none are known
  double angle_offset = 0.0;      // radians added to the fitted angle (projection studies)

  void validate() const {
    stft.validate();
    detail::require(output_peak > 0, "output_peak must be > 0");
    detail::require(quiet_fraction > 0 && quiet_fraction < 1, "quiet_fraction must lie in (0, 1)");
  }
};

struct RecoveredSound {
  AudioSignal audio;  // at the slow-time rate, peak-normalized
  std::size_t receiver = 0;
  std::vector<std::size_t> bins;
  Span frames;
  double snr_db = 0.0;
  double angle = 0.0;
  double residual_power = 0.0;
};

namespace internal {

// Samples owned by frame k: the hop-wide stretch around the frame center, so
// consecutive frames tile the signal without overlap.
inline Span frame_core(std::size_t k, const spectral::StftConfig& cfg) {
  const std::size_t hop = cfg.hop();
  const std::size_t begin = k * hop + (cfg.frame_length - hop) / 2;
  return {begin, begin + hop};
}

// Sample spans of the given frames (relative to the first frame of `range`),
// merged where adjacent.
inline std::vector<Span> frames_to_samples(const std::vector<std::size_t>& frames, Span range, const spectral::StftConfig& cfg) {
  std::vector<Span> out;
  for (std::size_t k : frames) {
    if (!range.contains(k)) continue;
    const Span s = frame_core(k - range.begin, cfg);
    if (!out.empty() && out.back().end == s.begin) out.back().end = s.end;
    else out.push_back(s);
  }
  return out;
}

// Frames with the least energy in `x`, `fraction` of them.
inline std::vector<std::size_t> quietest_frames(std::span<const double> x, std::size_t frames, const spectral::StftConfig& cfg,
                                                double fraction) {
  std::vector<double> energy(frames, 0.0);
  for (std::size_t k = 0; k < frames; ++k) {
    const Span s = frame_core(k, cfg);
    for (std::size_t i = s.begin; i < s.end && i < x.size(); ++i) energy[k] += x[i] * x[i];
  }
  std::vector<std::size_t> order(frames);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return energy[a] < energy[b]; });
  order.resize(std::max<std::size_t>(1, static_cast<std::size_t>(std::floor(fraction * static_cast<double>(frames)))));
  std::sort(order.begin(), order.end());
  return order;
}

// Real waveform from the complex rotated signal: per cell the larger of the
// +f and -f magnitudes, phase from that half (conjugated for -f), mirrored so
// the spectrum is Hermitian.
inline std::vector<double> max_spectrogram_waveform(std::span<const cplx> rotated, const spectral::StftConfig& cfg) {
  auto g = spectral::stft(rotated, cfg);
  const std::size_t n = g.num_freqs, half = n / 2;
  for (std::size_t k = 0; k < g.num_frames; ++k) {
    for (std::size_t d = 1; d < half; ++d) {
      const cplx pos = g.at(half + d, k);
      const cplx neg = std::conj(g.at(half - d, k));
      const cplx pick = std::norm(pos) >= std::norm(neg) ? pos : neg;
      g.at(half + d, k) = pick;
      g.at(half - d, k) = std::conj(pick);
    }
    g.at(half, k) = g.at(half, k).real();
    g.at(0, k) = g.at(0, k).real();
  }
  return spectral::istft_real(g, cfg);
}

}  // namespace internal

// Recovers the sound in one (receiver, bin) over `frames`: high-pass, line
// projection, spectrogram of the projected signal with max-of-halves
// recombination, inverse STFT, peak-normalized with the projection's sign. `silent_frames`
// (absolute frame indices) set the SNR noise reference; when none fall inside
// `frames`, the quietest share of frames is used.
inline RecoveredSound recover_bin(const CirFrameSeries& cir, std::size_t receiver, std::size_t bin, Span frames,
                                  const RecoverConfig& cfg = {}, const std::vector<std::size_t>& silent_frames = {}) {
  cfg.validate();
  detail::require(receiver < cir.num_receivers() && bin < cir.num_range_bins(), "recover_bin: receiver/bin out of range");
  const auto& sc = cfg.stft;
  const std::size_t total_frames = sc.num_frames(cir.num_samples());
  if (frames.empty() || frames.end > total_frames) throw ParameterError("recover_bin: span shorter than one frame or out of range");
  const std::size_t first = frames.begin * sc.hop();
  const std::size_t length = sc.signal_length(frames.size());
  const auto series = cir.series(receiver, bin).subspan(first, length);
  const double fs = cir.params().slow_time_rate;

  const auto centered = highpass(series, cfg.highpass_cutoff, cfg.highpass_taps, fs);
  double energy = 0.0;
  for (auto v : centered) energy += std::norm(v);
  if (!(energy > 0)) throw DegenerateError("recover_bin: no dynamic signal in the selected bin");
  const double theta = principal_angle(centered) + cfg.angle_offset;
  const auto proj = project_at(centered, theta);

  const std::vector<cplx> line(proj.projected.begin(), proj.projected.end());
  auto wave = internal::max_spectrogram_waveform(line, sc);

  double corr = 0.0, peak = 0.0;
  for (std::size_t i = 0; i < wave.size(); ++i) corr += wave[i] * proj.projected[i];
  for (double v : wave) peak = std::max(peak, std::abs(v));
  const double gain = peak > 0 ? (corr < 0 ? -1.0 : 1.0) * cfg.output_peak / peak : 0.0;
  for (double& v : wave) v *= gain;

  std::vector<std::size_t> silent;
  for (std::size_t k : silent_frames)
    if (frames.contains(k)) silent.push_back(k);
  std::vector<Span> silent_samples = internal::frames_to_samples(silent, frames, sc);
  if (silent_samples.empty()) {
    const auto quiet = internal::quietest_frames(proj.projected, frames.size(), sc, cfg.quiet_fraction);
    std::vector<std::size_t> absolute;
    for (std::size_t k : quiet) absolute.push_back(k + frames.begin);
    silent_samples = internal::frames_to_samples(absolute, frames, sc);
  }

  RecoveredSound out;
  out.audio.samples = std::move(wave);
  out.audio.sample_rate = fs;
  out.audio.label = "recovered";
  out.receiver = receiver;
  out.bins = {bin};
  out.frames = frames;
  out.snr_db = metrics::snr_silent(std::span<const double>(proj.projected), silent_samples);
  out.angle = theta;
  out.residual_power = proj.residual_power;
  return out;
}

// Selection combining: the candidate with the highest SNR (first on ties).
inline RecoveredSound combine_diversity(const std::vector<RecoveredSound>& candidates) {
  if (candidates.empty()) throw ParameterError("combine_diversity: no candidates");
  std::size_t best = 0;
  for (std::size_t i = 1; i < candidates.size(); ++i)
    if (candidates[i].snr_db > candidates[best].snr_db) best = i;
  return candidates[best];
}

// Bins with any detection, grouped so that consecutive members are at most
// `gap` bins apart.
inline std::vector<std::vector<std::size_t>> group_bins(const detect::DetectionResult& det, std::size_t gap) {
  std::vector<std::size_t> bins;
  for (std::size_t b = 0; b < det.labels.rows; ++b)
    for (std::size_t k = 0; k < det.labels.cols; ++k)
      if (det.labels.at(b, k)) {
        bins.push_back(b);
        break;
      }
  std::vector<std::vector<std::size_t>> groups;
  for (std::size_t b : bins) {
    if (groups.empty() || b - groups.back().back() > gap) groups.emplace_back();
    groups.back().push_back(b);
  }
  return groups;
}

// One recovered sound per group of detected bins, ordered by range. Every
// receiver and every bin within `neighbor_bins` of the group is a candidate;
// frames where the group has no detection serve as the silent reference.
inline std::vector<RecoveredSound> separate_sources(const CirFrameSeries& cir, const detect::DetectionResult& det,
                                                    const RecoverConfig& cfg = {}) {
  cfg.validate();
  const std::size_t frames = cfg.stft.num_frames(cir.num_samples());
  detail::require(det.labels.rows == cir.num_range_bins() && det.labels.cols == frames,
                  "separate_sources: detection map does not match the CIR");
  std::vector<RecoveredSound> out;
  for (const auto& group : group_bins(det, cfg.group_gap)) {
    std::vector<std::size_t> silent;
    for (std::size_t k = 0; k < frames; ++k) {
      bool active = false;
      for (std::size_t b : group) active = active || det.labels.at(b, k);
      if (!active) silent.push_back(k);
    }
    const std::size_t lo = group.front() > cfg.neighbor_bins ? group.front() - cfg.neighbor_bins : 0;
    const std::size_t hi = std::min(cir.num_range_bins() - 1, group.back() + cfg.neighbor_bins);
    std::vector<std::pair<std::size_t, std::size_t>> jobs;
    for (std::size_t rx = 0; rx < cir.num_receivers(); ++rx)
      for (std::size_t b = lo; b <= hi; ++b) jobs.push_back({rx, b});
    std::vector<std::optional<RecoveredSound>> results(jobs.size());
    parallel_for(jobs.size(), [&](std::size_t j) {
      try {
        results[j] = recover_bin(cir, jobs[j].first, jobs[j].second, {0, frames}, cfg, silent);
      } catch (const DegenerateError&) {
        // An empty neighbor bin carries nothing to recover.
      }
    });
    std::vector<RecoveredSound> candidates;
    for (auto& r : results)
      if (r) candidates.push_back(std::move(*r));
    if (!candidates.empty()) out.push_back(combine_diversity(candidates));
  }
  return out;
}

inline nlohmann::json sidecar_json(const RecoveredSound& r) {
  return {{"receiver", r.receiver},
          {"bins", r.bins},
          {"frames", {r.frames.begin, r.frames.end}},
          {"angle_rad", r.angle},
          {"residual_power", r.residual_power},
          {"snr_db", std::isfinite(r.snr_db) ? nlohmann::json(r.snr_db) : nlohmann::json("inf")},
          {"sample_rate", r.audio.sample_rate},
          {"num_samples", r.audio.samples.size()}};
}

}  // namespace radiomic::recover
