#pragma once

#include <nlohmann/json.hpp>

#include <cmath>
#include <optional>
#include <vector>

#include "radiomic/metrics/llr.hpp"
#include "radiomic/metrics/snr.hpp"
#include "radiomic/metrics/stoi.hpp"

namespace radiomic::metrics {

struct SegmentScore {
  Span samples;
  double llr = 0.0;
};

struct EvalReport {
  std::optional<double> snr_db;  // needs silent spans
  std::optional<double> llr;     // needs a reference
  std::optional<double> stoi;    // needs a reference of >= 1 s
  std::vector<SegmentScore> segments;
};

// Evaluates `estimate`; LLR and STOI need `reference`, SNR needs silent spans.
// Segments are consecutive one-second blocks scored by LLR.
inline EvalReport evaluate(const AudioSignal& estimate, const AudioSignal* reference, const std::vector<Span>& silent) {
  EvalReport r;
  if (!silent.empty()) r.snr_db = snr_silent(estimate, silent);
  if (reference) {
    r.llr = llr(*reference, estimate);
    if (reference->duration() >= 1.0 && estimate.duration() >= 1.0) r.stoi = stoi(*reference, estimate);
    const auto block = static_cast<std::size_t>(std::llround(reference->sample_rate));
    const std::size_t len = std::min(reference->samples.size(), estimate.samples.size());
    for (std::size_t start = 0; start + block <= len; start += block) {
      AudioSignal a{{reference->samples.begin() + static_cast<std::ptrdiff_t>(start), reference->samples.begin() + static_cast<std::ptrdiff_t>(start + block)}, reference->sample_rate, {}};
      AudioSignal b{{estimate.samples.begin() + static_cast<std::ptrdiff_t>(start), estimate.samples.begin() + static_cast<std::ptrdiff_t>(start + block)}, estimate.sample_rate, {}};
      const auto frames = llr_frames(a, b);
      if (frames.empty()) continue;
      double acc = 0;
      for (double v : frames) acc += v;
      r.segments.push_back({{start, start + block}, acc / static_cast<double>(frames.size())});
    }
  }
  return r;
}

inline nlohmann::json to_json(const EvalReport& r) {
  auto number = [](const std::optional<double>& v) -> nlohmann::json {
    if (!v) return nullptr;
    if (std::isinf(*v)) return *v > 0 ? "inf" : "-inf";
    return *v;
  };
  nlohmann::json segs = nlohmann::json::array();
  for (const auto& s : r.segments) segs.push_back({{"begin", s.samples.begin}, {"end", s.samples.end}, {"llr", s.llr}});
  return {{"snr_db", number(r.snr_db)}, {"llr", number(r.llr)}, {"stoi", number(r.stoi)}, {"segments", segs}};
}

}  // namespace radiomic::metrics
