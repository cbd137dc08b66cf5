#pragma once

#include <nlohmann/json.hpp>

#include <string>
#include <vector>

#include "radiomic/core/error.hpp"
#include "radiomic/core/types.hpp"

namespace radiomic::detect {

enum class Method { RadiomicOutlier, RadiomicThreshold, Cfar, Hhi };

inline std::string to_string(Method m) {
  switch (m) {
    case Method::RadiomicOutlier: return "radiomic_outlier";
    case Method::RadiomicThreshold: return "radiomic_threshold";
    case Method::Cfar: return "cfar";
    case Method::Hhi: return "hhi";
  }
  return "unknown";
}

inline Method method_from_string(const std::string& s) {
  if (s == "radiomic_outlier") return Method::RadiomicOutlier;
  if (s == "radiomic_threshold") return Method::RadiomicThreshold;
  if (s == "cfar") return Method::Cfar;
  if (s == "hhi") return Method::Hhi;
  throw FormatError("unknown detection method: " + s);
}

struct BinSpan {
  std::size_t bin = 0;
  Span frames;
  friend bool operator==(const BinSpan&, const BinSpan&) = default;
};

struct DetectionResult {
  LabelMatrix labels;  // [range_bin x frame], 1 = sound
  RealMatrix scores;   // [range_bin x frame], larger = more sound-like
  std::vector<BinSpan> detected_bins;
  Method method = Method::RadiomicOutlier;

  bool any() const { return !detected_bins.empty(); }
};

// Runs of consecutive labelled frames per bin, ordered by bin then frame.
inline std::vector<BinSpan> label_runs(const LabelMatrix& labels) {
  std::vector<BinSpan> runs;
  for (std::size_t b = 0; b < labels.rows; ++b) {
    std::size_t k = 0;
    while (k < labels.cols) {
      if (!labels.at(b, k)) {
        ++k;
        continue;
      }
      const std::size_t start = k;
      while (k < labels.cols && labels.at(b, k)) ++k;
      runs.push_back({b, {start, k}});
    }
  }
  return runs;
}

inline DetectionResult make_result(LabelMatrix labels, RealMatrix scores, Method method) {
  DetectionResult r;
  r.detected_bins = label_runs(labels);
  r.labels = std::move(labels);
  r.scores = std::move(scores);
  r.method = method;
  return r;
}

inline constexpr int kDetectionSchemaVersion = 1;

// Labels are written run-length encoded: {"<bin>": [[start, length], ...]}.
inline nlohmann::json to_json(const DetectionResult& r) {
  nlohmann::json runs = nlohmann::json::object();
  for (const auto& s : r.detected_bins)
    runs[std::to_string(s.bin)].push_back({s.frames.begin, s.frames.size()});
  return {{"schema_version", kDetectionSchemaVersion},
          {"method", to_string(r.method)},
          {"num_range_bins", r.labels.rows},
          {"num_frames", r.labels.cols},
          {"labels", runs}};
}

inline DetectionResult detection_from_json(const nlohmann::json& j) {
  try {
    if (j.value("schema_version", kDetectionSchemaVersion) != kDetectionSchemaVersion)
      throw UnsupportedError("unsupported detection schema_version");
    const std::size_t bins = j.at("num_range_bins").get<std::size_t>();
    const std::size_t frames = j.at("num_frames").get<std::size_t>();
    LabelMatrix labels(bins, frames, 0);
    for (const auto& [key, list] : j.at("labels").items()) {
      const std::size_t b = std::stoul(key);
      if (b >= bins) throw FormatError("detection bin out of range");
      for (const auto& run : list) {
        const std::size_t start = run.at(0).get<std::size_t>();
        const std::size_t len = run.at(1).get<std::size_t>();
        if (start + len > frames) throw FormatError("detection run exceeds frame count");
        for (std::size_t k = start; k < start + len; ++k) labels.at(b, k) = 1;
      }
    }
    return make_result(std::move(labels), RealMatrix(bins, frames), method_from_string(j.at("method").get<std::string>()));
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("invalid detection JSON: ") + e.what());
  } catch (const std::logic_error&) {
    throw FormatError("invalid detection bin key");
  }
}

// Cell-wise OR of labels and max of scores.
inline DetectionResult combine_or(const std::vector<DetectionResult>& parts) {
  detail::require(!parts.empty(), "combine_or: no detection maps");
  LabelMatrix labels = parts.front().labels;
  RealMatrix scores = parts.front().scores;
  for (std::size_t i = 1; i < parts.size(); ++i) {
    detail::require(parts[i].labels.same_shape(labels), "combine_or: shape mismatch");
    for (std::size_t c = 0; c < labels.data.size(); ++c) {
      labels.data[c] = labels.data[c] | parts[i].labels.data[c];
      scores.data[c] = std::max(scores.data[c], parts[i].scores.data[c]);
    }
  }
  return make_result(std::move(labels), std::move(scores), parts.front().method);
}

}  // namespace radiomic::detect
