#pragma once

#include <nlohmann/json.hpp>

#include <filesystem>
#include <fstream>
#include <map>
#include <string>
#include <vector>

#include "radiomic/core/parallel.hpp"
#include "radiomic/detect/cfar.hpp"
#include "radiomic/detect/hhi.hpp"
#include "radiomic/detect/outlier.hpp"
#include "radiomic/detect/roc.hpp"
#include "radiomic/sim/scenarios.hpp"
#include "radiomic/sim/scene_json.hpp"
#include "radiomic/sim/simulate.hpp"
#include "radiomic/sim/truth.hpp"
#include "radiomic/spectral/range_doppler.hpp"

namespace radiomic::detect {

inline constexpr int kSuiteSchemaVersion = 1;

struct DetectorSet {
  DetectConfig radiomic;
  CfarConfig cfar;
  HhiConfig hhi;
};

// Score map of one method on one spectrogram. "radiomic" is the robust
// outlier score, so the ROC sweeps the MAD multiplier.
inline RealMatrix method_scores(const std::string& method, const RangeDopplerSpectrogram& spec, const DetectorSet& d) {
  if (method == "radiomic") return detect_radiomic(spec, d.radiomic).scores;
  if (method == "cfar") return detect_cfar(spec, d.cfar).scores;
  if (method == "hhi") return detect_hhi(spec, d.hhi).scores;
  throw ParameterError("unknown detection method: " + method);
}

// Benchmark suite: either `count` generated scenes from `seed`, or explicit
// scene files.
struct SuiteSpec {
  std::size_t count = 50;
  std::uint64_t seed = 1;
  sim::DetectionSuiteOptions options;
  std::vector<std::string> methods{"radiomic", "cfar", "hhi"};
  std::size_t points = 101;
  std::vector<std::filesystem::path> scene_files;
};

inline SuiteSpec suite_from_json(const nlohmann::json& j, const std::filesystem::path& base_dir = ".") {
  SuiteSpec s;
  try {
    if (j.value("schema_version", kSuiteSchemaVersion) != kSuiteSchemaVersion)
      throw ParameterError("unsupported suite schema_version");
    s.count = j.value("count", s.count);
    s.seed = j.value("seed", s.seed);
    s.points = j.value("points", s.points);
    if (j.contains("methods")) s.methods = j.at("methods").get<std::vector<std::string>>();
    if (j.contains("scenes"))
      for (const auto& p : j.at("scenes")) s.scene_files.push_back(base_dir / p.get<std::string>());
    if (j.contains("options")) {
      const auto& o = j.at("options");
      auto& d = s.options;
      d.range_bins = o.value("range_bins", d.range_bins);
      d.receivers = o.value("receivers", d.receivers);
      d.duration = o.value("duration", d.duration);
      if (o.contains("displacement_range")) {
        d.min_displacement = o["displacement_range"].at(0).get<double>();
        d.max_displacement = o["displacement_range"].at(1).get<double>();
      }
      if (o.contains("noise_range")) {
        d.min_noise = o["noise_range"].at(0).get<double>();
        d.max_noise = o["noise_range"].at(1).get<double>();
      }
      if (o.contains("speed_range")) {
        d.min_speed = o["speed_range"].at(0).get<double>();
        d.max_speed = o["speed_range"].at(1).get<double>();
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw ParameterError(std::string("invalid suite JSON: ") + e.what());
  }
  detail::require(!s.methods.empty(), "suite needs at least one method");
  for (const auto& m : s.methods)
    detail::require(m == "radiomic" || m == "cfar" || m == "hhi", "unknown detection method in suite: " + m);
  detail::require(s.scene_files.empty() ? s.count >= 1 : true, "suite needs at least one scene");
  detail::require(s.options.range_bins >= 21, "suite scenes need >= 21 range bins");
  return s;
}

inline SuiteSpec load_suite(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open suite file: " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("suite file is not valid JSON: ") + e.what());
  }
  return suite_from_json(j, path.parent_path());
}

struct MethodRoc {
  std::vector<RocPoint> curve;
  double auc = 0.0;
};

struct SuiteResult {
  std::size_t scenes = 0;
  std::size_t positives = 0, cells = 0;
  std::map<std::string, MethodRoc> methods;
};

// Simulates every scene, scores it with each method and pools the (bin,
// frame) cells of all scenes into one ROC per method.
inline SuiteResult run_suite(const SuiteSpec& spec, const DetectorSet& detectors = {}) {
  std::vector<sim::SceneDescription> scenes;
  if (spec.scene_files.empty()) {
    scenes = sim::detection_suite(spec.count, spec.seed, spec.options);
  } else {
    for (const auto& p : spec.scene_files) scenes.push_back(sim::load_scene(p));
  }
  std::vector<LabelMatrix> truths(scenes.size());
  std::vector<std::vector<RealMatrix>> scores(scenes.size());
  parallel_for(scenes.size(), [&](std::size_t i) {
    const auto rd = spectral::range_doppler(sim::simulate(scenes[i]), detectors.radiomic.stft);
    truths[i] = sim::sound_truth(scenes[i], detectors.radiomic.stft);
    for (const auto& m : spec.methods) scores[i].push_back(method_scores(m, rd, detectors));
  });

  std::size_t total = 0;
  for (const auto& t : truths) total += t.data.size();
  LabelMatrix pooled_truth(1, total);
  std::size_t at = 0;
  for (const auto& t : truths) {
    std::copy(t.data.begin(), t.data.end(), pooled_truth.data.begin() + static_cast<std::ptrdiff_t>(at));
    at += t.data.size();
  }
  SuiteResult r;
  r.scenes = scenes.size();
  r.cells = total;
  for (auto v : pooled_truth.data) r.positives += v;
  for (std::size_t m = 0; m < spec.methods.size(); ++m) {
    RealMatrix pooled(1, total);
    at = 0;
    for (const auto& s : scores) {
      std::copy(s[m].data.begin(), s[m].data.end(), pooled.data.begin() + static_cast<std::ptrdiff_t>(at));
      at += s[m].data.size();
    }
    r.methods[spec.methods[m]] = {roc_curve(pooled_truth, pooled, spec.points), roc_auc(pooled_truth, pooled)};
  }
  return r;
}

}  // namespace radiomic::detect
