#pragma once

#include <nlohmann/json.hpp>

#include <filesystem>
#include <fstream>
#include <memory>
#include <string>

#include "radiomic/core/error.hpp"
#include "radiomic/core/rng.hpp"
#include "radiomic/core/wav.hpp"
#include "radiomic/sim/scene.hpp"
#include "radiomic/sim/signals.hpp"

namespace radiomic::sim {

inline constexpr int kSceneSchemaVersion = 1;

namespace internal {

using nlohmann::json;

inline cplx complex_from(const json& j, cplx fallback) {
  if (j.is_null()) return fallback;
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2) return {j[0].get<double>(), j[1].get<double>()};
  throw ParameterError("complex values are written as [re, im]");
}

inline json complex_to(cplx v) { return json::array({v.real(), v.imag()}); }

inline std::shared_ptr<const AudioSignal> audio_from(const json& j, const std::filesystem::path& base_dir,
                                                     double default_rate, double default_duration) {
  if (j.is_string()) {
    const std::filesystem::path p = base_dir / j.get<std::string>();
    if (!std::filesystem::exists(p)) throw ParameterError("audio file not found: " + p.string());
    return std::make_shared<const AudioSignal>(wav::load(p));
  }
  if (!j.is_object() || !j.contains("synthetic")) throw ParameterError("source audio must be a path or {\"synthetic\": ...}");
  const std::string kind = j.at("synthetic").get<std::string>();
  const double rate = j.value("rate", default_rate);
  const double duration = j.value("duration", default_duration);
  Rng rng(j.value("seed", std::uint64_t{0}));
  AudioSignal a;
  if (kind == "tone") {
    a = tone(j.at("frequency").get<double>(), j.value("amplitude", 0.9), duration, rate);
  } else if (kind == "speech_like") {
    a = speech_like(duration, rate, rng);
  } else if (kind == "music_like") {
    a = music_like(duration, rate, rng);
  } else if (kind == "noise") {
    a = white_noise(j.value("rms", 0.25), duration, rate, rng);
  } else {
    throw ParameterError("unknown synthetic audio kind: " + kind);
  }
  return std::make_shared<const AudioSignal>(std::move(a));
}

}  // namespace internal

inline RadarParams radar_from_json(const nlohmann::json& j) {
  RadarParams r;
  r.carrier_frequency = j.value("carrier_frequency", r.carrier_frequency);
  r.bandwidth = j.value("bandwidth", r.bandwidth);
  r.slow_time_rate = j.value("slow_time_rate", r.slow_time_rate);
  r.num_range_bins = j.value("num_range_bins", r.num_range_bins);
  r.num_receivers = j.value("num_receivers", r.num_receivers);
  r.validate();
  return r;
}

inline nlohmann::json radar_to_json(const RadarParams& r) {
  return {{"carrier_frequency", r.carrier_frequency},
          {"bandwidth", r.bandwidth},
          {"slow_time_rate", r.slow_time_rate},
          {"num_range_bins", r.num_range_bins},
          {"num_receivers", r.num_receivers}};
}

inline ChannelResponse channel_from_json(const nlohmann::json& j, double nyquist) {
  if (j.is_null()) return ChannelResponse::flat(nyquist);
  ChannelResponse c;
  c.breakpoint_frequencies = j.at("frequencies").get<std::vector<double>>();
  c.breakpoint_gains_db = j.at("gains_db").get<std::vector<double>>();
  c.jitter_db = j.value("jitter_db", 0.0);
  c.validate(nyquist);
  return c;
}

inline nlohmann::json channel_to_json(const ChannelResponse& c) {
  return {{"frequencies", c.breakpoint_frequencies}, {"gains_db", c.breakpoint_gains_db}, {"jitter_db", c.jitter_db}};
}

// Parses a scene document. Relative audio paths resolve against `base_dir`.
inline SceneDescription scene_from_json(const nlohmann::json& j, const std::filesystem::path& base_dir = ".") {
  using internal::complex_from;
  try {
    if (j.value("schema_version", kSceneSchemaVersion) != kSceneSchemaVersion)
      throw ParameterError("unsupported scene schema_version");
    SceneDescription s;
    s.radar = radar_from_json(j.value("radar", nlohmann::json::object()));
    s.duration = j.at("duration").get<double>();
    s.seed = j.value("seed", std::uint64_t{0});
    const double nyquist = s.radar.slow_time_rate / 2.0;
    if (j.contains("noise_power_per_receiver")) {
      s.noise_power_per_receiver = j.at("noise_power_per_receiver").get<std::vector<double>>();
    } else {
      s.noise_power_per_receiver.assign(s.radar.num_receivers, j.value("noise_power", 0.0));
    }
    for (const auto& js : j.value("sources", nlohmann::json::array())) {
      VibrationSource v;
      v.audio = internal::audio_from(js.at("audio"), base_dir, s.radar.slow_time_rate, s.duration);
      v.audio_ref = js.at("audio").dump();
      v.channel = channel_from_json(js.value("channel", nlohmann::json()), nyquist);
      v.peak_displacement = js.value("peak_displacement", v.peak_displacement);
      v.range = js.at("range").get<double>();
      v.reflectivity = complex_from(js.value("reflectivity", nlohmann::json()), v.reflectivity);
      const std::string kind = js.value("kind", std::string("active"));
      if (kind != "active" && kind != "passive") throw ParameterError("source kind must be active or passive");
      v.kind = kind == "active" ? SourceKind::Active : SourceKind::Passive;
      v.start_time = js.value("start_time", 0.0);
      for (const auto& m : js.value("body_motion", nlohmann::json::array()))
        v.body_motion.push_back({m.at("frequency").get<double>(), m.at("amplitude").get<double>(), m.value("phase", 0.0)});
      s.sources.push_back(std::move(v));
    }
    for (const auto& ji : j.value("interferers", nlohmann::json::array())) {
      MotionInterferer it;
      for (const auto& p : ji.at("trajectory")) it.trajectory.push_back({p.at(0).get<double>(), p.at(1).get<double>()});
      it.reflectivity = complex_from(ji.value("reflectivity", nlohmann::json()), it.reflectivity);
      it.ease_time = ji.value("ease_time", it.ease_time);
      s.interferers.push_back(std::move(it));
    }
    for (const auto& jb : j.value("background", nlohmann::json::array()))
      s.background.push_back({jb.at("range").get<double>(), complex_from(jb.value("reflectivity", nlohmann::json()), {1.0, 0.0})});
    for (const auto& jm : j.value("multipath", nlohmann::json::array()))
      s.multipath.push_back({jm.at("source_index").get<std::size_t>(), jm.at("extra_delay_bins").get<int>(),
                             jm.value("attenuation_db", 0.0)});
    if (j.contains("wall"))
      s.wall = WallSpec{j["wall"].value("attenuation_db", 0.0), j["wall"].value("extra_noise_power", 0.0)};
    s.validate();
    return s;
  } catch (const nlohmann::json::exception& e) {
    throw ParameterError(std::string("invalid scene JSON: ") + e.what());
  }
}

inline SceneDescription load_scene(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open scene file: " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("scene file is not valid JSON: ") + e.what());
  }
  return scene_from_json(j, path.parent_path());
}

}  // namespace radiomic::sim
