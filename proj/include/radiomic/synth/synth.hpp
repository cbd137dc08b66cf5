#pragma once

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <filesystem>
#include <limits>
#include <string>
#include <vector>

#include "radiomic/core/digest.hpp"
#include "radiomic/core/error.hpp"
#include "radiomic/core/filters.hpp"
#include "radiomic/core/parallel.hpp"
#include "radiomic/core/resample.hpp"
#include "radiomic/core/rng.hpp"
#include "radiomic/core/tensor_io.hpp"
#include "radiomic/core/wav.hpp"
#include "radiomic/recover/projection.hpp"
#include "radiomic/sim/scene_json.hpp"
#include "radiomic/sim/scenarios.hpp"
#include "radiomic/spectral/patch.hpp"

namespace radiomic::synth {

inline constexpr double kSynthRate = 6250.0;
inline constexpr int kSynthSchemaVersion = 1;

struct SynthConfig {
  std::vector<ChannelResponse> channel_templates = sim::channel_templates();
  double jitter_db = 1.5;
  double min_snr_db = -5.0, max_snr_db = 30.0;
  std::size_t shard_size = 1024;
  double noise_highpass_hz = 100.0;

  void validate() const {
    detail::require(!channel_templates.empty(), "synth: at least one channel template required");
    for (const auto& c : channel_templates) c.validate(kSynthRate / 2);
    detail::require(jitter_db >= 0, "synth: jitter_db must be >= 0");
    detail::require(min_snr_db <= max_snr_db, "synth: snr range is inverted");
    detail::require(shard_size >= 1, "synth: shard_size must be >= 1");
  }
};

inline nlohmann::json to_json(const SynthConfig& c) {
  nlohmann::json templates = nlohmann::json::array();
  for (const auto& t : c.channel_templates) templates.push_back(sim::channel_to_json(t));
  return {{"schema_version", kSynthSchemaVersion},
          {"channel_templates", templates},
          {"jitter_db", c.jitter_db},
          {"snr_db_range", {c.min_snr_db, c.max_snr_db}},
          {"shard_size", c.shard_size},
          {"noise_highpass_hz", c.noise_highpass_hz}};
}

inline SynthConfig synth_config_from_json(const nlohmann::json& j) {
  SynthConfig c;
  try {
    if (j.value("schema_version", kSynthSchemaVersion) != kSynthSchemaVersion)
      throw ParameterError("unsupported synth config schema_version");
    if (j.contains("channel_templates")) {
      c.channel_templates.clear();
      for (const auto& t : j.at("channel_templates")) c.channel_templates.push_back(sim::channel_from_json(t, kSynthRate / 2));
    }
    c.jitter_db = j.value("jitter_db", c.jitter_db);
    if (j.contains("snr_db_range")) {
      c.min_snr_db = j.at("snr_db_range").at(0).get<double>();
      c.max_snr_db = j.at("snr_db_range").at(1).get<double>();
    }
    c.shard_size = j.value("shard_size", c.shard_size);
    c.noise_highpass_hz = j.value("noise_highpass_hz", c.noise_highpass_hz);
  } catch (const nlohmann::json::exception& e) {
    throw ParameterError(std::string("invalid synth config: ") + e.what());
  }
  c.validate();
  return c;
}

inline std::string config_digest(const SynthConfig& c) { return fnv1a_hex(to_json(c).dump()); }

// h * a through the channel realized with per-seed jitter, plus receive-chain
// noise (complex white noise, high-passed like the recovery front end, real
// part) scaled so that signal power / noise power equals `snr_db`. An
// infinite SNR adds nothing.
inline AudioSignal degrade(const AudioSignal& audio, const ChannelResponse& channel, double snr_db, std::uint64_t seed,
                           double noise_highpass_hz = 100.0) {
  audio.validate();
  detail::require(std::abs(audio.sample_rate - kSynthRate) < 1e-9, "degrade: audio must be at 6250 Hz");
  detail::require(!std::isnan(snr_db), "degrade: snr_db is NaN");
  const Rng root(seed);
  Rng jitter = root.fork(1);
  const auto h = filters::realize_channel(channel, audio.sample_rate, &jitter);
  AudioSignal out = audio;
  out.samples = filters::apply_centered<double>(audio.samples, h);
  if (std::isinf(snr_db) && snr_db > 0) return out;
  double signal_power = 0.0;
  for (double v : out.samples) signal_power += v * v;
  if (out.samples.empty() || signal_power <= 0) return out;
  signal_power /= static_cast<double>(out.samples.size());

  Rng noise_rng = root.fork(2);
  std::vector<cplx> noise(out.samples.size());
  for (auto& v : noise) v = noise_rng.complex_normal(1.0);
  if (noise.size() >= 16) noise = recover::highpass(noise, noise_highpass_hz, 255, audio.sample_rate);
  double noise_power = 0.0;
  for (const auto& v : noise) noise_power += v.real() * v.real();
  noise_power /= static_cast<double>(noise.size());
  if (noise_power <= 0) return out;
  const double scale = std::sqrt(signal_power / std::pow(10.0, snr_db / 10.0) / noise_power);
  for (std::size_t i = 0; i < out.samples.size(); ++i) out.samples[i] += scale * noise[i].real();
  return out;
}

struct PairInfo {
  std::string file;
  std::size_t offset = 0;  // samples at 6250 Hz
  std::size_t channel = 0;
  double snr_db = 0.0;
};

struct TrainingPair {
  spectral::MagnitudeMatrix input;   // log1p, degraded
  spectral::MagnitudeMatrix target;  // log1p, clean
  PairInfo info;
};

// Samples needed for a 128-frame patch.
inline std::size_t patch_samples(const spectral::StftConfig& cfg = {}) { return cfg.signal_length(spectral::kPatchSize); }

inline spectral::MagnitudeMatrix log1p_patch(std::span<const double> segment) {
  auto m = spectral::one_sided_magnitude(segment);
  for (double& v : m.data) v = spectral::log1p_map(v);
  return m;
}

// Deterministic generator of training pairs from a directory of WAV files.
// Draw i depends only on (seed, i): a file long enough for one patch, an
// offset inside it, a channel template, an SNR and a degradation seed.
class PairStream {
 public:
  PairStream(const std::filesystem::path& audio_dir, SynthConfig config, std::size_t count, std::uint64_t seed)
      : config_(std::move(config)), count_(count), root_(seed) {
    config_.validate();
    if (!std::filesystem::is_directory(audio_dir)) throw ParameterError("audio directory not found: " + audio_dir.string());
    std::vector<std::filesystem::path> paths;
    for (const auto& e : std::filesystem::directory_iterator(audio_dir)) {
      if (!e.is_regular_file()) continue;
      std::string ext = e.path().extension().string();
      std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
      if (ext == ".wav") paths.push_back(e.path());
    }
    if (paths.empty()) throw ParameterError("audio directory contains no WAV files: " + audio_dir.string());
    std::sort(paths.begin(), paths.end());
    const std::size_t need = patch_samples();
    for (const auto& p : paths) {
      auto a = wav::load(p);
      if (std::abs(a.sample_rate - kSynthRate) > 1e-9) a = resample(a, kSynthRate);
      if (a.samples.size() < need) continue;
      names_.push_back(p.filename().string());
      audio_.push_back(std::move(a));
    }
    if (audio_.empty()) throw ParameterError("no WAV file is long enough for one 128-frame patch");
  }

  std::size_t size() const { return count_; }

  TrainingPair pair(std::size_t i) const {
    detail::require(i < count_, "pair index out of range");
    Rng r = root_.fork(i);
    const std::size_t file = r.index(audio_.size());
    const auto& a = audio_[file];
    const std::size_t need = patch_samples();
    const std::size_t offset = r.index(a.samples.size() - need + 1);
    const std::size_t channel = r.index(config_.channel_templates.size());
    const double snr = r.uniform(config_.min_snr_db, config_.max_snr_db);
    const std::uint64_t degrade_seed = r.engine()();

    AudioSignal clean{{a.samples.begin() + static_cast<std::ptrdiff_t>(offset), a.samples.begin() + static_cast<std::ptrdiff_t>(offset + need)},
                      kSynthRate, a.label};
    ChannelResponse ch = config_.channel_templates[channel];
    ch.jitter_db = config_.jitter_db;
    const auto degraded = degrade(clean, ch, snr, degrade_seed, config_.noise_highpass_hz);
    return {log1p_patch(degraded.samples), log1p_patch(clean.samples), {names_[file], offset, channel, snr}};
  }

  const SynthConfig& config() const { return config_; }

 private:
  SynthConfig config_;
  std::size_t count_;
  Rng root_;
  std::vector<std::string> names_;
  std::vector<AudioSignal> audio_;
};

inline PairStream make_pairs(const std::filesystem::path& audio_dir, const SynthConfig& config, std::size_t count,
                             std::uint64_t seed) {
  return PairStream(audio_dir, config, count, seed);
}

// Writes pairs as RSPG float32 tensors [n x 2 x 128 x 128] (input, target) of
// at most shard_size pairs each; returns the files written.
inline std::vector<std::filesystem::path> write_shards(const PairStream& stream, const std::filesystem::path& out_dir,
                                                       std::uint64_t seed) {
  std::filesystem::create_directories(out_dir);
  const std::size_t shard = stream.config().shard_size;
  const std::size_t patch = spectral::kPatchSize * spectral::kPatchSize;
  std::vector<std::filesystem::path> written;
  for (std::size_t first = 0; first < stream.size(); first += shard) {
    const std::size_t n = std::min(shard, stream.size() - first);
    std::vector<TrainingPair> pairs(n);
    parallel_for(n, [&](std::size_t i) { pairs[i] = stream.pair(first + i); });
    RealTensor t({n, 2, spectral::kPatchSize, spectral::kPatchSize});
    nlohmann::json info = nlohmann::json::array();
    for (std::size_t i = 0; i < n; ++i) {
      float* dst = t.data.data() + i * 2 * patch;
      for (std::size_t c = 0; c < patch; ++c) {
        dst[c] = static_cast<float>(pairs[i].input.data[c]);
        dst[patch + c] = static_cast<float>(pairs[i].target.data[c]);
      }
      info.push_back({{"file", pairs[i].info.file},
                      {"offset", pairs[i].info.offset},
                      {"channel", pairs[i].info.channel},
                      {"snr_db", pairs[i].info.snr_db}});
    }
    char name[32];
    std::snprintf(name, sizeof name, "shard-%05zu.rspg", first / shard);
    const auto path = out_dir / name;
    save_tensor({t,
                 {{"kind", "training_pairs"},
                  {"schema_version", kSynthSchemaVersion},
                  {"seed", seed},
                  {"config_digest", config_digest(stream.config())},
                  {"first_index", first},
                  {"layout", "pair x [input, target] x freq x frame"},
                  {"mapping", "log1p"},
                  {"pairs", info}}},
                path);
    written.push_back(path);
  }
  return written;
}

}  // namespace radiomic::synth
