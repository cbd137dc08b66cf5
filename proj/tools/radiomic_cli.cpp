// radiomic: batch front end for simulation, detection, recovery, dataset
// synthesis, evaluation, ROC benchmarking and liveness checks.

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "radiomic/core/digest.hpp"
#include "radiomic/core/parallel.hpp"
#include "radiomic/core/wav.hpp"
#include "radiomic/detect/liveness.hpp"
#include "radiomic/detect/suite.hpp"
#include "radiomic/metrics/report.hpp"
#include "radiomic/recover/recover.hpp"
#include "radiomic/sim/cir_io.hpp"
#include "radiomic/sim/signals.hpp"
#include "radiomic/sim/truth.hpp"
#include "radiomic/synth/synth.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace radiomic;

namespace {

constexpr int kCliSchemaVersion = 1;

enum Exit { kOk = 0, kUsage = 2, kFormat = 3, kNumeric = 4 };

// Everything a command may read from the config file. Defaults come from the
// library structs; the file then overrides them, and flags override both.
struct Settings {
  detect::DetectorSet detectors;
  detect::LivenessConfig liveness;
  recover::RecoverConfig recover;
  synth::SynthConfig synth;
  std::size_t threads = 0;
};

json settings_json(const Settings& s) {
  const auto& d = s.detectors;
  return {{"schema_version", kCliSchemaVersion},
          {"threads", s.threads},
          {"detect",
           {{"dc_guard_hz", d.radiomic.dc_guard_hz},
            {"normalized_metric", d.radiomic.normalized_metric},
            {"threshold_scale", d.radiomic.threshold_scale},
            {"history_frames", d.radiomic.history_frames},
            {"min_frames", d.radiomic.min_frames}}},
          {"cfar", {{"guard", d.cfar.guard}, {"train", d.cfar.train}, {"scale", d.cfar.scale}, {"dc_guard_hz", d.cfar.dc_guard_hz}}},
          {"hhi", {{"threshold", d.hhi.threshold}, {"dc_guard_hz", d.hhi.dc_guard_hz}}},
          {"recover",
           {{"highpass_cutoff", s.recover.highpass_cutoff},
            {"highpass_taps", s.recover.highpass_taps},
            {"output_peak", s.recover.output_peak},
            {"neighbor_bins", s.recover.neighbor_bins},
            {"group_gap", s.recover.group_gap},
            {"quiet_fraction", s.recover.quiet_fraction}}},
          {"liveness",
           {{"band_low_hz", s.liveness.band_low_hz},
            {"band_high_hz", s.liveness.band_high_hz},
            {"floor_hz", s.liveness.floor_hz},
            {"threshold", s.liveness.threshold}}},
          {"synth", synth::to_json(s.synth)}};
}

template <typename T>
void take(const json& j, const char* key, T& field) {
  if (j.contains(key)) field = j.at(key).get<T>();
}

void apply_settings(const json& j, Settings& s) {
  if (j.value("schema_version", kCliSchemaVersion) != kCliSchemaVersion) throw ParameterError("unsupported config schema_version");
  try {
    take(j, "threads", s.threads);
    if (j.contains("detect")) {
      const auto& d = j["detect"];
      auto& c = s.detectors.radiomic;
      take(d, "dc_guard_hz", c.dc_guard_hz);
      take(d, "normalized_metric", c.normalized_metric);
      take(d, "threshold_scale", c.threshold_scale);
      take(d, "history_frames", c.history_frames);
      take(d, "min_frames", c.min_frames);
    }
    if (j.contains("cfar")) {
      auto& c = s.detectors.cfar;
      take(j["cfar"], "guard", c.guard);
      take(j["cfar"], "train", c.train);
      take(j["cfar"], "scale", c.scale);
      take(j["cfar"], "dc_guard_hz", c.dc_guard_hz);
    }
    if (j.contains("hhi")) {
      take(j["hhi"], "threshold", s.detectors.hhi.threshold);
      take(j["hhi"], "dc_guard_hz", s.detectors.hhi.dc_guard_hz);
    }
    if (j.contains("recover")) {
      const auto& r = j["recover"];
      take(r, "highpass_cutoff", s.recover.highpass_cutoff);
      take(r, "highpass_taps", s.recover.highpass_taps);
      take(r, "output_peak", s.recover.output_peak);
      take(r, "neighbor_bins", s.recover.neighbor_bins);
      take(r, "group_gap", s.recover.group_gap);
      take(r, "quiet_fraction", s.recover.quiet_fraction);
    }
    if (j.contains("liveness")) {
      const auto& l = j["liveness"];
      take(l, "band_low_hz", s.liveness.band_low_hz);
      take(l, "band_high_hz", s.liveness.band_high_hz);
      take(l, "floor_hz", s.liveness.floor_hz);
      take(l, "threshold", s.liveness.threshold);
    }
  } catch (const json::exception& e) {
    throw ParameterError(std::string("invalid config: ") + e.what());
  }
  if (j.contains("synth")) s.synth = synth::synth_config_from_json(j["synth"]);
}

json read_json(const fs::path& path, const char* what) {
  std::ifstream in(path);
  if (!in) throw IoError(std::string("cannot open ") + what + ": " + path.string());
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw FormatError(std::string(what) + " is not valid JSON: " + e.what());
  }
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out << text;
}

std::string file_digest(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  const std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return fnv1a_hex(bytes);
}

// "a:b,c:d" in seconds (evaluate) or milliseconds (liveness).
std::vector<std::pair<double, double>> parse_ranges(const std::string& text) {
  std::vector<std::pair<double, double>> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto colon = item.find(':');
    if (colon == std::string::npos) throw ParameterError("range must look like start:end, got '" + item + "'");
    try {
      out.push_back({std::stod(item.substr(0, colon)), std::stod(item.substr(colon + 1))});
    } catch (const std::exception&) {
      throw ParameterError("range must look like start:end, got '" + item + "'");
    }
    if (!(out.back().second > out.back().first) || out.back().first < 0) throw ParameterError("range end must exceed its start: " + item);
  }
  if (out.empty()) throw ParameterError("empty range list");
  return out;
}

std::string fmt(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

// Shared state for all subcommands.
struct Context {
  bool as_json = false;
  bool print_config = false;
  std::string config_path;
  Settings settings;

  void emit(const std::string& command, json body, const std::string& human) const {
    if (as_json) {
      body["schema_version"] = kCliSchemaVersion;
      body["command"] = command;
      std::cout << body.dump(2) << "\n";
    } else {
      std::cout << human;
    }
  }
};

// ---- simulate -------------------------------------------------------------

struct SimulateArgs {
  std::string scene, out, truth;
  std::uint64_t seed = 0;
};

int run_simulate(Context& ctx, CLI::Option* seed_opt, const SimulateArgs& a) {
  const json doc = read_json(a.scene, "scene file");
  auto scene = sim::scene_from_json(doc, fs::path(a.scene).parent_path());
  if (seed_opt->count() > 0) scene.seed = a.seed;
  if (ctx.print_config) {
    std::cout << json{{"seed", scene.seed}, {"scene_digest", fnv1a_hex(doc.dump())}}.dump(2) << "\n";
    return kOk;
  }
  const auto cir = sim::simulate(scene);
  sim::save_cir(cir, a.out, {{"scene_digest", fnv1a_hex(doc.dump())}, {"seed", scene.seed}, {"duration", scene.duration}});
  json body{{"output", a.out},
            {"receivers", cir.num_receivers()},
            {"range_bins", cir.num_range_bins()},
            {"samples", cir.num_samples()},
            {"seed", scene.seed}};
  if (!a.truth.empty()) {
    const auto truth = sim::sound_truth(scene);
    json bins = json::array();
    for (const auto& s : scene.sources) bins.push_back(scene.bin_of(s.range));
    const auto result = detect::make_result(truth, RealMatrix(truth.rows, truth.cols), detect::Method::RadiomicOutlier);
    auto tj = detect::to_json(result);
    tj.erase("method");
    tj["source_bins"] = bins;
    write_text(a.truth, tj.dump(2) + "\n");
    body["truth"] = a.truth;
  }
  std::ostringstream h;
  h << "wrote " << a.out << " (" << cir.num_receivers() << " rx x " << cir.num_range_bins() << " bins x " << cir.num_samples()
    << " samples)\n";
  ctx.emit("simulate", body, h.str());
  return kOk;
}

// ---- detect ---------------------------------------------------------------

struct DetectArgs {
  std::string cir, out, method = "radiomic";
  double threshold_scale = 0, cfar_scale = 0, hhi_threshold = 0;
};

int run_detect(Context& ctx, const DetectArgs& a, CLI::Option* ts, CLI::Option* cs, CLI::Option* ht) {
  auto& d = ctx.settings.detectors;
  if (ts->count() > 0) d.radiomic.threshold_scale = a.threshold_scale;
  if (cs->count() > 0) d.cfar.scale = a.cfar_scale;
  if (ht->count() > 0) d.hhi.threshold = a.hhi_threshold;
  if (ctx.print_config) {
    auto s = settings_json(ctx.settings);
    std::cout << json{{"method", a.method}, {a.method == "radiomic" ? "detect" : a.method, s[a.method == "radiomic" ? "detect" : a.method]}}.dump(2)
              << "\n";
    return kOk;
  }
  d.radiomic.validate();
  const auto cir = sim::load_cir(a.cir);
  const auto spec = spectral::range_doppler(cir, d.radiomic.stft);
  detect::DetectionResult r;
  if (a.method == "radiomic") r = detect::detect_radiomic(spec, d.radiomic);
  else if (a.method == "cfar") r = detect::detect_cfar(spec, d.cfar);
  else r = detect::detect_hhi(spec, d.hhi);
  auto out = detect::to_json(r);
  out["source"] = {{"cir", fs::path(a.cir).filename().string()}, {"cir_digest", file_digest(a.cir)}};
  write_text(a.out, out.dump(2) + "\n");

  std::vector<std::size_t> bins;
  for (const auto& b : r.detected_bins)
    if (bins.empty() || bins.back() != b.bin) bins.push_back(b.bin);
  std::ostringstream h;
  h << "method " << a.method << ": " << bins.size() << " bin(s) with sound";
  for (std::size_t i = 0; i < bins.size(); ++i) h << (i ? ", " : ": ") << bins[i];
  h << "\n";
  ctx.emit("detect", {{"output", a.out}, {"method", a.method}, {"detected_bins", bins}, {"runs", r.detected_bins.size()}}, h.str());
  return kOk;
}

// ---- recover --------------------------------------------------------------

struct RecoverArgs {
  std::string cir, detections, out_dir;
  bool float_wav = false;
};

int run_recover(Context& ctx, const RecoverArgs& a) {
  if (ctx.print_config) {
    std::cout << json{{"recover", settings_json(ctx.settings)["recover"]}}.dump(2) << "\n";
    return kOk;
  }
  const auto cir = sim::load_cir(a.cir);
  const auto det = detect::detection_from_json(read_json(a.detections, "detections file"));
  const auto sources = recover::separate_sources(cir, det, ctx.settings.recover);
  fs::create_directories(a.out_dir);
  json files = json::array();
  std::ostringstream h;
  for (std::size_t i = 0; i < sources.size(); ++i) {
    char stem[32];
    std::snprintf(stem, sizeof stem, "source-%02zu", i);
    const auto wav_path = fs::path(a.out_dir) / (std::string(stem) + ".wav");
    wav::save(sources[i].audio, wav_path, a.float_wav ? wav::Encoding::Float32 : wav::Encoding::Pcm16);
    auto side = recover::sidecar_json(sources[i]);
    side["schema_version"] = kCliSchemaVersion;
    side["wav"] = wav_path.filename().string();
    write_text(fs::path(a.out_dir) / (std::string(stem) + ".json"), side.dump(2) + "\n");
    files.push_back(side);
    h << wav_path.string() << ": bin " << sources[i].bins.front() << ", rx " << sources[i].receiver << ", snr " << fmt(sources[i].snr_db)
      << " dB\n";
  }
  if (sources.empty()) h << "no sound detected; nothing recovered\n";
  ctx.emit("recover", {{"out_dir", a.out_dir}, {"sources", files}}, h.str());
  return kOk;
}

// ---- synth ----------------------------------------------------------------

struct SynthArgs {
  std::string audio_dir, config, out_dir;
  std::size_t count = 0;
  std::uint64_t seed = 0;
  std::size_t shard_size = 0;
};

int run_synth(Context& ctx, const SynthArgs& a, CLI::Option* shard_opt) {
  auto cfg = ctx.settings.synth;
  if (!a.config.empty()) cfg = synth::synth_config_from_json(read_json(a.config, "synth config"));
  if (shard_opt->count() > 0) cfg.shard_size = a.shard_size;
  cfg.validate();
  if (ctx.print_config) {
    std::cout << json{{"count", a.count}, {"seed", a.seed}, {"synth", synth::to_json(cfg)}}.dump(2) << "\n";
    return kOk;
  }
  const auto stream = synth::make_pairs(a.audio_dir, cfg, a.count, a.seed);
  const auto files = synth::write_shards(stream, a.out_dir, a.seed);
  json names = json::array();
  for (const auto& f : files) names.push_back(f.filename().string());
  std::ostringstream h;
  h << "wrote " << a.count << " pair(s) in " << files.size() << " shard(s) to " << a.out_dir << "\n";
  ctx.emit("synth", {{"out_dir", a.out_dir}, {"pairs", a.count}, {"shards", names}, {"config_digest", synth::config_digest(cfg)}}, h.str());
  return kOk;
}

// ---- evaluate -------------------------------------------------------------

struct EvaluateArgs {
  std::string ref, silent, ladder, csv;
  std::vector<std::string> est;
  std::uint64_t seed = 1;
};

json eval_row(const std::string& label, const metrics::EvalReport& r) {
  auto j = metrics::to_json(r);
  j["estimate"] = label;
  return j;
}

std::string csv_value(const json& v) {
  if (v.is_null()) return "";
  if (v.is_string()) return v.get<std::string>();
  return fmt(v.get<double>());
}

int run_evaluate(Context& ctx, const EvaluateArgs& a) {
  if (ctx.print_config) {
    std::cout << json{{"reference", a.ref}, {"estimates", a.est}, {"silent", a.silent}, {"ladder", a.ladder}, {"seed", a.seed}}.dump(2) << "\n";
    return kOk;
  }
  if (a.est.empty() && a.ladder.empty()) throw ParameterError("evaluate needs --est or --ladder");
  if (!a.ladder.empty() && a.ref.empty()) throw ParameterError("--ladder needs --ref");
  std::optional<AudioSignal> ref;
  if (!a.ref.empty()) ref = wav::load(a.ref);

  auto silent_spans = [&](const AudioSignal& x) {
    std::vector<Span> spans;
    if (a.silent.empty()) return spans;
    for (const auto& [s, e] : parse_ranges(a.silent)) {
      const auto b = static_cast<std::size_t>(std::llround(s * x.sample_rate));
      const auto f = std::min(x.samples.size(), static_cast<std::size_t>(std::llround(e * x.sample_rate)));
      if (f <= b) throw ParameterError("silent span lies outside the estimate");
      spans.push_back({b, f});
    }
    return spans;
  };

  json rows = json::array();
  for (const auto& path : a.est) {
    const auto x = wav::load(path);
    rows.push_back(eval_row(path, metrics::evaluate(x, ref ? &*ref : nullptr, silent_spans(x))));
  }
  if (!a.ladder.empty()) {
    // Reference plus seeded white noise at each listed SNR.
    std::stringstream ss(a.ladder);
    std::string item;
    double ref_power = 0;
    for (double v : ref->samples) ref_power += v * v;
    ref_power /= static_cast<double>(std::max<std::size_t>(1, ref->samples.size()));
    std::size_t rung = 0;
    while (std::getline(ss, item, ',')) {
      double snr = 0;
      try {
        snr = std::stod(item);
      } catch (const std::exception&) {
        throw ParameterError("--ladder expects comma-separated dB values");
      }
      Rng rng(Rng(a.seed).fork(rung++).engine()());
      const auto noise = sim::white_noise(std::sqrt(ref_power / std::pow(10.0, snr / 10.0)), ref->duration(), ref->sample_rate, rng);
      AudioSignal mix = *ref;
      for (std::size_t i = 0; i < mix.samples.size() && i < noise.samples.size(); ++i) mix.samples[i] += noise.samples[i];
      auto row = eval_row("ladder:" + item, metrics::evaluate(mix, &*ref, {}));
      row["target_snr_db"] = snr;
      rows.push_back(row);
    }
  }
  if (!a.csv.empty()) {
    std::ostringstream c;
    c << "estimate,target_snr_db,snr_db,llr,stoi\n";
    for (const auto& r : rows)
      c << r["estimate"].get<std::string>() << "," << (r.contains("target_snr_db") ? fmt(r["target_snr_db"].get<double>()) : "") << ","
        << csv_value(r["snr_db"]) << "," << csv_value(r["llr"]) << "," << csv_value(r["stoi"]) << "\n";
    write_text(a.csv, c.str());
  }
  std::ostringstream h;
  for (const auto& r : rows)
    h << r["estimate"].get<std::string>() << ": snr_db=" << csv_value(r["snr_db"]) << " llr=" << csv_value(r["llr"])
      << " stoi=" << csv_value(r["stoi"]) << "\n";
  ctx.emit("evaluate", {{"results", rows}}, h.str());
  return kOk;
}

// ---- roc ------------------------------------------------------------------

struct RocArgs {
  std::string suite, out, auc_out;
};

int run_roc(Context& ctx, const RocArgs& a) {
  const auto spec = detect::load_suite(a.suite);
  if (ctx.print_config) {
    auto s = settings_json(ctx.settings);
    std::cout << json{{"suite", {{"count", spec.count}, {"seed", spec.seed}, {"methods", spec.methods}, {"points", spec.points}}},
                      {"detect", s["detect"]},
                      {"cfar", s["cfar"]},
                      {"hhi", s["hhi"]}}
                     .dump(2)
              << "\n";
    return kOk;
  }
  const auto result = detect::run_suite(spec, ctx.settings.detectors);
  std::ostringstream c;
  c << "method,false_alarm_rate,detection_rate\n";
  json auc = json::object();
  for (const auto& [name, roc] : result.methods) {
    for (const auto& p : roc.curve) c << name << "," << fmt(p.false_alarm_rate) << "," << fmt(p.detection_rate) << "\n";
    auc[name] = roc.auc;
  }
  write_text(a.out, c.str());
  json body{{"output", a.out}, {"scenes", result.scenes}, {"cells", result.cells}, {"positives", result.positives}, {"auc", auc}};
  if (!a.auc_out.empty()) {
    auto file = body;
    file["schema_version"] = kCliSchemaVersion;
    write_text(a.auc_out, file.dump(2) + "\n");
  }
  std::ostringstream h;
  h << result.scenes << " scenes, " << result.positives << " sound cells of " << result.cells << "\n";
  for (const auto& [name, roc] : result.methods) h << "AUC " << name << " " << fmt(roc.auc) << "\n";
  ctx.emit("roc", body, h.str());
  return kOk;
}

// ---- liveness -------------------------------------------------------------

struct LivenessArgs {
  std::string cir, span;
  std::size_t bin = 0;
  double threshold = 0;
};

int run_liveness(Context& ctx, const LivenessArgs& a, CLI::Option* thr) {
  auto cfg = ctx.settings.liveness;
  if (thr->count() > 0) cfg.threshold = a.threshold;
  if (ctx.print_config) {
    std::cout << json{{"liveness", {{"band_low_hz", cfg.band_low_hz}, {"band_high_hz", cfg.band_high_hz}, {"floor_hz", cfg.floor_hz}, {"threshold", cfg.threshold}}}}
                     .dump(2)
              << "\n";
    return kOk;
  }
  const auto cir = sim::load_cir(a.cir);
  const spectral::StftConfig stft;
  const auto spec = spectral::range_doppler(cir, stft);
  // Frames whose centre lies inside the span; the whole record by default.
  Span frames{0, spec.num_frames()};
  if (!a.span.empty()) {
    const auto ranges = parse_ranges(a.span);
    if (ranges.size() != 1) throw ParameterError("--span takes a single start:end range");
    const double fs = cir.params().slow_time_rate;
    const double lo = ranges[0].first / 1000.0 * fs, hi = ranges[0].second / 1000.0 * fs;
    if (hi > static_cast<double>(cir.num_samples())) throw ParameterError("--span ends after the record");
    std::size_t first = spec.num_frames(), last = 0;
    for (std::size_t k = 0; k < spec.num_frames(); ++k) {
      const double centre = static_cast<double>(k * stft.hop() + stft.frame_length / 2);
      if (centre >= lo && centre < hi) first = std::min(first, k), last = k + 1;
    }
    if (last <= first) throw ParameterError("--span covers no spectrogram frame");
    frames = {first, last};
  }
  const double score = detect::liveness_score(spec, a.bin, frames, cfg);
  const bool live = detect::is_live(score, cfg);
  std::ostringstream h;
  h << "bin " << a.bin << " frames " << frames.begin << "-" << frames.end << ": score " << fmt(score) << " -> " << (live ? "live" : "not live")
    << "\n";
  ctx.emit("liveness", {{"bin", a.bin}, {"frames", {frames.begin, frames.end}}, {"score", score}, {"threshold", cfg.threshold}, {"live", live}},
           h.str());
  return kOk;
}

int report(const char* kind, const std::exception& e, int code) {
  std::cerr << "radiomic: " << kind << ": " << e.what() << "\n";
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"RadioMic radio-acoustics pipeline"};
  app.require_subcommand(1);
  Context ctx;
  std::size_t threads = 0;
  app.add_flag("--json", ctx.as_json, "Machine-readable output on stdout");
  auto* threads_opt = app.add_option("--threads", threads, "Worker threads (default: available parallelism)");
  app.add_option("--config", ctx.config_path, "JSON config file (flags override it)")->check(CLI::ExistingFile);
  app.add_flag("--print-config", ctx.print_config, "Print the resolved configuration and exit");

  SimulateArgs sim_a;
  auto* sim_cmd = app.add_subcommand("simulate", "Simulate a scene into a CIR file");
  sim_cmd->add_option("scene", sim_a.scene, "Scene JSON")->required();
  sim_cmd->add_option("out", sim_a.out, "Output CIR (.rspg)")->required();
  auto* sim_seed = sim_cmd->add_option("--seed", sim_a.seed, "Override the scene seed");
  sim_cmd->add_option("--truth", sim_a.truth, "Also write ground-truth sound labels (JSON)");

  DetectArgs det_a;
  auto* det_cmd = app.add_subcommand("detect", "Detect sound-bearing range bins");
  det_cmd->add_option("cir", det_a.cir, "Input CIR (.rspg)")->required();
  det_cmd->add_option("out", det_a.out, "Output detections (JSON)")->required();
  det_cmd->add_option("--method", det_a.method, "radiomic, cfar or hhi")->check(CLI::IsMember({"radiomic", "cfar", "hhi"}));
  auto* ts = det_cmd->add_option("--threshold-scale", det_a.threshold_scale, "MAD multiplier for the radiomic method");
  auto* cs = det_cmd->add_option("--cfar-scale", det_a.cfar_scale, "CFAR threshold multiplier");
  auto* ht = det_cmd->add_option("--hhi-threshold", det_a.hhi_threshold, "HHI concentration threshold");

  RecoverArgs rec_a;
  auto* rec_cmd = app.add_subcommand("recover", "Recover one waveform per detected source");
  rec_cmd->add_option("cir", rec_a.cir, "Input CIR (.rspg)")->required();
  rec_cmd->add_option("detections", rec_a.detections, "Detections JSON")->required();
  rec_cmd->add_option("out_dir", rec_a.out_dir, "Output directory")->required();
  rec_cmd->add_flag("--float", rec_a.float_wav, "Write 32-bit float WAV instead of 16-bit PCM");

  SynthArgs syn_a;
  auto* syn_cmd = app.add_subcommand("synth", "Build training pairs from a WAV directory");
  syn_cmd->add_option("audio_dir", syn_a.audio_dir, "Directory of clean WAV files")->required();
  syn_cmd->add_option("config", syn_a.config, "Synth config JSON (empty string for defaults)")->required();
  syn_cmd->add_option("out_dir", syn_a.out_dir, "Output shard directory")->required();
  syn_cmd->add_option("--count", syn_a.count, "Number of pairs")->required();
  syn_cmd->add_option("--seed", syn_a.seed, "Seed")->required();
  auto* shard_opt = syn_cmd->add_option("--shard-size", syn_a.shard_size, "Pairs per shard");

  EvaluateArgs ev_a;
  auto* ev_cmd = app.add_subcommand("evaluate", "Score recovered audio");
  ev_cmd->add_option("--est", ev_a.est, "Estimate WAV (repeatable)");
  ev_cmd->add_option("--ref", ev_a.ref, "Reference WAV");
  ev_cmd->add_option("--silent", ev_a.silent, "Silent spans in seconds, start:end[,start:end...]");
  ev_cmd->add_option("--ladder", ev_a.ladder, "Score the reference plus noise at these SNRs (dB, comma-separated)");
  ev_cmd->add_option("--seed", ev_a.seed, "Noise seed for --ladder");
  ev_cmd->add_option("--csv", ev_a.csv, "Also write a CSV table");

  RocArgs roc_a;
  auto* roc_cmd = app.add_subcommand("roc", "Run a detection benchmark suite and emit ROC curves");
  roc_cmd->add_option("suite", roc_a.suite, "Suite JSON")->required();
  roc_cmd->add_option("out", roc_a.out, "Output CSV")->required();
  roc_cmd->add_option("--auc-out", roc_a.auc_out, "Also write AUC values (JSON)");

  LivenessArgs live_a;
  auto* live_cmd = app.add_subcommand("liveness", "Score whether a bin holds a live talker");
  live_cmd->add_option("cir", live_a.cir, "Input CIR (.rspg)")->required();
  live_cmd->add_option("bin", live_a.bin, "Range bin")->required();
  live_cmd->add_option("--span", live_a.span, "Time span in ms, start:end (default: whole record)");
  auto* thr = live_cmd->add_option("--threshold", live_a.threshold, "Decision threshold on the band-energy ratio");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (!ctx.config_path.empty()) apply_settings(read_json(ctx.config_path, "config file"), ctx.settings);
    if (threads_opt->count() > 0) ctx.settings.threads = threads;
    set_max_threads(ctx.settings.threads);

    if (*sim_cmd) return run_simulate(ctx, sim_seed, sim_a);
    if (*det_cmd) return run_detect(ctx, det_a, ts, cs, ht);
    if (*rec_cmd) return run_recover(ctx, rec_a);
    if (*syn_cmd) return run_synth(ctx, syn_a, shard_opt);
    if (*ev_cmd) return run_evaluate(ctx, ev_a);
    if (*roc_cmd) return run_roc(ctx, roc_a);
    if (*live_cmd) return run_liveness(ctx, live_a, thr);
  } catch (const ParameterError& e) {
    return report("error", e, kUsage);
  } catch (const IoError& e) {
    return report("error", e, kUsage);
  } catch (const FormatError& e) {
    return report("format error", e, kFormat);
  } catch (const UnsupportedError& e) {
    return report("unsupported", e, kFormat);
  } catch (const DegenerateError& e) {
    return report("degenerate input", e, kNumeric);
  } catch (const std::exception& e) {
    return report("internal error", e, 1);
  }
  return kUsage;
}
