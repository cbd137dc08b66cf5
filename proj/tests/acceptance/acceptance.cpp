// End-to-end acceptance checks. One PASS/FAIL line per criterion, with the
// measured value and runtime. Exit status is the number of failures.
//
// usage: acceptance <radiomic-cli> <scenes-dir>

#include <array>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <sstream>

#include "radiomic/detect/liveness.hpp"
#include "radiomic/detect/outlier.hpp"
#include "radiomic/detect/suite.hpp"
#include "radiomic/metrics/llr.hpp"
#include "radiomic/metrics/snr.hpp"
#include "radiomic/metrics/stoi.hpp"
#include "radiomic/recover/projection.hpp"
#include "radiomic/recover/recover.hpp"
#include "radiomic/sim/scenarios.hpp"
#include "radiomic/sim/signals.hpp"
#include "radiomic/sim/simulate.hpp"
#include "radiomic/spectral/range_doppler.hpp"
#include "radiomic/spectral/stft.hpp"
#include "support/oracles.hpp"
#include "support/temp_dir.hpp"

using namespace radiomic;
namespace fs = std::filesystem;

namespace {

constexpr double kFs = 6250.0;

struct Outcome {
  bool pass = false;
  std::string detail;
};

int failures = 0;

void run(const std::string& name, double budget_s, const std::function<Outcome()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const bool in_time = budget_s <= 0 || secs < budget_s;
  const bool ok = o.pass && in_time;
  if (!ok) ++failures;
  std::ostringstream line;
  line << (ok ? "PASS" : "FAIL") << "  " << name << ": " << o.detail;
  line.precision(3);
  line << std::fixed << " [" << secs << " s";
  if (budget_s > 0) line << " of " << budget_s << (in_time ? "" : ", over budget");
  line << "]";
  std::cout << line.str() << std::endl;
}

std::string fmt(double v, int prec = 4) {
  std::ostringstream s;
  s.precision(prec);
  s << v;
  return s.str();
}

// --- STFT ---------------------------------------------------------------

Outcome stft_reconstruction() {
  const spectral::StftConfig cfg;
  double worst = 0;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    Rng rng(1000 + seed);
    std::vector<cplx> x(static_cast<std::size_t>(kFs));
    for (auto& v : x) v = rng.complex_normal(1.0);
    const auto s = spectral::stft(std::span<const cplx>(x), cfg);
    auto y = spectral::istft(s, cfg);
    const std::size_t n = cfg.signal_length(s.num_frames);
    double num = 0, den = 0;
    for (std::size_t i = cfg.frame_length; i + cfg.frame_length < n; ++i) {
      num += std::norm(x[i] - y[i]);
      den += std::norm(x[i]);
    }
    worst = std::max(worst, std::sqrt(num / den));
  }
  return {worst <= 1e-10, "worst interior relative L2 error " + fmt(worst, 3) + " over 10 signals (limit 1e-10)"};
}

// --- Phase fidelity -----------------------------------------------------

Outcome phase_fidelity() {
  sim::SceneDescription s;
  s.radar.num_range_bins = 24;
  s.radar.num_receivers = 1;
  s.duration = 1.0;
  s.noise_power_per_receiver = {0.0};
  sim::VibrationSource v;
  v.audio = sim::shared_audio(sim::tone(300, 0.9, 1.0, kFs));
  v.channel = ChannelResponse::flat(kFs / 2);
  v.range = sim::bin_center_range(s.radar, 12);
  v.peak_displacement = 5e-6;
  s.sources.push_back(v);
  const auto cir = sim::simulate(s);
  const auto g = cir.series(0, 12);
  // Unwrapped phase; the excursion is far below pi so one unwrap pass is enough.
  std::vector<double> p(g.size());
  double offset = 0, prev = std::arg(g[0]);
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double a = std::arg(g[i]);
    if (a - prev > oracle::kPi) offset -= 2 * oracle::kPi;
    if (a - prev < -oracle::kPi) offset += 2 * oracle::kPi;
    prev = a;
    p[i] = a + offset;
  }
  const auto [lo, hi] = std::minmax_element(p.begin() + 300, p.end() - 300);
  const double p2p = *hi - *lo;
  return {std::abs(p2p - 0.0161) <= 0.0161 * 0.01, "peak-to-peak phase " + fmt(p2p, 6) + " rad (target 0.0161 +-1%)"};
}

// --- Projection optimality ----------------------------------------------

Outcome projection_optimality() {
  const std::array<double, 5> devs{0.0, 22.5, 45.0, 67.5, 90.0};
  std::array<double, 5> mean{};
  std::size_t strict = 0;
  constexpr std::size_t kScenes = 20;
  std::vector<std::array<double, 5>> per(kScenes);
  parallel_for(kScenes, [&](std::size_t i) {
    const auto p = sim::projection_scene(1 + i);
    const auto cir = sim::simulate(p.scene);
    const spectral::StftConfig cfg;
    const std::size_t frames = cfg.num_frames(cir.num_samples());
    std::vector<std::size_t> silent;
    for (std::size_t k = 0; k < frames; ++k) {
      const double t0 = double(k * cfg.hop()) / kFs, t1 = t0 + double(cfg.frame_length) / kFs;
      if (t1 <= p.lead || t0 >= p.scene.duration - p.tail) silent.push_back(k);
    }
    for (std::size_t d = 0; d < devs.size(); ++d) {
      recover::RecoverConfig rc;
      rc.angle_offset = devs[d] * oracle::kPi / 180;
      per[i][d] = recover::recover_bin(cir, 0, 8, {0, frames}, rc, silent).snr_db;
    }
  });
  for (const auto& row : per) {
    bool ok = true;
    for (std::size_t d = 0; d < devs.size(); ++d) {
      mean[d] += row[d] / double(kScenes);
      if (d > 0 && !(row[0] > row[d])) ok = false;
      if (d > 0 && row[d] > row[d - 1]) ok = false;
    }
    strict += ok;
  }
  bool best = true, monotone = true;
  for (std::size_t d = 1; d < devs.size(); ++d) {
    best = best && mean[0] > mean[d];
    monotone = monotone && mean[d] <= mean[d - 1];
  }
  std::string curve;
  for (std::size_t d = 0; d < devs.size(); ++d) curve += (d ? " " : "") + fmt(devs[d], 3) + ":" + fmt(mean[d], 3);
  return {best && monotone, "mean SNR dB by deviation {" + curve + "}; per-scene ordered " + std::to_string(strict) + "/20"};
}

// --- Detection ROC --------------------------------------------------------

Outcome detection_roc(const fs::path& scenes) {
  const auto r = detect::run_suite(detect::load_suite(scenes / "detection_suite.json"));
  const double a = r.methods.at("radiomic").auc, c = r.methods.at("cfar").auc, h = r.methods.at("hhi").auc;
  return {r.scenes == 50 && a >= 0.95 && a > c && a > h,
          std::to_string(r.scenes) + " scenes, AUC radiomic " + fmt(a) + " cfar " + fmt(c) + " hhi " + fmt(h) + " (need >= 0.95 and above both)"};
}

// --- Closed form vs grid search ------------------------------------------

Outcome closed_form_projection() {
  std::mt19937_64 gen(2024);
  std::normal_distribution<double> nd;
  std::uniform_real_distribution<double> u(-oracle::kPi, oracle::kPi);
  double worst = 0;
  for (int t = 0; t < 100; ++t) {
    const double a = u(gen), spread = 0.2 + std::abs(nd(gen));
    std::vector<cplx> g(256);
    for (auto& v : g) v = std::polar(spread * nd(gen), a) + 0.3 * cplx(nd(gen), nd(gen));
    const double diff = oracle::line_angle_distance(recover::project_line(g).angle, oracle::grid_search_projection_angle(g));
    worst = std::max(worst, diff * 180 / oracle::kPi);
  }
  return {worst <= 0.2, "worst angle gap to 0.1 deg grid search " + fmt(worst, 3) + " deg over 100 clouds (limit 0.2)"};
}

// --- Source separation ----------------------------------------------------

Outcome separation() {
  double own = 1, cross = 0;
  std::string bins;
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    const auto s = sim::separation_scene(seed);
    const auto cir = sim::simulate(s);
    const auto det = detect::detect_radiomic(spectral::range_doppler(cir));
    const auto out = recover::separate_sources(cir, det);
    bins += (seed > 1 ? "; " : "") + std::string("seed ") + std::to_string(seed) + " sources " + std::to_string(out.size());
    if (out.size() != 2) return {false, bins + " (expected 2)"};
    const std::size_t gap = out[1].bins[0] - out[0].bins[0];
    if (gap < 5) return {false, bins + ", bins only " + std::to_string(gap) + " apart"};
    for (std::size_t i = 0; i < 2; ++i)
      for (std::size_t j = 0; j < 2; ++j) {
        const auto x = sim::sound_displacement(s.sources[j], kFs, s.num_samples());
        const auto& y = out[i].audio.samples;
        const double c = oracle::best_abs_correlation(y, std::span<const double>(x.data(), y.size()), 3);
        if (i == j) own = std::min(own, c);
        else cross = std::max(cross, c);
      }
  }
  return {own >= 0.8 && cross <= 0.3, bins + "; min own corr " + fmt(own, 3) + " (>= 0.8), max cross corr " + fmt(cross, 3) + " (<= 0.3)"};
}

// --- Metric ladder --------------------------------------------------------

Outcome metric_ladder() {
  Rng rng(77);
  const auto ref = sim::speech_like(3.0, kFs, rng);
  const double self_llr = metrics::llr(ref, ref);
  const double p = oracle::mean_power(ref.samples);
  std::vector<double> st;
  for (double snr : {0.0, 10.0, 20.0}) {
    Rng nr(78);
    const auto n = sim::white_noise(std::sqrt(p * std::pow(10.0, -snr / 10)), ref.duration(), kFs, nr);
    AudioSignal est = ref;
    for (std::size_t i = 0; i < est.samples.size(); ++i) est.samples[i] += n.samples[i];
    st.push_back(metrics::stoi(ref, est));
  }
  // One second of noise, then a tone with 100x the noise power on top.
  Rng nr(79);
  const double sigma = 0.01;
  auto mix = sim::white_noise(sigma, 2.0, kFs, nr);
  const auto tone = sim::tone(440, 10 * sigma * std::sqrt(2.0), 1.0, kFs);
  for (std::size_t i = 0; i < tone.samples.size(); ++i) mix.samples[6250 + i] += tone.samples[i];
  const double snr = metrics::snr_silent(mix, {{0, 6250}});
  const bool ok = self_llr == 0.0 && st[0] < st[1] && st[1] < st[2] && std::abs(snr - 20.0) <= 0.5;
  return {ok, "LLR(x,x) " + fmt(self_llr) + ", STOI 0/10/20 dB " + fmt(st[0]) + " " + fmt(st[1]) + " " + fmt(st[2]) +
                  ", snr_silent " + fmt(snr) + " dB (20 +-0.5)"};
}

// --- Liveness -------------------------------------------------------------

Outcome liveness() {
  // Seeds disjoint from the ones the default threshold was picked on.
  constexpr std::size_t kScenes = 20, kSpans = 10;
  std::vector<std::size_t> correct(kScenes);
  parallel_for(kScenes, [&](std::size_t i) {
    const bool live = i % 2 == 0;
    const auto spec = spectral::range_doppler(sim::simulate(sim::liveness_scene(500 + i, live)));
    for (std::size_t j = 0; j < kSpans; ++j) {
      const std::size_t k = 8 + 18 * j;
      correct[i] += detect::is_live(detect::liveness_score(spec, 8, {k, k + 4})) == live;
    }
  });
  std::size_t total = 0;
  for (auto c : correct) total += c;
  const double acc = double(total) / double(kScenes * kSpans);
  return {acc >= 0.95, "accuracy " + fmt(acc, 3) + " on " + std::to_string(kScenes * kSpans) + " spans of 4 frames (>= 0.95)"};
}

// --- Determinism ----------------------------------------------------------

std::string read_bytes(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

// Every regular file under `p` (or `p` itself), keyed by relative path.
std::map<std::string, std::string> snapshot(const fs::path& p) {
  std::map<std::string, std::string> out;
  if (fs::is_regular_file(p)) {
    out[p.filename().string()] = read_bytes(p);
  } else if (fs::is_directory(p)) {
    for (const auto& e : fs::recursive_directory_iterator(p))
      if (e.is_regular_file()) out[fs::relative(e.path(), p).string()] = read_bytes(e.path());
  }
  return out;
}

struct Run {
  int status = -1;
  std::string out;
};

Run shell(const std::string& cmd) {
  Run r;
  FILE* f = popen((cmd + " 2>&1").c_str(), "r");
  if (f == nullptr) return r;
  std::array<char, 4096> buf;
  std::size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), f)) > 0) r.out.append(buf.data(), n);
  r.status = pclose(f);
  return r;
}

std::string q(const fs::path& p) { return "'" + p.string() + "'"; }

Outcome determinism(const fs::path& cli, const fs::path& scenes) {
  support::TempDir tmp;
  const auto& d = tmp.path();
  const auto cir = d / "talkers.rspg", det = d / "det.json", wavs = d / "wavs";
  struct Step {
    std::string name, args;
    std::vector<fs::path> outputs;
  };
  const std::vector<Step> steps{
      {"simulate", "simulate " + q(scenes / "two_talkers.json") + " " + q(cir) + " --seed 5 --truth " + q(d / "truth.json"), {cir, d / "truth.json"}},
      {"detect radiomic", "detect " + q(cir) + " " + q(det), {det}},
      {"detect cfar", "detect " + q(cir) + " " + q(d / "cfar.json") + " --method cfar", {d / "cfar.json"}},
      {"detect hhi", "detect " + q(cir) + " " + q(d / "hhi.json") + " --method hhi", {d / "hhi.json"}},
      {"recover", "recover " + q(cir) + " " + q(det) + " " + q(wavs), {wavs}},
      {"synth", "synth " + q(wavs) + " " + q(scenes / "synth_config.json") + " " + q(d / "shards") + " --count 6 --seed 3 --shard-size 4", {d / "shards"}},
      {"evaluate", "--json evaluate --est " + q(wavs / "source-01.wav") + " --ref " + q(wavs / "source-00.wav") + " --ladder 0,10,20 --seed 4 --csv " + q(d / "ev.csv"), {d / "ev.csv"}},
      {"roc", "roc " + q(scenes / "small_suite.json") + " " + q(d / "roc.csv") + " --auc-out " + q(d / "auc.json"), {d / "roc.csv", d / "auc.json"}},
      {"liveness", "--json liveness " + q(cir) + " 17 --span 500:540", {}},
  };
  for (const auto& s : steps) {
    std::map<std::string, std::string> first;
    std::string first_out;
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto& o : s.outputs) fs::remove_all(o);
      const auto r = shell(q(cli) + " " + s.args);
      if (r.status != 0) return {false, s.name + " exited with status " + std::to_string(r.status) + ": " + r.out};
      std::map<std::string, std::string> files;
      for (const auto& o : s.outputs)
        for (auto& [k, v] : snapshot(o)) files[o.filename().string() + "/" + k] = std::move(v);
      if (pass == 0) {
        if (files.empty() && !s.outputs.empty()) return {false, s.name + " wrote no files"};
        first = std::move(files);
        first_out = r.out;
      } else if (files != first || r.out != first_out) {
        return {false, s.name + " differs between runs"};
      }
    }
  }
  return {true, std::to_string(steps.size()) + " CLI invocations byte-identical across two runs (files and stdout)"};
}

}  // namespace

int main(int argc, char** argv) {
  if (argc != 3) {
    std::cerr << "usage: acceptance <radiomic-cli> <scenes-dir>\n";
    return 2;
  }
  const fs::path cli = argv[1], scenes = argv[2];

  run("STFT perfect reconstruction", 1.0, stft_reconstruction);
  run("Phase-model fidelity", 5.0, phase_fidelity);
  run("Projection optimality", 60.0, projection_optimality);
  run("Detection ROC", 300.0, [&] { return detection_roc(scenes); });
  run("Closed-form vs grid search", 10.0, closed_form_projection);
  run("Source separation", 60.0, separation);
  run("Metric sanity ladder", 30.0, metric_ladder);
  run("Liveness", 60.0, liveness);
  run("Determinism", 0.0, [&] { return determinism(cli, scenes); });

  std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed") << std::endl;
  return failures;
}
