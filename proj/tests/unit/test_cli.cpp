#include <gtest/gtest.h>

#include <array>
#include <cstdio>
#include <fstream>
#include <sys/wait.h>

#include "radiomic/core/wav.hpp"
#include "radiomic/detect/detection.hpp"
#include "radiomic/sim/cir_io.hpp"
#include "radiomic/sim/scenarios.hpp"
#include "radiomic/sim/simulate.hpp"
#include "support/temp_dir.hpp"

using namespace radiomic;
namespace fs = std::filesystem;

namespace {

struct Result {
  int code = -1;
  std::string out;
};

Result cli(const std::string& args) {
  Result r;
  FILE* f = popen((std::string("'") + RADIOMIC_CLI + "' " + args + " 2>&1").c_str(), "r");
  if (f == nullptr) return r;
  std::array<char, 4096> buf;
  std::size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), f)) > 0) r.out.append(buf.data(), n);
  const int status = pclose(f);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string q(const fs::path& p) { return "'" + p.string() + "'"; }

const fs::path kScenes = RADIOMIC_SCENES;

nlohmann::json read_json(const fs::path& p) {
  std::ifstream in(p);
  return nlohmann::json::parse(in);
}

}  // namespace

TEST(CirIo, RoundTripKeepsSamplesAndRadar) {
  support::TempDir tmp;
  auto s = sim::separation_scene(4, 0.5);
  s.radar.carrier_frequency = 60e9;
  const auto cir = sim::simulate(s);
  sim::save_cir(cir, tmp.path() / "c.rspg", {{"note", "x"}});
  const auto back = sim::load_cir(tmp.path() / "c.rspg");
  ASSERT_EQ(back.num_receivers(), cir.num_receivers());
  ASSERT_EQ(back.num_range_bins(), cir.num_range_bins());
  ASSERT_EQ(back.num_samples(), cir.num_samples());
  EXPECT_DOUBLE_EQ(back.params().carrier_frequency, 60e9);
  // Stored as complex64, so the round trip is exact after rounding to float.
  std::size_t mismatched = 0;
  for (std::size_t i = 0; i < cir.data().size(); ++i) {
    const std::complex<float> expected(cir.data()[i]);
    mismatched += back.data()[i].real() != double(expected.real()) || back.data()[i].imag() != double(expected.imag());
  }
  EXPECT_EQ(mismatched, 0u);
  const auto file = load_tensor(tmp.path() / "c.rspg");
  EXPECT_EQ(file.metadata["kind"], "cir");
  EXPECT_EQ(file.metadata["note"], "x");
}

TEST(CirIo, WrongTensorRejected) {
  RealTensor r({2, 3, 4});
  EXPECT_THROW(sim::cir_from_tensor({r, {{"kind", "cir"}}}), FormatError);
  ComplexTensor flat({6});
  EXPECT_THROW(sim::cir_from_tensor({flat, {{"kind", "cir"}}}), FormatError);
  ComplexTensor ok({1, 2, 3});
  EXPECT_THROW(sim::cir_from_tensor({ok, {{"kind", "patch"}}}), FormatError);
  ComplexTensor empty({1, 2, 0});
  EXPECT_THROW(sim::cir_from_tensor({empty, {{"kind", "cir"}}}), FormatError);
}

TEST(DetectionJson, RunLengthRoundTrip) {
  LabelMatrix labels(5, 12, 0);
  for (std::size_t k : {0, 1, 2, 7, 11}) labels.at(3, k) = 1;
  labels.at(0, 5) = 1;
  const auto r = detect::make_result(labels, RealMatrix(5, 12), detect::Method::Cfar);
  const auto j = detect::to_json(r);
  EXPECT_EQ(j["schema_version"], 1);
  EXPECT_EQ(j["labels"]["3"], nlohmann::json::parse("[[0,3],[7,1],[11,1]]"));
  EXPECT_EQ(detect::detection_from_json(j).labels.data, labels.data);
}

TEST(DetectionJson, MalformedRejected) {
  auto j = detect::to_json(detect::make_result(LabelMatrix(4, 10, 0), RealMatrix(4, 10), detect::Method::RadiomicOutlier));
  auto bad = j;
  bad["labels"]["9"] = nlohmann::json::parse("[[0,1]]");
  EXPECT_THROW(detect::detection_from_json(bad), FormatError);
  bad = j;
  bad["labels"]["1"] = nlohmann::json::parse("[[8,3]]");
  EXPECT_THROW(detect::detection_from_json(bad), FormatError);
  bad = j;
  bad["labels"]["one"] = nlohmann::json::parse("[[0,1]]");
  EXPECT_THROW(detect::detection_from_json(bad), FormatError);
  bad = j;
  bad["schema_version"] = 2;
  EXPECT_THROW(detect::detection_from_json(bad), UnsupportedError);
  bad = j;
  bad.erase("num_frames");
  EXPECT_THROW(detect::detection_from_json(bad), FormatError);
}

TEST(Cli, PipelineOnTwoTalkers) {
  support::TempDir tmp;
  const auto cir = tmp.path() / "t.rspg", det = tmp.path() / "d.json", out = tmp.path() / "out";
  ASSERT_EQ(cli("simulate " + q(kScenes / "two_talkers.json") + " " + q(cir)).code, 0);
  ASSERT_EQ(cli("detect " + q(cir) + " " + q(det)).code, 0);
  const auto d = read_json(det);
  EXPECT_EQ(d["labels"].size(), 2u);
  EXPECT_TRUE(d["source"].contains("cir_digest"));
  ASSERT_EQ(cli("recover " + q(cir) + " " + q(det) + " " + q(out)).code, 0);
  for (const char* name : {"source-00", "source-01"}) {
    const auto wav = wav::load(out / (std::string(name) + ".wav"));
    EXPECT_DOUBLE_EQ(wav.sample_rate, 6250.0);
    const auto side = read_json(out / (std::string(name) + ".json"));
    EXPECT_EQ(side["num_samples"].get<std::size_t>(), wav.samples.size());
  }
}

TEST(Cli, JsonOutputCarriesSchemaVersion) {
  support::TempDir tmp;
  const auto cir = tmp.path() / "n.rspg";
  const auto r = cli("--json simulate " + q(kScenes / "noise_only.json") + " " + q(cir));
  ASSERT_EQ(r.code, 0) << r.out;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["schema_version"], 1);
  EXPECT_EQ(j["command"], "simulate");
}

TEST(Cli, ConfigPrecedence) {
  support::TempDir tmp;
  const auto cfg = tmp.path() / "c.json";
  std::ofstream(cfg) << R"({"detect": {"threshold_scale": 42}})";
  auto j = nlohmann::json::parse(cli("--print-config detect a b").out);
  EXPECT_EQ(j["detect"]["threshold_scale"], 80.0);
  j = nlohmann::json::parse(cli("--config " + q(cfg) + " --print-config detect a b").out);
  EXPECT_EQ(j["detect"]["threshold_scale"], 42.0);
  j = nlohmann::json::parse(cli("--config " + q(cfg) + " --print-config detect a b --threshold-scale 50").out);
  EXPECT_EQ(j["detect"]["threshold_scale"], 50.0);
}

TEST(Cli, ExitCodes) {
  support::TempDir tmp;
  EXPECT_EQ(cli("frobnicate").code, 2);
  EXPECT_EQ(cli("simulate").code, 2);
  EXPECT_EQ(cli("simulate " + q(tmp.path() / "missing.json") + " " + q(tmp.path() / "x.rspg")).code, 2);

  const auto cir = tmp.path() / "t.rspg";
  ASSERT_EQ(cli("simulate " + q(kScenes / "noise_only.json") + " " + q(cir)).code, 0);
  EXPECT_EQ(cli("detect " + q(cir) + " " + q(tmp.path() / "d.json") + " --method music").code, 2);

  // Truncated container.
  const auto truncated = tmp.path() / "cut.rspg";
  {
    std::ifstream in(cir, std::ios::binary);
    std::string bytes{std::istreambuf_iterator<char>(in), {}};
    std::ofstream(truncated, std::ios::binary) << bytes.substr(0, bytes.size() / 2);
  }
  EXPECT_EQ(cli("detect " + q(truncated) + " " + q(tmp.path() / "d.json")).code, 3);

  // A WAV where a CIR is expected.
  wav::save(AudioSignal{std::vector<double>(100, 0.1), 6250, {}}, tmp.path() / "a.wav");
  EXPECT_NE(cli("detect " + q(tmp.path() / "a.wav") + " " + q(tmp.path() / "d.json")).code, 0);

  // Span past the end of the record.
  EXPECT_EQ(cli("liveness " + q(cir) + " 3 --span 0:99000").code, 2);
}

TEST(Cli, NoDetectionsMeansNoWaveforms) {
  support::TempDir tmp;
  const auto cir = tmp.path() / "n.rspg", det = tmp.path() / "d.json", out = tmp.path() / "out";
  ASSERT_EQ(cli("simulate " + q(kScenes / "noise_only.json") + " " + q(cir)).code, 0);
  ASSERT_EQ(cli("detect " + q(cir) + " " + q(det)).code, 0);
  EXPECT_TRUE(read_json(det)["labels"].empty());
  ASSERT_EQ(cli("recover " + q(cir) + " " + q(det) + " " + q(out)).code, 0);
  EXPECT_TRUE(!fs::exists(out) || fs::is_empty(out));
}
