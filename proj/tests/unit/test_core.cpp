#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>

#include "radiomic/core/digest.hpp"
#include "radiomic/core/filters.hpp"
#include "radiomic/core/parallel.hpp"
#include "radiomic/core/resample.hpp"
#include "radiomic/core/rng.hpp"
#include "radiomic/core/tensor_io.hpp"
#include "radiomic/core/wav.hpp"
#include "support/oracles.hpp"
#include "support/temp_dir.hpp"

using namespace radiomic;

namespace {

// Minimal PCM16 mono writer used to produce fixtures independently of wav::save.
void write_pcm16_fixture(const std::filesystem::path& path, const std::vector<std::int16_t>& samples, std::uint32_t rate) {
  std::ofstream out(path, std::ios::binary);
  auto u32 = [&](std::uint32_t v) { out.write(reinterpret_cast<const char*>(&v), 4); };
  auto u16 = [&](std::uint16_t v) { out.write(reinterpret_cast<const char*>(&v), 2); };
  const auto bytes = static_cast<std::uint32_t>(samples.size() * 2);
  out.write("RIFF", 4);
  u32(36 + bytes);
  out.write("WAVE", 4);
  out.write("fmt ", 4);
  u32(16);
  u16(1);
  u16(1);
  u32(rate);
  u32(rate * 2);
  u16(2);
  u16(16);
  out.write("data", 4);
  u32(bytes);
  out.write(reinterpret_cast<const char*>(samples.data()), static_cast<std::streamsize>(bytes));
}

}  // namespace

TEST(RadarParams, DefaultBinSpacing) {
  RadarParams p;
  EXPECT_NEAR(p.range_bin_spacing(), 0.0426, 0.0426 * 0.005);
  EXPECT_NEAR(p.wavelength(), 3.8934e-3, 1e-6);
}

TEST(Wav, SilenceLoadsAsZeros) {
  support::TempDir dir;
  const auto path = dir.path() / "silence.wav";
  write_pcm16_fixture(path, std::vector<std::int16_t>(6250, 0), 6250);
  const auto a = wav::load(path);
  EXPECT_EQ(a.sample_rate, 6250.0);
  ASSERT_EQ(a.samples.size(), 6250u);
  for (double v : a.samples) EXPECT_EQ(v, 0.0);
}

TEST(Wav, FullScaleNormalization) {
  support::TempDir dir;
  const auto path = dir.path() / "fs.wav";
  write_pcm16_fixture(path, {32767, -32768}, 8000);
  const auto a = wav::load(path);
  EXPECT_NEAR(a.samples[0], 32767.0 / 32768.0, 1e-9);
  EXPECT_NEAR(a.samples[1], -1.0, 1e-12);
}

TEST(Wav, ToneFileDominantBin) {
  support::TempDir dir;
  const auto path = dir.path() / "tone.wav";
  const std::uint32_t rate = 8000;
  std::vector<std::int16_t> s(rate);
  for (std::size_t i = 0; i < s.size(); ++i)
    s[i] = static_cast<std::int16_t>(std::lround(16000.0 * std::sin(2 * oracle::kPi * 440.0 * double(i) / rate)));
  write_pcm16_fixture(path, s, rate);
  const auto a = wav::load(path);
  const auto spec = fft::forward_real(a.samples);
  std::size_t best = 0;
  for (std::size_t k = 1; k < spec.size() / 2; ++k)
    if (std::abs(spec[k]) > std::abs(spec[best])) best = k;
  const double resolution = double(rate) / double(a.samples.size());
  EXPECT_NEAR(double(best) * resolution, 440.0, resolution);
}

TEST(Wav, RoundTripFloat32Exact) {
  support::TempDir dir;
  Rng rng(3);
  AudioSignal a;
  a.sample_rate = 6250;
  for (int i = 0; i < 1000; ++i) a.samples.push_back(static_cast<float>(rng.uniform(-1, 1)));
  wav::save(a, dir.path() / "f.wav", wav::Encoding::Float32);
  const auto b = wav::load(dir.path() / "f.wav");
  ASSERT_EQ(b.samples.size(), a.samples.size());
  for (std::size_t i = 0; i < a.samples.size(); ++i) EXPECT_EQ(a.samples[i], b.samples[i]);
}

TEST(Wav, RoundTripPcm16WithinQuantization) {
  support::TempDir dir;
  Rng rng(4);
  AudioSignal a;
  a.sample_rate = 6250;
  for (int i = 0; i < 5000; ++i) a.samples.push_back(rng.uniform(-1, 0.999));
  wav::save(a, dir.path() / "p.wav");
  const auto b = wav::load(dir.path() / "p.wav");
  ASSERT_EQ(b.samples.size(), a.samples.size());
  for (std::size_t i = 0; i < a.samples.size(); ++i) EXPECT_LE(std::abs(a.samples[i] - b.samples[i]), 1.0 / 32768.0);
}

TEST(Wav, EmptySignalRoundTrip) {
  support::TempDir dir;
  AudioSignal a;
  a.sample_rate = 6250;
  wav::save(a, dir.path() / "e.wav");
  const auto b = wav::load(dir.path() / "e.wav");
  EXPECT_TRUE(b.samples.empty());
  EXPECT_EQ(b.sample_rate, 6250.0);
}

TEST(Wav, RejectsGarbage) {
  support::TempDir dir;
  std::ofstream(dir.path() / "bad.wav") << "definitely not a wav file";
  EXPECT_THROW(wav::load(dir.path() / "bad.wav"), FormatError);
}

TEST(Rspg, ZeroTensorFileSize) {
  TensorFile f{RealTensor({2, 3}), nlohmann::json::object()};
  const auto bytes = rspg::encode(f);
  // magic 4 + version 2 + dtype 1 + ndim 1 + dims 2*8, payload 24, meta length 4 + "{}"
  EXPECT_EQ(bytes.size(), 4u + 2 + 1 + 1 + 16 + 24 + 4 + 2);
}

TEST(Rspg, ComplexSpectrogramBitExact) {
  Rng rng(5);
  ComplexTensor t({128, 128});
  for (auto& v : t.data) v = {static_cast<float>(rng.normal()), static_cast<float>(rng.normal())};
  const auto back = rspg::decode(rspg::encode({t, {}}));
  ASSERT_TRUE(std::holds_alternative<ComplexTensor>(back.tensor));
  const auto& u = std::get<ComplexTensor>(back.tensor);
  EXPECT_EQ(u.dims, t.dims);
  EXPECT_EQ(std::memcmp(u.data.data(), t.data.data(), t.data.size() * sizeof(t.data[0])), 0);
}

TEST(Rspg, MetadataPassthrough) {
  nlohmann::json meta = {{"fs", "6250"}};
  const auto back = rspg::decode(rspg::encode({RealTensor({1}), meta}));
  EXPECT_EQ(back.metadata, meta);
  EXPECT_EQ(back.metadata["fs"].get<std::string>(), "6250");
}

TEST(Rspg, PropertyRandomTensorsBitExact) {
  std::mt19937_64 gen(11);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<std::uint64_t> dims;
    const int nd = 1 + int(gen() % 4);
    for (int d = 0; d < nd; ++d) dims.push_back(gen() % 6);
    if (trial % 2 == 0) {
      RealTensor t(dims);
      for (auto& v : t.data) {
        std::uint32_t bits = static_cast<std::uint32_t>(gen());
        std::memcpy(&v, &bits, 4);
      }
      const auto back = std::get<RealTensor>(rspg::decode(rspg::encode({t, {{"trial", trial}}})).tensor);
      ASSERT_EQ(back.dims, t.dims);
      ASSERT_EQ(std::memcmp(back.data.data(), t.data.data(), t.data.size() * 4), 0);
    } else {
      ComplexTensor t(dims);
      for (auto& v : t.data) v = {float(gen() % 1000) / 7.0f, -float(gen() % 1000) / 3.0f};
      const auto back = std::get<ComplexTensor>(rspg::decode(rspg::encode({t, {}})).tensor);
      ASSERT_EQ(back, t);
    }
  }
}

TEST(Rspg, CorruptInputsRaiseFormatError) {
  const auto good = rspg::encode({RealTensor({4, 4}), {{"a", 1}}});
  EXPECT_THROW(rspg::decode("XXXX" + good.substr(4)), FormatError);
  EXPECT_THROW(rspg::decode(good.substr(0, good.size() - 3)), FormatError);
  EXPECT_THROW(rspg::decode(good.substr(0, 10)), FormatError);
  auto bad_dtype = good;
  bad_dtype[6] = 9;
  EXPECT_THROW(rspg::decode(bad_dtype), FormatError);
  auto bad_version = good;
  bad_version[4] = 7;
  EXPECT_THROW(rspg::decode(bad_version), FormatError);
}

TEST(Resample, SameRateIdentity) {
  Rng rng(1);
  AudioSignal a;
  a.sample_rate = 6250;
  for (int i = 0; i < 777; ++i) a.samples.push_back(rng.normal());
  const auto b = resample(a, 6250);
  EXPECT_EQ(a.samples, b.samples);
}

TEST(Resample, Tone300SurvivesDownsampling) {
  AudioSignal a;
  a.sample_rate = 44100;
  for (int i = 0; i < 44100; ++i) a.samples.push_back(0.5 * std::sin(2 * oracle::kPi * 300.0 * i / 44100.0));
  const auto b = resample(a, 6250);
  EXPECT_NEAR(double(b.samples.size()), 6250.0, 1.0);
  // Fit away from the edges where the kernel runs off the record.
  std::span<const double> interior(b.samples.data() + 200, b.samples.size() - 400);
  EXPECT_NEAR(oracle::sine_amplitude(interior, 300.0, 6250.0), 0.5, 0.005);
}

TEST(Resample, Tone3500Rejected) {
  AudioSignal a;
  a.sample_rate = 44100;
  for (int i = 0; i < 44100; ++i) a.samples.push_back(std::sin(2 * oracle::kPi * 3500.0 * i / 44100.0));
  const auto b = resample(a, 6250);
  std::span<const double> interior(b.samples.data() + 200, b.samples.size() - 400);
  const double ratio = oracle::mean_power(interior) / oracle::mean_power(a.samples);
  EXPECT_LE(10 * std::log10(ratio), -40.0);
}

TEST(Resample, UpsamplingPreservesDuration) {
  AudioSignal a;
  a.sample_rate = 6250;
  for (int i = 0; i < 6250; ++i) a.samples.push_back(std::sin(2 * oracle::kPi * 200.0 * i / 6250.0));
  const auto b = resample(a, 16000);
  EXPECT_NEAR(b.duration(), a.duration(), 1.0 / 6250.0);
  std::span<const double> interior(b.samples.data() + 600, b.samples.size() - 1200);
  EXPECT_NEAR(oracle::sine_amplitude(interior, 200.0, 16000.0), 1.0, 0.01);
}

TEST(Filters, LowpassResponse) {
  const auto h = filters::design_lowpass(1000, 6250, 255);
  EXPECT_NEAR(filters::zero_phase_response(h, 0, 6250), 1.0, 1e-9);
  EXPECT_LT(std::abs(filters::zero_phase_response(h, 1500, 6250)), 1e-3);
}

TEST(Filters, ChannelBandAttenuation) {
  // -60 dB above 2 kHz: white noise through the realized channel keeps
  // <= -50 dB of its power above 2 kHz relative to below.
  ChannelResponse ch{{0, 1900, 2000, 3125}, {0, 0, -60, -60}, 0};
  const auto h = filters::realize_channel(ch, 6250);
  Rng rng(9);
  std::vector<double> x(8192);
  for (auto& v : x) v = rng.normal();
  const auto y = filters::apply_centered<double>(x, h);
  const double lo = oracle::band_power(y, 6250, 0, 1900);
  const double hi = oracle::band_power(y, 6250, 2100, 3125.1);
  EXPECT_LE(10 * std::log10(hi / lo), -50.0);
}

TEST(Filters, CenteredFilterHasNoDelay) {
  std::vector<double> x(300, 0.0);
  x[150] = 1.0;
  std::vector<double> h = {0.25, 0.5, 0.25};
  const auto y = filters::apply_centered<double>(x, h);
  EXPECT_DOUBLE_EQ(y[150], 0.5);
  EXPECT_DOUBLE_EQ(y[149], 0.25);
  EXPECT_DOUBLE_EQ(y[151], 0.25);
}

TEST(Rng, ForksAreReproducibleAndDistinct) {
  Rng a(42), b(42);
  EXPECT_EQ(a.fork(1).uniform(), b.fork(1).uniform());
  EXPECT_NE(a.fork(1).uniform(), a.fork(2).uniform());
  EXPECT_NE(a.fork(1).fork(2).uniform(), a.fork(2).fork(1).uniform());
}

TEST(Parallel, CoversEveryIndexOnce) {
  std::vector<int> hits(1000, 0);
  parallel_for(hits.size(), [&](std::size_t i) { hits[i] += 1; });
  for (int h : hits) EXPECT_EQ(h, 1);
}

TEST(Parallel, PropagatesExceptions) {
  EXPECT_THROW(parallel_for(100, [](std::size_t i) {
                 if (i == 37) throw ParameterError("boom");
               }),
               ParameterError);
}

TEST(Digest, KnownVector) {
  // FNV-1a 64-bit of "a" (published test vector).
  EXPECT_EQ(fnv1a("a"), 0xaf63dc4c8601ec8cull);
}
