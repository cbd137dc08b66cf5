#include <gtest/gtest.h>

#include "radiomic/core/rng.hpp"
#include "radiomic/spectral/patch.hpp"
#include "radiomic/spectral/range_doppler.hpp"
#include "radiomic/spectral/stft.hpp"
#include "support/oracles.hpp"

using namespace radiomic;
using namespace radiomic::spectral;

namespace {

std::vector<cplx> random_complex(std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<cplx> x(n);
  for (auto& v : x) v = rng.complex_normal(1.0);
  return x;
}

double interior_relative_error(std::span<const cplx> x, std::span<const cplx> y, std::size_t edge) {
  double num = 0, den = 0;
  for (std::size_t i = edge; i + edge < x.size(); ++i) {
    num += std::norm(x[i] - y[i]);
    den += std::norm(x[i]);
  }
  return std::sqrt(num / den);
}

}  // namespace

TEST(Stft, ZeroSignalZeroMatrix) {
  std::vector<cplx> x(1024);
  const auto s = stft(std::span<const cplx>(x));
  for (auto v : s.data) EXPECT_EQ(v, cplx{});
}

TEST(Stft, MatchesDirectDftPerFrame) {
  const auto x = random_complex(1024, 2);
  const auto s = stft(std::span<const cplx>(x));
  const auto w = periodic_hann(256);
  for (std::size_t k : {0u, 5u, 12u}) {
    std::vector<cplx> frame(256);
    for (std::size_t i = 0; i < 256; ++i) frame[i] = x[k * 64 + i] * w[i];
    const auto ref = oracle::dft(frame);
    for (std::size_t f = 0; f < 256; ++f) EXPECT_LT(std::abs(s.at(f, k) - ref[(f + 128) % 256]), 1e-9);
  }
}

TEST(Stft, BinCenteredExponentialLeakage) {
  // +f0 on bin 20: one row dominates, off-row energy at least 60 dB down
  // except for the two Hann neighbors that carry the main lobe.
  const double fs = 6250, f0 = 20 * fs / 256;
  std::vector<cplx> x(2048);
  for (std::size_t t = 0; t < x.size(); ++t) x[t] = std::polar(1.0, 2 * oracle::kPi * f0 * double(t) / fs);
  const auto s = stft(std::span<const cplx>(x));
  const std::size_t row = 128 + 20;
  double on = 0, lobe = 0, off = 0;
  for (std::size_t f = 0; f < 256; ++f)
    for (std::size_t k = 0; k < s.num_frames; ++k) {
      const double e = std::norm(s.at(f, k));
      if (f == row) on += e;
      else if (f + 1 == row || f == row + 1) lobe += e;
      else off += e;
    }
  EXPECT_NEAR(lobe / on, 0.5, 1e-9);  // Hann neighbors at -6 dB each
  EXPECT_LT(10 * std::log10(off / on + 1e-300), -60.0);
}

TEST(Stft, RealCosineSymmetricRows) {
  std::vector<double> x(2048);
  for (std::size_t t = 0; t < x.size(); ++t) x[t] = std::cos(2 * oracle::kPi * 300.0 * double(t) / 6250.0);
  const auto s = stft(std::span<const double>(x));
  for (std::size_t d = 1; d < 128; ++d)
    for (std::size_t k = 0; k < s.num_frames; ++k)
      EXPECT_NEAR(std::abs(s.at(128 + d, k)), std::abs(s.at(128 - d, k)), 1e-9);
}

TEST(Stft, PerfectReconstructionInterior) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto x = random_complex(6250, seed);
    const StftConfig cfg;
    const auto s = stft(std::span<const cplx>(x), cfg);
    auto y = istft(s, cfg);
    y.resize(x.size());
    const std::size_t covered = cfg.signal_length(s.num_frames);
    EXPECT_LE(interior_relative_error(std::span<const cplx>(x.data(), covered), y, 256), 1e-10);
  }
}

TEST(Stft, HalfOverlapAlsoReconstructs) {
  const auto x = random_complex(4096, 7);
  const StftConfig cfg{256, 0.5};
  auto y = istft(stft(std::span<const cplx>(x), cfg), cfg);
  EXPECT_LE(interior_relative_error(std::span<const cplx>(x.data(), y.size()), y, 256), 1e-10);
}

TEST(Stft, ZeroSpectrogramZeroSignal) {
  StftMatrix m{256, 10, std::vector<cplx>(2560)};
  for (auto v : istft(m)) EXPECT_EQ(v, cplx{});
}

TEST(Stft, ParsevalPerFrame) {
  const auto x = random_complex(1024, 3);
  const auto s = stft(std::span<const cplx>(x));
  const auto w = periodic_hann(256);
  for (std::size_t k = 0; k < s.num_frames; ++k) {
    double time = 0, freq = 0;
    for (std::size_t i = 0; i < 256; ++i) time += std::norm(x[k * 64 + i] * w[i]);
    for (std::size_t f = 0; f < 256; ++f) freq += std::norm(s.at(f, k));
    EXPECT_NEAR(freq / 256.0, time, 1e-9 * time);
  }
}

TEST(Stft, ColaConstant) {
  const auto w = periodic_hann(256);
  for (std::size_t n = 0; n < 64; ++n) {
    double acc = 0;
    for (std::size_t m = n; m < 256; m += 64) acc += w[m] * w[m];
    EXPECT_NEAR(acc, 1.5, 1e-12);
  }
}

TEST(Stft, ShiftByHopShiftsFrames) {
  const auto x = random_complex(2048, 4);
  std::vector<cplx> shifted(64, cplx{});
  shifted.insert(shifted.end(), x.begin(), x.end());
  const auto a = stft(std::span<const cplx>(x));
  const auto b = stft(std::span<const cplx>(shifted));
  for (std::size_t f = 0; f < 256; ++f)
    for (std::size_t k = 0; k + 1 < b.num_frames && k < a.num_frames; ++k) EXPECT_EQ(a.at(f, k), b.at(f, k + 1));
}

TEST(Stft, RejectsBadConfig) {
  std::vector<cplx> x(1024);
  EXPECT_THROW(stft(std::span<const cplx>(x), StftConfig{200, 0.75}), ParameterError);
  EXPECT_THROW(stft(std::span<const cplx>(x), StftConfig{256, 0.6}), ParameterError);
  EXPECT_THROW(stft(std::span<const cplx>(x.data(), 100)), ParameterError);
}

TEST(Patch, OneSidedHas128Rows) {
  std::vector<double> x(256 + 127 * 64);
  for (std::size_t t = 0; t < x.size(); ++t) x[t] = std::sin(2 * oracle::kPi * 24.4140625 * 10 * double(t) / 6250.0);
  const auto m = one_sided_magnitude(x);
  EXPECT_EQ(m.rows, 128u);
  EXPECT_EQ(m.frames, 128u);
  std::size_t best = 0;
  for (std::size_t r = 0; r < 128; ++r)
    if (m.at(r, 64) > m.at(best, 64)) best = r;
  EXPECT_EQ(best, 10u);
}

TEST(Patch, Log1pBijective) {
  for (double v : {0.0, 1e-6, 0.3, 17.0, 1e4}) EXPECT_NEAR(log1p_unmap(log1p_map(v)), v, 1e-6 * std::max(v, 1e-12));
}
