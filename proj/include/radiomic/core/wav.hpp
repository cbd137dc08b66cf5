#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <string>
#include <vector>

#include "radiomic/core/error.hpp"
#include "radiomic/core/types.hpp"

namespace radiomic::wav {

static_assert(std::endian::native == std::endian::little, "WAV/RSPG I/O assumes a little-endian host");

enum class Encoding { Pcm16, Float32 };

namespace internal {

inline constexpr std::uint16_t kFormatPcm = 1;
inline constexpr std::uint16_t kFormatFloat = 3;
inline constexpr std::uint16_t kFormatExtensible = 0xFFFE;

template <typename T>
T read_le(const std::vector<char>& buf, std::size_t pos) {
  T v;
  std::memcpy(&v, buf.data() + pos, sizeof(T));
  return v;
}

template <typename T>
void write_le(std::ofstream& out, T v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

}  // namespace internal

// Loads a PCM16 or float32 RIFF/WAVE file. Multi-channel files are averaged to
// mono. PCM16 samples are scaled by 1/32768.
inline AudioSignal load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open WAV file: " + path.string());
  std::vector<char> buf((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (buf.size() < 12 || std::memcmp(buf.data(), "RIFF", 4) != 0 || std::memcmp(buf.data() + 8, "WAVE", 4) != 0)
    throw FormatError("not a RIFF/WAVE file: " + path.string());

  std::uint16_t format = 0, channels = 0, bits = 0;
  std::uint32_t rate = 0;
  bool have_fmt = false;
  std::size_t data_pos = 0, data_len = 0;
  bool have_data = false;
  std::size_t pos = 12;
  while (pos + 8 <= buf.size()) {
    const std::string id(buf.data() + pos, 4);
    const auto len = internal::read_le<std::uint32_t>(buf, pos + 4);
    const std::size_t body = pos + 8;
    if (id == "fmt ") {
      if (len < 16 || body + len > buf.size()) throw FormatError("truncated fmt chunk");
      format = internal::read_le<std::uint16_t>(buf, body);
      channels = internal::read_le<std::uint16_t>(buf, body + 2);
      rate = internal::read_le<std::uint32_t>(buf, body + 4);
      bits = internal::read_le<std::uint16_t>(buf, body + 14);
      if (format == internal::kFormatExtensible) {
        if (len < 26) throw FormatError("truncated WAVE_FORMAT_EXTENSIBLE header");
        format = internal::read_le<std::uint16_t>(buf, body + 24);
      }
      have_fmt = true;
    } else if (id == "data") {
      data_pos = body;
      data_len = std::min<std::size_t>(len, buf.size() - body);
      have_data = true;
      break;
    }
    pos = body + len + (len & 1u);
  }
  if (!have_fmt || !have_data) throw FormatError("WAV file lacks fmt or data chunk");
  if (channels == 0 || rate == 0) throw FormatError("WAV header has zero channels or rate");

  const bool pcm16 = format == internal::kFormatPcm && bits == 16;
  const bool f32 = format == internal::kFormatFloat && bits == 32;
  if (!pcm16 && !f32) throw UnsupportedError("only 16-bit PCM and 32-bit float WAV are supported");

  const std::size_t width = bits / 8;
  const std::size_t frames = data_len / (width * channels);
  AudioSignal out;
  out.sample_rate = rate;
  out.samples.resize(frames);
  for (std::size_t i = 0; i < frames; ++i) {
    double acc = 0.0;
    for (std::size_t c = 0; c < channels; ++c) {
      const std::size_t at = data_pos + (i * channels + c) * width;
      acc += pcm16 ? internal::read_le<std::int16_t>(buf, at) / 32768.0
                   : static_cast<double>(internal::read_le<float>(buf, at));
    }
    out.samples[i] = acc / channels;
  }
  out.label = path.stem().string();
  return out;
}

inline void save(const AudioSignal& signal, const std::filesystem::path& path, Encoding encoding = Encoding::Pcm16) {
  signal.validate();
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write WAV file: " + path.string());
  const bool pcm = encoding == Encoding::Pcm16;
  const std::uint16_t bits = pcm ? 16 : 32;
  const std::uint16_t block = bits / 8;
  const auto rate = static_cast<std::uint32_t>(std::lround(signal.sample_rate));
  const auto data_len = static_cast<std::uint32_t>(signal.samples.size() * block);

  out.write("RIFF", 4);
  internal::write_le<std::uint32_t>(out, 36 + data_len);
  out.write("WAVEfmt ", 8);
  internal::write_le<std::uint32_t>(out, 16);
  internal::write_le<std::uint16_t>(out, pcm ? internal::kFormatPcm : internal::kFormatFloat);
  internal::write_le<std::uint16_t>(out, 1);
  internal::write_le<std::uint32_t>(out, rate);
  internal::write_le<std::uint32_t>(out, rate * block);
  internal::write_le<std::uint16_t>(out, block);
  internal::write_le<std::uint16_t>(out, bits);
  out.write("data", 4);
  internal::write_le<std::uint32_t>(out, data_len);
  for (double v : signal.samples) {
    if (pcm) {
      const double q = std::clamp(std::round(v * 32768.0), -32768.0, 32767.0);
      internal::write_le<std::int16_t>(out, static_cast<std::int16_t>(q));
    } else {
      internal::write_le<float>(out, static_cast<float>(v));
    }
  }
  if (!out) throw IoError("failed writing WAV file: " + path.string());
}

}  // namespace radiomic::wav
