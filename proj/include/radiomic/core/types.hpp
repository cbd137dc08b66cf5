#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "radiomic/core/error.hpp"

namespace radiomic {

using cplx = std::complex<double>;

inline constexpr double kSpeedOfLight = 299792458.0;
inline constexpr double kPi = 3.14159265358979323846;

// Half-open index range [begin, end).
struct Span {
  std::size_t begin = 0;
  std::size_t end = 0;

  std::size_t size() const { return end > begin ? end - begin : 0; }
  bool empty() const { return end <= begin; }
  bool contains(std::size_t i) const { return i >= begin && i < end; }
  friend bool operator==(const Span&, const Span&) = default;
};

// Row-major matrix; detection maps use rows = range bins, cols = frames.
template <typename T>
struct Matrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<T> data;

  Matrix() = default;
  Matrix(std::size_t r, std::size_t c, T fill = T{}) : rows(r), cols(c), data(r * c, fill) {}

  T& at(std::size_t r, std::size_t c) { return data[r * cols + c]; }
  const T& at(std::size_t r, std::size_t c) const { return data[r * cols + c]; }
  bool same_shape(const auto& other) const { return rows == other.rows && cols == other.cols; }
};

using RealMatrix = Matrix<double>;
using LabelMatrix = Matrix<std::uint8_t>;

struct RadarParams {
  double carrier_frequency = 77e9;
  double bandwidth = 3.52e9;
  double slow_time_rate = 6250.0;
  std::size_t num_range_bins = 256;
  std::size_t num_receivers = 8;

  double wavelength() const { return kSpeedOfLight / carrier_frequency; }
  double range_bin_spacing() const { return kSpeedOfLight / (2.0 * bandwidth); }
  double max_range() const { return range_bin_spacing() * static_cast<double>(num_range_bins); }

  void validate() const {
    detail::require(std::isfinite(carrier_frequency) && carrier_frequency > 0, "carrier_frequency must be > 0");
    detail::require(std::isfinite(bandwidth) && bandwidth > 0, "bandwidth must be > 0");
    detail::require(std::isfinite(slow_time_rate) && slow_time_rate > 0, "slow_time_rate must be > 0");
    detail::require(num_range_bins >= 1, "num_range_bins must be >= 1");
    detail::require(num_receivers >= 1, "num_receivers must be >= 1");
  }
};

struct AudioSignal {
  std::vector<double> samples;
  double sample_rate = 0.0;
  std::string label;

  double duration() const { return sample_rate > 0 ? static_cast<double>(samples.size()) / sample_rate : 0.0; }

  void validate() const {
    detail::require(std::isfinite(sample_rate) && sample_rate > 0, "sample_rate must be > 0");
    for (double v : samples) detail::require(std::isfinite(v), "audio samples must be finite");
  }
};

// Surface displacement in meters at the radar slow-time rate.
struct DisplacementSignal {
  std::vector<double> samples;
  double sample_rate = 0.0;

  void validate() const {
    detail::require(std::isfinite(sample_rate) && sample_rate > 0, "sample_rate must be > 0");
    for (double v : samples) {
      detail::require(std::isfinite(v), "displacement must be finite");
      detail::require(std::abs(v) < 1e-3, "displacement magnitude >= 1 mm; input is likely mis-scaled");
    }
  }
};

// Piecewise-linear log-magnitude response of the sound-to-vibration channel.
struct ChannelResponse {
  std::vector<double> breakpoint_frequencies;  // Hz, ascending
  std::vector<double> breakpoint_gains_db;
  double jitter_db = 0.0;

  static ChannelResponse flat(double nyquist) { return {{0.0, nyquist}, {0.0, 0.0}, 0.0}; }

  void validate(double nyquist) const {
    detail::require(breakpoint_frequencies.size() == breakpoint_gains_db.size(),
                    "channel breakpoint arrays differ in length");
    detail::require(breakpoint_frequencies.size() >= 2, "channel needs at least two breakpoints");
    detail::require(jitter_db >= 0 && std::isfinite(jitter_db), "jitter_db must be >= 0");
    for (std::size_t i = 0; i < breakpoint_frequencies.size(); ++i) {
      const double f = breakpoint_frequencies[i];
      detail::require(std::isfinite(f) && f >= 0 && f <= nyquist * (1 + 1e-12),
                      "channel breakpoint outside [0, nyquist]");
      detail::require(std::isfinite(breakpoint_gains_db[i]), "channel gain must be finite");
      if (i > 0) detail::require(f > breakpoint_frequencies[i - 1], "channel breakpoints must ascend");
    }
  }
};

// Complex CIR laid out [receiver][range_bin][slow_time], slow time contiguous.
class CirFrameSeries {
 public:
  CirFrameSeries() = default;
  CirFrameSeries(RadarParams params, std::size_t num_samples)
      : params_(params),
        num_samples_(num_samples),
        data_(params.num_receivers * params.num_range_bins * num_samples) {
    params_.validate();
  }

  const RadarParams& params() const { return params_; }
  std::size_t num_receivers() const { return params_.num_receivers; }
  std::size_t num_range_bins() const { return params_.num_range_bins; }
  std::size_t num_samples() const { return num_samples_; }
  double range_bin_spacing() const { return params_.range_bin_spacing(); }

  cplx& at(std::size_t rx, std::size_t bin, std::size_t t) { return data_[offset(rx, bin) + t]; }
  const cplx& at(std::size_t rx, std::size_t bin, std::size_t t) const { return data_[offset(rx, bin) + t]; }

  std::span<cplx> series(std::size_t rx, std::size_t bin) { return {data_.data() + offset(rx, bin), num_samples_}; }
  std::span<const cplx> series(std::size_t rx, std::size_t bin) const {
    return {data_.data() + offset(rx, bin), num_samples_};
  }

  std::vector<cplx>& data() { return data_; }
  const std::vector<cplx>& data() const { return data_; }

 private:
  std::size_t offset(std::size_t rx, std::size_t bin) const {
    return (rx * params_.num_range_bins + bin) * num_samples_;
  }

  RadarParams params_;
  std::size_t num_samples_ = 0;
  std::vector<cplx> data_;
};

// Two-sided, DC-centered range-Doppler spectrogram laid out
// [receiver][freq][range_bin][frame]. Row f holds Doppler bin f - N/2.
class RangeDopplerSpectrogram {
 public:
  RangeDopplerSpectrogram() = default;
  RangeDopplerSpectrogram(std::size_t receivers, std::size_t frame_length, std::size_t range_bins,
                          std::size_t frames, std::size_t hop, double sample_rate)
      : receivers_(receivers),
        freqs_(frame_length),
        bins_(range_bins),
        frames_(frames),
        hop_(hop),
        sample_rate_(sample_rate),
        data_(receivers * frame_length * range_bins * frames) {}

  std::size_t num_receivers() const { return receivers_; }
  std::size_t num_freqs() const { return freqs_; }
  std::size_t frame_length() const { return freqs_; }
  std::size_t num_range_bins() const { return bins_; }
  std::size_t num_frames() const { return frames_; }
  std::size_t hop() const { return hop_; }
  double sample_rate() const { return sample_rate_; }
  std::string window() const { return "periodic_hann"; }

  // Doppler frequency in Hz of row f.
  double row_frequency(std::size_t f) const {
    return (static_cast<double>(f) - static_cast<double>(freqs_ / 2)) * sample_rate_ / static_cast<double>(freqs_);
  }
  // Row index holding signed Doppler bin d (|d| <= N/2, d = -N/2 allowed).
  std::size_t row_of(std::ptrdiff_t d) const { return static_cast<std::size_t>(d + static_cast<std::ptrdiff_t>(freqs_ / 2)); }

  cplx& at(std::size_t rx, std::size_t f, std::size_t bin, std::size_t k) { return data_[index(rx, f, bin, k)]; }
  const cplx& at(std::size_t rx, std::size_t f, std::size_t bin, std::size_t k) const {
    return data_[index(rx, f, bin, k)];
  }

  std::vector<cplx>& data() { return data_; }
  const std::vector<cplx>& data() const { return data_; }

 private:
  std::size_t index(std::size_t rx, std::size_t f, std::size_t bin, std::size_t k) const {
    return ((rx * freqs_ + f) * bins_ + bin) * frames_ + k;
  }

  std::size_t receivers_ = 0, freqs_ = 0, bins_ = 0, frames_ = 0, hop_ = 0;
  double sample_rate_ = 0.0;
  std::vector<cplx> data_;
};

}  // namespace radiomic
