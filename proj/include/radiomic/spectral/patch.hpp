#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "radiomic/core/error.hpp"
#include "radiomic/spectral/stft.hpp"

namespace radiomic::spectral {

inline constexpr std::size_t kPatchSize = 128;

// One-sided magnitude rows 0..N/2-1 (DC through the last bin below Nyquist)
// of a real signal; with N = 256 this yields exactly 128 rows.
// Layout [row][frame].
struct MagnitudeMatrix {
  std::size_t rows = 0;
  std::size_t frames = 0;
  std::vector<double> data;

  double& at(std::size_t r, std::size_t k) { return data[r * frames + k]; }
  double at(std::size_t r, std::size_t k) const { return data[r * frames + k]; }
};

inline MagnitudeMatrix one_sided_magnitude(std::span<const double> signal, const StftConfig& config = {}) {
  const StftMatrix full = stft(signal, config);
  const std::size_t half = config.frame_length / 2;
  MagnitudeMatrix out{half, full.num_frames, std::vector<double>(half * full.num_frames)};
  for (std::size_t r = 0; r < half; ++r)
    for (std::size_t k = 0; k < full.num_frames; ++k) out.at(r, k) = std::abs(full.at(half + r, k));
  return out;
}

inline double log1p_map(double magnitude) { return std::log1p(magnitude); }
inline double log1p_unmap(double mapped) { return std::expm1(mapped); }

}  // namespace radiomic::spectral
