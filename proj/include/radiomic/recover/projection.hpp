#pragma once

#include <cmath>
#include <vector>

#include "radiomic/core/error.hpp"
#include "radiomic/core/filters.hpp"
#include "radiomic/core/types.hpp"

namespace radiomic::recover {

// Linear-phase Kaiser high-pass applied to I and Q, centered so the output
// lines up with the input; edges are reflect-padded.
inline std::vector<cplx> highpass(std::span<const cplx> x, double cutoff_hz, std::size_t taps, double sample_rate,
                                  double kaiser_beta = 8.0) {
  detail::require(cutoff_hz > 0 && cutoff_hz < sample_rate / 2, "highpass: cutoff must lie in (0, fs/2)");
  detail::require(taps % 2 == 1, "highpass: taps must be odd");
  const auto h = filters::design_highpass(cutoff_hz, sample_rate, taps, kaiser_beta);
  return filters::apply_centered<cplx>(x, h, filters::Padding::Reflect);
}

struct ProjectionResult {
  double angle = 0.0;  // radians in [-pi/2, pi/2)
  std::vector<cplx> centered_samples;
  std::vector<double> projected;
  double residual_power = 0.0;  // mean squared distance to the line
};

// Principal axis of the IQ cloud: the theta minimizing
// ||g - Re{g e^{-j theta}} e^{j theta}||^2, in closed form
// theta = atan2(2 sum IQ, sum(I^2 - Q^2)) / 2.
inline double principal_angle(std::span<const cplx> g) {
  double sxy = 0.0, sdiff = 0.0;
  for (auto v : g) {
    sxy += v.real() * v.imag();
    sdiff += v.real() * v.real() - v.imag() * v.imag();
  }
  double theta = 0.5 * std::atan2(2.0 * sxy, sdiff);
  if (theta >= kPi / 2) theta -= kPi;
  return theta;
}

// Projects `centered` onto the line through the origin at `angle`.
inline ProjectionResult project_at(std::span<const cplx> centered, double angle) {
  ProjectionResult r;
  r.angle = angle;
  r.centered_samples.assign(centered.begin(), centered.end());
  r.projected.resize(centered.size());
  const cplx rot = std::polar(1.0, -angle);
  double resid = 0.0;
  for (std::size_t i = 0; i < centered.size(); ++i) {
    const cplx v = centered[i] * rot;
    r.projected[i] = v.real();
    resid += v.imag() * v.imag();
  }
  r.residual_power = centered.empty() ? 0.0 : resid / static_cast<double>(centered.size());
  return r;
}

inline ProjectionResult project_line(std::span<const cplx> centered) {
  detail::require(centered.size() >= 16, "project_line: need at least 16 samples");
  double energy = 0.0;
  for (auto v : centered) energy += std::norm(v);
  if (!(energy > 0)) throw DegenerateError("project_line: all-zero input");
  return project_at(centered, principal_angle(centered));
}

}  // namespace radiomic::recover
