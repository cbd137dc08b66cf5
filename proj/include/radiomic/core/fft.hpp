#pragma once

#include <fftw3.h>

#include <complex>
#include <cstddef>
#include <map>
#include <mutex>
#include <span>
#include <utility>
#include <vector>

#include "radiomic/core/error.hpp"

namespace radiomic::fft {

namespace internal {

// FFTW planning is not thread-safe; execution through the new-array API is.
// Plans are created once per (size, direction) and kept for the process
// lifetime.
class PlanCache {
 public:
  static PlanCache& instance() {
    static PlanCache cache;
    return cache;
  }

  fftw_plan get(std::size_t n, int sign) {
    std::lock_guard lock(mutex_);
    auto key = std::make_pair(n, sign);
    if (auto it = plans_.find(key); it != plans_.end()) return it->second;
    std::vector<std::complex<double>> scratch_in(n), scratch_out(n);
    fftw_plan plan = fftw_plan_dft_1d(static_cast<int>(n), reinterpret_cast<fftw_complex*>(scratch_in.data()),
                                      reinterpret_cast<fftw_complex*>(scratch_out.data()), sign,
                                      FFTW_ESTIMATE | FFTW_UNALIGNED);
    plans_.emplace(key, plan);
    return plan;
  }

  ~PlanCache() {
    for (auto& [key, plan] : plans_) fftw_destroy_plan(plan);
  }

 private:
  std::mutex mutex_;
  std::map<std::pair<std::size_t, int>, fftw_plan> plans_;
};

inline void execute(std::span<const std::complex<double>> in, std::span<std::complex<double>> out, int sign) {
  if (in.size() != out.size()) throw ParameterError("fft: input/output size mismatch");
  if (in.empty()) return;
  fftw_plan plan = PlanCache::instance().get(in.size(), sign);
  // FFTW never writes to the input of an out-of-place complex transform.
  fftw_execute_dft(plan, reinterpret_cast<fftw_complex*>(const_cast<std::complex<double>*>(in.data())),
                   reinterpret_cast<fftw_complex*>(out.data()));
}

}  // namespace internal

// Unnormalized forward DFT: X[k] = sum_n x[n] exp(-j 2 pi k n / N).
inline void forward(std::span<const std::complex<double>> in, std::span<std::complex<double>> out) {
  internal::execute(in, out, FFTW_FORWARD);
}

// Unnormalized inverse DFT (no 1/N factor).
inline void backward(std::span<const std::complex<double>> in, std::span<std::complex<double>> out) {
  internal::execute(in, out, FFTW_BACKWARD);
}

inline std::vector<std::complex<double>> forward(std::span<const std::complex<double>> in) {
  std::vector<std::complex<double>> out(in.size());
  forward(in, out);
  return out;
}

inline std::vector<std::complex<double>> forward_real(std::span<const double> in) {
  std::vector<std::complex<double>> buf(in.begin(), in.end());
  return forward(buf);
}

}  // namespace radiomic::fft
