#include "fft.hpp"

#include <fftw3.h>

#include <mutex>
#include <new>

namespace asc::detail {

namespace {
// FFTW's planner is not thread-safe; execution is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}
}  // namespace

RealFft::RealFft(std::size_t size) : size_(size) {
  std::lock_guard lock(planner_mutex());
  in_ = static_cast<double*>(fftw_malloc(sizeof(double) * size));
  out_ = reinterpret_cast<std::complex<double>*>(fftw_malloc(sizeof(fftw_complex) * (size / 2 + 1)));
  if (!in_ || !out_) throw std::bad_alloc();
  plan_ = fftw_plan_dft_r2c_1d(static_cast<int>(size), in_, reinterpret_cast<fftw_complex*>(out_),
                               FFTW_ESTIMATE);
}

RealFft::~RealFft() {
  std::lock_guard lock(planner_mutex());
  fftw_destroy_plan(static_cast<fftw_plan>(plan_));
  fftw_free(in_);
  fftw_free(out_);
}

std::span<const std::complex<double>> RealFft::execute() {
  fftw_execute(static_cast<fftw_plan>(plan_));
  return {out_, size_ / 2 + 1};
}

}  // namespace asc::detail
