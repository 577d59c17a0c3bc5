#pragma once

#include <complex>
#include <cstddef>
#include <span>

namespace asc::detail {

/// Real-to-complex forward FFT of a fixed size. One instance per thread.
class RealFft {
 public:
  explicit RealFft(std::size_t size);
  ~RealFft();
  RealFft(const RealFft&) = delete;
  RealFft& operator=(const RealFft&) = delete;

  std::size_t size() const noexcept { return size_; }

  /// Input buffer of size() samples; fill before calling execute().
  std::span<double> input() noexcept { return {in_, size_}; }

  /// size()/2 + 1 bins, valid after execute().
  std::span<const std::complex<double>> execute();

 private:
  std::size_t size_;
  double* in_;
  std::complex<double>* out_;
  void* plan_;
};

}  // namespace asc::detail
