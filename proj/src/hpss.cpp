#include <algorithm>

#include "asc/dsp_frontend.hpp"
#include "asc/error.hpp"

namespace asc::dsp {

namespace {

void check_kernel(std::size_t kernel, std::size_t axis, const char* what) {
  if (kernel < 3 || kernel % 2 == 0) {
    throw Error(ErrorCode::InvalidKernel, std::string(what) + " kernel must be odd and >= 3, got " + std::to_string(kernel));
  }
  if (kernel > axis) {
    throw Error(ErrorCode::KernelTooLarge, std::string(what) + " kernel " + std::to_string(kernel) +
                                               " exceeds axis length " + std::to_string(axis));
  }
}

// Strided median filter; `scratch` must hold `kernel` values.
void median_into(const double* x, std::size_t n, std::ptrdiff_t stride, std::size_t kernel,
                 double* out, std::ptrdiff_t out_stride, std::vector<double>& scratch) {
  const auto half = static_cast<std::ptrdiff_t>(kernel / 2);
  const auto len = static_cast<std::ptrdiff_t>(n);
  for (std::ptrdiff_t i = 0; i < len; ++i) {
    for (std::ptrdiff_t k = -half; k <= half; ++k) {
      std::ptrdiff_t j = i + k;
      if (j < 0) j = -j - 1;
      if (j >= len) j = 2 * len - j - 1;
      scratch[static_cast<std::size_t>(k + half)] = x[j * stride];
    }
    auto mid = scratch.begin() + half;
    std::nth_element(scratch.begin(), mid, scratch.end());
    out[i * out_stride] = *mid;
  }
}

}  // namespace

std::vector<double> median_filter(std::span<const double> x, std::size_t kernel) {
  check_kernel(kernel, x.size(), "median");
  std::vector<double> out(x.size());
  std::vector<double> scratch(kernel);
  median_into(x.data(), x.size(), 1, kernel, out.data(), 1, scratch);
  return out;
}

HpssResult hpss(const PowerSpectrogram& spec, std::size_t kernel_time, std::size_t kernel_freq) {
  const std::size_t bins = spec.bins();
  const std::size_t frames = spec.frames();
  if (bins == 0 || frames == 0) throw Error(ErrorCode::InvalidArgument, "empty spectrogram");
  check_kernel(kernel_time, frames, "time");
  check_kernel(kernel_freq, bins, "frequency");

  // harmonic: smooth along time (rows); percussive: smooth along frequency (columns)
  RealMatrix harm(bins, frames), perc(bins, frames);
  std::vector<double> sk(kernel_time), fk(kernel_freq);
  const double* src = spec.values.data().data();
  for (std::size_t b = 0; b < bins; ++b) {
    median_into(src + b * frames, frames, 1, kernel_time, harm.data().data() + b * frames, 1, sk);
  }
  for (std::size_t t = 0; t < frames; ++t) {
    median_into(src + t, bins, static_cast<std::ptrdiff_t>(frames), kernel_freq,
                perc.data().data() + t, static_cast<std::ptrdiff_t>(frames), fk);
  }

  HpssResult out{PowerSpectrogram{RealMatrix(bins, frames)}, PowerSpectrogram{RealMatrix(bins, frames)}};
  auto& hv = out.harmonic.values.data();
  auto& pv = out.percussive.values.data();
  const auto& s = spec.values.data();
  for (std::size_t i = 0; i < s.size(); ++i) {
    const double h2 = harm.data()[i] * harm.data()[i];
    const double p2 = perc.data()[i] * perc.data()[i];
    const double denom = h2 + p2;
    const double mask_h = denom > 0.0 ? h2 / denom : 0.5;
    hv[i] = mask_h * s[i];
    pv[i] = s[i] - hv[i];
  }
  return out;
}

}  // namespace asc::dsp
