#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "asc/matrix.hpp"

namespace asc::dsp {

inline constexpr double kLogFloor = 1e-10;
inline constexpr double kConstantRowStd = 1e-8;

struct StftConfig {
  double window_length_ms = 40.0;
  double hop_fraction = 0.5;
  std::size_t fft_size = 2048;
  /// Frames are centred on t*hop with reflect padding of half a window.
  bool center = true;
  /// Drops the final centred frame, so a 10 s / 48 kHz clip gives 500 frames.
  bool drop_final_frame = true;

  std::size_t window_samples(int sample_rate) const;
  std::size_t hop_samples(int sample_rate) const;

  /// Throws InvalidConfig.
  void validate(int sample_rate) const;
};

/// Periodic (DFT-even) Hamming window: 0.54 - 0.46 cos(2 pi n / N).
std::vector<double> periodic_hamming(std::size_t length);

/// (fft_size/2 + 1) x frames, entries >= 0.
struct PowerSpectrogram {
  RealMatrix values;

  std::size_t bins() const noexcept { return values.rows(); }
  std::size_t frames() const noexcept { return values.cols(); }
};

std::size_t stft_frame_count(std::size_t signal_length, const StftConfig& config, int sample_rate);

/// Column t holds |FFT(window * frame_t)|^2 for the non-negative bins.
/// Errors: InvalidConfig, SignalTooShort.
PowerSpectrogram stft_power(std::span<const double> signal, const StftConfig& config, int sample_rate);

double hz_to_mel(double hz) noexcept;  // 2595 log10(1 + f/700)
double mel_to_hz(double mel) noexcept;

enum class MelNormalization {
  /// Unit-peak triangles; adjacent filters sum to one between centres.
  Amplitude,
  /// Each triangle scaled by 2 / (upper edge - lower edge).
  Area,
};

struct MelFilterbank {
  RealMatrix weights;  // n_mels x (fft_size/2 + 1)
  /// Half-open range of bins with non-zero weight, per filter.
  std::vector<std::pair<std::size_t, std::size_t>> support;
  /// Band edges in Hz: n_mels + 2 points uniformly spaced on the Mel scale.
  std::vector<double> edges_hz;

  std::size_t n_mels() const noexcept { return weights.rows(); }
  std::size_t bins() const noexcept { return weights.cols(); }
};

/// Errors: InvalidRange (bad frequency range, zero bands, or a filter too
/// narrow to cover any FFT bin).
MelFilterbank build_mel_filterbank(int sample_rate, std::size_t fft_size, std::size_t n_mels,
                                   double fmin, double fmax,
                                   MelNormalization norm = MelNormalization::Amplitude);

struct LogMelMatrix {
  RealMatrix values;  // n_mels x frames
  bool band_normalized = false;
};

/// log(fb * spec + 1e-10). Errors: ShapeMismatch.
LogMelMatrix log_mel(const PowerSpectrogram& spec, const MelFilterbank& fb);

/// Per-row (x - mean) / std with population std; rows with std < 1e-8 become zeros.
/// Errors: AlreadyNormalized.
LogMelMatrix band_normalize(LogMelMatrix m);

struct HpssResult {
  PowerSpectrogram harmonic;
  PowerSpectrogram percussive;
};

/// Median filter of odd length with half-sample-symmetric boundary extension
/// (x[1] x[0] | x[0] x[1] ...). Errors: InvalidKernel, KernelTooLarge.
std::vector<double> median_filter(std::span<const double> x, std::size_t kernel);

/// Median-filtering harmonic/percussive separation with Wiener-style soft masks
/// (power 2). harmonic + percussive == spec.
/// Errors: InvalidKernel (even or < 3), KernelTooLarge.
HpssResult hpss(const PowerSpectrogram& spec, std::size_t kernel_time = 31, std::size_t kernel_freq = 31);

}  // namespace asc::dsp
