#include "asc/dsp_frontend.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "asc/error.hpp"
#include "fft.hpp"

namespace asc::dsp {

std::size_t StftConfig::window_samples(int sample_rate) const {
  return static_cast<std::size_t>(std::llround(window_length_ms * sample_rate / 1000.0));
}

std::size_t StftConfig::hop_samples(int sample_rate) const {
  return static_cast<std::size_t>(std::llround(static_cast<double>(window_samples(sample_rate)) * hop_fraction));
}

void StftConfig::validate(int sample_rate) const {
  if (sample_rate <= 0) throw Error(ErrorCode::InvalidConfig, "sample rate must be positive");
  if (fft_size < 2 || (fft_size & (fft_size - 1)) != 0) {
    // FFTW handles any size, but the front-end is specified for power-of-two sizes
    throw Error(ErrorCode::InvalidConfig, "fft_size must be a power of two");
  }
  const std::size_t win = window_samples(sample_rate);
  if (win < 2 || win > fft_size) {
    throw Error(ErrorCode::InvalidConfig, "window of " + std::to_string(win) +
                                              " samples does not fit fft_size " + std::to_string(fft_size));
  }
  if (!(hop_fraction > 0.0 && hop_fraction <= 1.0)) {
    throw Error(ErrorCode::InvalidConfig, "hop_fraction must be in (0, 1]");
  }
  const double hop = static_cast<double>(win) * hop_fraction;
  if (std::abs(hop - std::round(hop)) > 1e-9 || hop < 1.0) {
    throw Error(ErrorCode::InvalidConfig, "hop of " + std::to_string(hop) + " samples is not an integer");
  }
}

std::vector<double> periodic_hamming(std::size_t length) {
  std::vector<double> w(length);
  for (std::size_t n = 0; n < length; ++n) {
    w[n] = 0.54 - 0.46 * std::cos(2.0 * std::numbers::pi * static_cast<double>(n) / static_cast<double>(length));
  }
  return w;
}

std::size_t stft_frame_count(std::size_t signal_length, const StftConfig& config, int sample_rate) {
  const std::size_t win = config.window_samples(sample_rate);
  const std::size_t hop = config.hop_samples(sample_rate);
  if (config.center) {
    const std::size_t raw = signal_length / hop + 1;
    return config.drop_final_frame ? raw - 1 : raw;
  }
  if (signal_length < win) return 0;
  return (signal_length - win) / hop + 1;
}

PowerSpectrogram stft_power(std::span<const double> signal, const StftConfig& config, int sample_rate) {
  config.validate(sample_rate);
  const std::size_t win = config.window_samples(sample_rate);
  const std::size_t hop = config.hop_samples(sample_rate);
  const std::size_t pad = config.center ? win / 2 : 0;
  if (signal.empty()) throw Error(ErrorCode::SignalTooShort, "empty signal");
  if (config.center && signal.size() <= pad) {
    throw Error(ErrorCode::SignalTooShort, "reflect padding of " + std::to_string(pad) +
                                               " needs more than " + std::to_string(signal.size()) + " samples");
  }
  if (!config.center && signal.size() < win) {
    throw Error(ErrorCode::SignalTooShort, std::to_string(signal.size()) + " samples, window is " +
                                               std::to_string(win));
  }

  const std::size_t frames = stft_frame_count(signal.size(), config, sample_rate);
  if (frames == 0) throw Error(ErrorCode::SignalTooShort, "signal yields no frames");
  const std::size_t bins = config.fft_size / 2 + 1;
  const auto window = periodic_hamming(win);
  const auto n = static_cast<std::ptrdiff_t>(signal.size());

  // reflect without repeating the edge sample: x[-1] = x[1], x[n] = x[n-2]
  auto sample = [&](std::ptrdiff_t i) {
    if (i < 0) i = -i;
    if (i >= n) i = 2 * (n - 1) - i;
    return signal[static_cast<std::size_t>(i)];
  };

  PowerSpectrogram spec{RealMatrix(bins, frames)};
  detail::RealFft fft(config.fft_size);
  auto in = fft.input();
  std::fill(in.begin(), in.end(), 0.0);
  for (std::size_t t = 0; t < frames; ++t) {
    const auto start = static_cast<std::ptrdiff_t>(t * hop) - static_cast<std::ptrdiff_t>(pad);
    const bool interior = start >= 0 && start + static_cast<std::ptrdiff_t>(win) <= n;
    for (std::size_t k = 0; k < win; ++k) {
      const auto i = start + static_cast<std::ptrdiff_t>(k);
      in[k] = window[k] * (interior ? signal[static_cast<std::size_t>(i)] : sample(i));
    }
    auto out = fft.execute();
    for (std::size_t b = 0; b < bins; ++b) spec.values(b, t) = std::norm(out[b]);
  }
  return spec;
}

double hz_to_mel(double hz) noexcept { return 2595.0 * std::log10(1.0 + hz / 700.0); }

double mel_to_hz(double mel) noexcept { return 700.0 * (std::pow(10.0, mel / 2595.0) - 1.0); }

MelFilterbank build_mel_filterbank(int sample_rate, std::size_t fft_size, std::size_t n_mels,
                                   double fmin, double fmax, MelNormalization norm) {
  if (sample_rate <= 0 || fft_size < 2 || n_mels == 0) {
    throw Error(ErrorCode::InvalidRange, "sample rate, fft size and band count must be positive");
  }
  if (!(fmin >= 0.0 && fmin < fmax && fmax <= sample_rate / 2.0)) {
    throw Error(ErrorCode::InvalidRange, "need 0 <= fmin < fmax <= sample_rate/2, got fmin=" +
                                             std::to_string(fmin) + " fmax=" + std::to_string(fmax));
  }
  const std::size_t bins = fft_size / 2 + 1;
  MelFilterbank fb;
  fb.weights = RealMatrix(n_mels, bins);
  fb.support.resize(n_mels);
  fb.edges_hz.resize(n_mels + 2);

  const double mel_lo = hz_to_mel(fmin);
  const double mel_hi = hz_to_mel(fmax);
  for (std::size_t i = 0; i < n_mels + 2; ++i) {
    fb.edges_hz[i] = mel_to_hz(mel_lo + (mel_hi - mel_lo) * static_cast<double>(i) / static_cast<double>(n_mels + 1));
  }
  const double bin_hz = static_cast<double>(sample_rate) / static_cast<double>(fft_size);

  for (std::size_t m = 0; m < n_mels; ++m) {
    const double lo = fb.edges_hz[m];
    const double centre = fb.edges_hz[m + 1];
    const double hi = fb.edges_hz[m + 2];
    const double scale = norm == MelNormalization::Area ? 2.0 / (hi - lo) : 1.0;
    std::size_t first = bins, last = 0;
    for (std::size_t k = 0; k < bins; ++k) {
      const double f = static_cast<double>(k) * bin_hz;
      const double rising = (f - lo) / (centre - lo);
      const double falling = (hi - f) / (hi - centre);
      const double w = std::max(0.0, std::min(rising, falling));
      if (w > 0.0) {
        fb.weights(m, k) = w * scale;
        first = std::min(first, k);
        last = k + 1;
      }
    }
    if (first >= last) {
      throw Error(ErrorCode::InvalidRange, "mel band " + std::to_string(m) + " covers no FFT bin; use fewer bands or a larger FFT");
    }
    fb.support[m] = {first, last};
  }
  return fb;
}

LogMelMatrix log_mel(const PowerSpectrogram& spec, const MelFilterbank& fb) {
  if (spec.bins() != fb.bins()) {
    throw Error(ErrorCode::ShapeMismatch, "spectrogram has " + std::to_string(spec.bins()) +
                                              " bins, filterbank expects " + std::to_string(fb.bins()));
  }
  const std::size_t frames = spec.frames();
  LogMelMatrix out{RealMatrix(fb.n_mels(), frames), false};
  for (std::size_t m = 0; m < fb.n_mels(); ++m) {
    auto dst = out.values.row(m);
    const auto [first, last] = fb.support[m];
    for (std::size_t k = first; k < last; ++k) {
      const double w = fb.weights(m, k);
      const auto src = spec.values.row(k);
      for (std::size_t t = 0; t < frames; ++t) dst[t] += w * src[t];
    }
    for (auto& v : dst) v = std::log(v + kLogFloor);
  }
  return out;
}

LogMelMatrix band_normalize(LogMelMatrix m) {
  if (m.band_normalized) throw Error(ErrorCode::AlreadyNormalized, "matrix is already band-normalized");
  const std::size_t cols = m.values.cols();
  for (std::size_t r = 0; r < m.values.rows(); ++r) {
    auto row = m.values.row(r);
    double mean = 0.0;
    for (double v : row) mean += v;
    mean /= static_cast<double>(cols);
    double var = 0.0;
    for (double v : row) var += (v - mean) * (v - mean);
    const double sd = std::sqrt(var / static_cast<double>(cols));
    if (sd < kConstantRowStd) {
      std::fill(row.begin(), row.end(), 0.0);
    } else {
      for (auto& v : row) v = (v - mean) / sd;
    }
  }
  m.band_normalized = true;
  return m;
}

}  // namespace asc::dsp
