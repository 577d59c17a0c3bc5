#pragma once

// Slow, direct reference implementations used only by the tests. Nothing here
// shares code with the library beyond plain data types.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "asc/matrix.hpp"
#include "asc/network.hpp"

namespace oracle {

// ---- synthetic audio -------------------------------------------------------

std::vector<double> sine(std::size_t n, double freq_hz, int rate, double amp = 0.5, double phase = 0.0);
std::vector<double> white_noise(std::size_t n, std::uint64_t seed, double amp = 0.1);
// Unit impulses every `period` samples starting at `offset`.
std::vector<double> click_train(std::size_t n, std::size_t period, std::size_t offset = 0, double amp = 0.9);

// Scene-like stereo clip: a class-specific tone pair plus noise bursts whose
// rate also depends on the class. Deterministic in (cls, variant).
struct StereoSignal {
  std::vector<double> left, right;
};
StereoSignal scene_clip(std::size_t cls, std::size_t variant, int rate, double seconds);

// ---- spectral --------------------------------------------------------------

// 0.54 - 0.46 cos(2 pi n / N), periodic.
std::vector<double> hamming(std::size_t n);

// |DFT|^2 of every frame by direct summation. Frames are centred (reflect pad of
// win/2 without repeating the edge) and the trailing frame is dropped.
asc::RealMatrix naive_power_spectrogram(std::span<const double> x, std::size_t win, std::size_t hop,
                                        std::size_t nfft);

// Triangular Mel weights (unit peak) evaluated straight from the definition.
asc::RealMatrix naive_mel_weights(int rate, std::size_t nfft, std::size_t n_mels, double fmin, double fmax);

// ---- HPSS ------------------------------------------------------------------

// Median of a window gathered by explicit mirror padding (d c b a | a b c d | d c b a), full sort.
std::vector<double> naive_median_filter(std::span<const double> x, std::size_t k);

struct NaiveHpss {
  asc::RealMatrix h, p;
};
// rows = frequency bins, cols = frames.
NaiveHpss naive_hpss(const asc::RealMatrix& s, std::size_t kt, std::size_t kf);

// ---- ensemble --------------------------------------------------------------

std::vector<double> direct_mean(const std::vector<std::vector<double>>& p);
// Direct product then M-th root (no logarithms).
std::vector<double> direct_geometric(const std::vector<std::vector<double>>& p, double floor = 1e-12);
// Rank each value by counting how many others beat it (ties broken by model index).
std::vector<double> direct_owa(const std::vector<std::vector<double>>& p, const std::vector<double>& w);

// ---- gradients -------------------------------------------------------------

struct GradCheckResult {
  std::size_t checked = 0;
  std::size_t failed = 0;
  double worst_rel = 0.0;
  std::string worst_name;
  double worst_analytic = 0.0, worst_numeric = 0.0;
};

// Relative error |a - n| / max(|a|, |n|, floor).
double relative_error(double a, double n, double floor);

// Perturbs every trainable parameter of `net` by +-h and compares the central
// difference of the frozen-mode loss against the analytic gradient.
GradCheckResult finite_difference_check(asc::nn::NetworkF64& net, const asc::nn::Tensor4<double>& batch,
                                        std::span<const std::size_t> labels, double h, double tol,
                                        double floor);

// ---- misc ------------------------------------------------------------------

std::filesystem::path temp_dir(const std::string& tag);
std::string read_file(const std::filesystem::path& p);

}  // namespace oracle
