#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "asc/dsp_frontend.hpp"
#include "asc/random.hpp"
#include "check.hpp"
#include "oracles.hpp"

using namespace asc;
using namespace asc::dsp;

namespace {

PowerSpectrogram random_spec(std::size_t bins, std::size_t frames, std::uint64_t seed) {
  Rng rng(seed);
  PowerSpectrogram s{RealMatrix(bins, frames)};
  for (auto& v : s.values.data()) v = rng.uniform() * rng.uniform() * 10.0;
  return s;
}

}  // namespace

TEST_CASE("median filter matches a sort-based oracle") {
  Rng rng(2);
  for (std::size_t n : {3u, 4u, 9u, 31u, 64u}) {
    std::vector<double> x(n);
    for (auto& v : x) v = std::floor(rng.uniform(0, 6));  // plenty of ties
    for (std::size_t k = 3; k <= n; k += 2) {
      const auto a = median_filter(x, k);
      const auto b = oracle::naive_median_filter(x, k);
      CHECK(a == b);
    }
  }
}

TEST_CASE("kernel validation") {
  const auto s = random_spec(20, 20, 1);
  CHECK_CODE(hpss(s, 31, 31), ErrorCode::KernelTooLarge);
  CHECK_CODE(hpss(s, 3, 21), ErrorCode::KernelTooLarge);
  CHECK_CODE(hpss(s, 4, 3), ErrorCode::InvalidKernel);
  CHECK_CODE(hpss(s, 3, 1), ErrorCode::InvalidKernel);
  CHECK_CODE(median_filter(std::vector<double>{1, 2, 3}, 5), ErrorCode::KernelTooLarge);
}

TEST_CASE("outputs are non-negative, bounded by the input and sum to it") {
  const auto s = random_spec(40, 60, 3);
  const auto r = hpss(s, 7, 9);
  for (std::size_t i = 0; i < s.values.size(); ++i) {
    const double x = s.values.data()[i], h = r.harmonic.values.data()[i], p = r.percussive.values.data()[i];
    CHECK(h >= 0.0);
    CHECK(p >= 0.0);
    CHECK(h <= x);
    CHECK(p <= x);
    CHECK(std::abs(h + p - x) <= 1e-9 * std::max(x, 1e-300));
  }
}

TEST_CASE("hpss matches the brute-force oracle") {
  for (std::uint64_t seed = 10; seed < 14; ++seed) {
    const auto s = random_spec(33, 47, seed);
    const auto r = hpss(s, 5, 11);
    const auto o = oracle::naive_hpss(s.values, 5, 11);
    for (std::size_t i = 0; i < s.values.size(); ++i) {
      CHECK(std::abs(r.harmonic.values.data()[i] - o.h.data()[i]) <= 1e-12 * (1.0 + o.h.data()[i]));
      CHECK(std::abs(r.percussive.values.data()[i] - o.p.data()[i]) <= 1e-12 * (1.0 + o.p.data()[i]));
    }
  }
}

TEST_CASE("all-zero spectrogram splits into zeros") {
  PowerSpectrogram z{RealMatrix(32, 32)};
  const auto r = hpss(z, 31, 31);
  for (double v : r.harmonic.values.data()) CHECK(v == 0.0);
  for (double v : r.percussive.values.data()) CHECK(v == 0.0);
}

TEST_CASE("tone goes harmonic, click goes percussive on a real STFT") {
  const StftConfig cfg;
  auto tone = oracle::sine(96000, 1000.0, 48000, 0.5);
  const auto clicks = oracle::click_train(96000, 24000, 12000);
  auto energy_share = [](const PowerSpectrogram& part, const PowerSpectrogram& whole) {
    double a = 0, b = 0;
    for (std::size_t i = 0; i < whole.values.size(); ++i) {
      a += part.values.data()[i];
      b += whole.values.data()[i];
    }
    return a / b;
  };
  const auto st = stft_power(tone, cfg, 48000);
  CHECK(energy_share(hpss(st).harmonic, st) >= 0.9);
  const auto sc = stft_power(clicks, cfg, 48000);
  CHECK(energy_share(hpss(sc).percussive, sc) >= 0.9);
}
