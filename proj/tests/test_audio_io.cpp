#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <fstream>
#include <thread>

#include "asc/audio_io.hpp"
#include "asc/random.hpp"
#include "check.hpp"
#include "oracles.hpp"

using namespace asc;
namespace fs = std::filesystem;

namespace {

std::vector<std::vector<double>> stereo(std::size_t n, std::uint64_t seed) {
  return {oracle::white_noise(n, seed, 0.8), oracle::white_noise(n, seed + 1, 0.8)};
}

void put(std::ofstream& o, std::uint32_t v, int bytes) {
  for (int i = 0; i < bytes; ++i) o.put(static_cast<char>((v >> (8 * i)) & 0xFF));
}

}  // namespace

TEST_CASE("10 s stereo 48 kHz PCM16 loads with 480000 samples per channel") {
  const auto dir = oracle::temp_dir("audio_basic");
  const auto ch = stereo(480000, 1);
  write_wav(dir / "a.wav", ch, 48000, WavEncoding::Pcm16);
  const auto clip = load_clip(dir / "a.wav");
  CHECK(clip.size() == 480000);
  CHECK(clip.left().size() == clip.right().size());
  CHECK(clip.sample_rate() == 48000);
  CHECK(clip.source_id() == "a");
  for (std::size_t i = 0; i < 480000; i += 997) CHECK(std::abs(clip.left()[i] - ch[0][i]) <= 1.0 / 32767);
}

TEST_CASE("mono file is rejected") {
  const auto dir = oracle::temp_dir("audio_mono");
  const std::vector<std::vector<double>> mono = {oracle::sine(480000, 440, 48000)};
  write_wav(dir / "m.wav", mono, 48000);
  CHECK_CODE(load_clip(dir / "m.wav"), ErrorCode::UnsupportedFormat);
}

TEST_CASE("11 s clip keeps its first 480000 samples") {
  const auto dir = oracle::temp_dir("audio_long");
  const auto ch = stereo(528000, 2);
  write_wav(dir / "l.wav", ch, 48000, WavEncoding::Float32);
  const auto clip = load_clip(dir / "l.wav");
  REQUIRE(clip.size() == 480000);
  CHECK(clip.left()[0] == static_cast<double>(static_cast<float>(ch[0][0])));
  CHECK(clip.left()[479999] == static_cast<double>(static_cast<float>(ch[0][479999])));
}

TEST_CASE("short clip, wrong rate and non-WAV files fail with specific codes") {
  const auto dir = oracle::temp_dir("audio_errors");
  write_wav(dir / "short.wav", stereo(47999 * 10, 3), 48000);
  CHECK_CODE(load_clip(dir / "short.wav"), ErrorCode::DurationTooShort);
  write_wav(dir / "rate.wav", stereo(441000, 4), 44100);
  CHECK_CODE(load_clip(dir / "rate.wav"), ErrorCode::RateMismatch);
  std::ofstream(dir / "junk.wav") << "this is not audio at all, just text padding padding padding";
  CHECK_CODE(load_clip(dir / "junk.wav"), ErrorCode::UnsupportedFormat);
  CHECK_CODE(load_clip(dir / "missing.wav"), ErrorCode::Io);
}

TEST_CASE("PCM24 and float32 round trips stay within quantisation") {
  const auto dir = oracle::temp_dir("audio_depth");
  const auto ch = stereo(48000, 5);
  write_wav(dir / "p24.wav", ch, 48000, WavEncoding::Pcm24);
  write_wav(dir / "f32.wav", ch, 48000, WavEncoding::Float32);
  const auto a = load_clip(dir / "p24.wav", 48000, 1.0);
  const auto b = load_clip(dir / "f32.wav", 48000, 1.0);
  double e24 = 0, e32 = 0;
  for (std::size_t i = 0; i < 48000; ++i) {
    e24 = std::max(e24, std::abs(a.right()[i] - ch[1][i]));
    e32 = std::max(e32, std::abs(b.right()[i] - ch[1][i]));
  }
  CHECK(e24 <= 1.0 / 8388607);
  CHECK(e32 <= 1e-7);
}

TEST_CASE("WAVE_FORMAT_EXTENSIBLE PCM16 with an extra chunk is accepted") {
  const auto dir = oracle::temp_dir("audio_ext");
  const auto path = dir / "ext.wav";
  const std::uint32_t frames = 4800;
  {
    std::ofstream o(path, std::ios::binary);
    o.write("RIFF", 4);
    put(o, 4 + (8 + 40) + (8 + 4) + (8 + frames * 4), 4);
    o.write("WAVE", 4);
    o.write("fmt ", 4);
    put(o, 40, 4);
    put(o, 0xFFFE, 2);
    put(o, 2, 2);
    put(o, 48000, 4);
    put(o, 48000 * 4, 4);
    put(o, 4, 2);
    put(o, 16, 2);
    put(o, 22, 2);
    put(o, 16, 2);
    put(o, 3, 4);
    put(o, 1, 2);  // sub-format GUID starts with the PCM tag
    o.write("\x00\x00\x00\x00\x10\x00\x80\x00\x00\xAA\x00\x38\x9B\x71", 14);
    o.write("LIST", 4);
    put(o, 4, 4);
    o.write("abcd", 4);
    o.write("data", 4);
    put(o, frames * 4, 4);
    for (std::uint32_t i = 0; i < frames; ++i) {
      put(o, static_cast<std::uint16_t>(static_cast<std::int16_t>(i % 100 * 100)), 2);
      put(o, static_cast<std::uint16_t>(static_cast<std::int16_t>(-1000)), 2);
    }
  }
  const auto clip = load_clip(path, 48000, 0.1);
  REQUIRE(clip.size() == 4800);
  CHECK(clip.left()[1] == doctest::Approx(100.0 / 32768).epsilon(1e-9));
  CHECK(clip.right()[7] == doctest::Approx(-1000.0 / 32768).epsilon(1e-9));
}

TEST_CASE("derive_channel definitions") {
  const AudioClip c({1.0, 0.0}, {0.0, 1.0}, 48000);
  CHECK(derive_channel(c, Channel::Mono) == std::vector<double>{0.5, 0.5});
  CHECK(derive_channel(c, Channel::Difference) == std::vector<double>{1.0, -1.0});
  CHECK(derive_channel(c, Channel::Left) == std::vector<double>{1.0, 0.0});
  CHECK(derive_channel(c, Channel::Right) == std::vector<double>{0.0, 1.0});

  const auto s = oracle::white_noise(1000, 9);
  const AudioClip same(s, s, 48000);
  CHECK(derive_channel(same, Channel::Mono) == s);
  const auto d = derive_channel(same, Channel::Difference);
  CHECK(std::all_of(d.begin(), d.end(), [](double v) { return v == 0.0; }));
}

TEST_CASE("Mono + Difference/2 reconstructs Left; derive_channel is linear") {
  Rng rng(12);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> l(500), r(500);
    for (auto& v : l) v = rng.uniform(-1, 1);
    for (auto& v : r) v = rng.uniform(-1, 1);
    const AudioClip c(l, r, 48000);
    const auto m = derive_channel(c, Channel::Mono), d = derive_channel(c, Channel::Difference);
    for (std::size_t i = 0; i < l.size(); ++i) CHECK(std::abs(m[i] + d[i] / 2 - l[i]) <= 1e-12 * std::max(1.0, std::abs(l[i])));

    const double a = rng.uniform(-3, 3);
    std::vector<double> la(l), ra(r);
    for (auto& v : la) v *= a;
    for (auto& v : ra) v *= a;
    const AudioClip ca(la, ra, 48000);
    for (auto which : {Channel::Mono, Channel::Left, Channel::Right, Channel::Difference}) {
      const auto x = derive_channel(c, which), y = derive_channel(ca, which);
      for (std::size_t i = 0; i < x.size(); ++i) CHECK(y[i] == doctest::Approx(a * x[i]).epsilon(1e-12));
    }
  }
}

TEST_CASE("clip construction validates its invariants") {
  CHECK_CODE(AudioClip({1.0, 2.0}, {1.0}, 48000), ErrorCode::InvalidArgument);
  CHECK_CODE(AudioClip({1.0}, {1.0}, 0), ErrorCode::InvalidArgument);
  CHECK(expected_sample_count(48000, 10.0) == 480000);
}

TEST_CASE("concurrent loads of different files agree with serial loads") {
  const auto dir = oracle::temp_dir("audio_threads");
  for (int i = 0; i < 4; ++i) write_wav(dir / ("c" + std::to_string(i) + ".wav"), stereo(48000, 20 + i), 48000);
  std::vector<std::vector<double>> serial, parallel(4);
  for (int i = 0; i < 4; ++i) {
    const auto c = load_clip(dir / ("c" + std::to_string(i) + ".wav"), 48000, 1.0);
    serial.emplace_back(c.left().begin(), c.left().end());
  }
  std::vector<std::thread> ts;
  for (int i = 0; i < 4; ++i) {
    ts.emplace_back([&, i] {
      const auto c = load_clip(dir / ("c" + std::to_string(i) + ".wav"), 48000, 1.0);
      parallel[i].assign(c.left().begin(), c.left().end());
    });
  }
  for (auto& t : ts) t.join();
  CHECK(serial == parallel);
}
