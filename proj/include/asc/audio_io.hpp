#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace asc {

inline constexpr int kDefaultSampleRate = 48000;
inline constexpr double kDefaultClipSeconds = 10.0;

/// Fixed-length stereo clip with samples in [-1, 1]. Immutable after construction.
class AudioClip {
 public:
  /// Throws InvalidArgument if the channels differ in length or the rate is not positive.
  AudioClip(std::vector<double> left, std::vector<double> right, int sample_rate,
            std::string source_id = {});

  std::span<const double> left() const noexcept { return left_; }
  std::span<const double> right() const noexcept { return right_; }
  int sample_rate() const noexcept { return sample_rate_; }
  const std::string& source_id() const noexcept { return source_id_; }
  std::size_t size() const noexcept { return left_.size(); }

 private:
  std::vector<double> left_;
  std::vector<double> right_;
  int sample_rate_;
  std::string source_id_;
};

enum class Channel { Mono, Left, Right, Difference };

/// Mono = (L+R)/2, Difference = L-R.
std::vector<double> derive_channel(const AudioClip& clip, Channel which);

/// Loads a 2-channel RIFF WAV (PCM16, PCM24 or float32). Clips longer than
/// expected_seconds are truncated from the end.
///
/// Errors: Io, UnsupportedFormat (not WAV, not stereo, other encodings),
/// RateMismatch (no resampling), DurationTooShort.
AudioClip load_clip(const std::filesystem::path& path, int expected_rate = kDefaultSampleRate,
                    double expected_seconds = kDefaultClipSeconds);

std::size_t expected_sample_count(int sample_rate, double seconds);

enum class WavEncoding { Pcm16, Pcm24, Float32 };

/// Writes interleaved channels. Integer encodings clip to [-1, 1].
void write_wav(const std::filesystem::path& path, std::span<const std::vector<double>> channels,
               int sample_rate, WavEncoding encoding = WavEncoding::Pcm16);

void write_wav(const std::filesystem::path& path, const AudioClip& clip,
               WavEncoding encoding = WavEncoding::Pcm16);

}  // namespace asc
