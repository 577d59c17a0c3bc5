#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "asc/audio_io.hpp"
#include "asc/dsp_frontend.hpp"

namespace asc {

/// One input representation: Mono, Left, Right, Difference, Harmonic, Percussive.
enum class ChannelTag { M, L, R, D, H, P };

enum class ComboName { M, LRD, HP, HPM, HPD, HPLR };

struct RepresentationCombo {
  ComboName name;
  std::vector<ChannelTag> channels;

  std::string_view label() const noexcept;
  std::size_t size() const noexcept { return channels.size(); }
  bool operator==(const RepresentationCombo&) const = default;
};

char to_char(ChannelTag tag) noexcept;
std::string_view to_string(ComboName name) noexcept;

/// The six tested combinations, in the order M, LRD, HP, HPM, HPD, HPLR.
const std::vector<RepresentationCombo>& list_combos();

/// Throws InvalidArgument for unknown names.
const RepresentationCombo& combo_by_name(std::string_view name);

struct FrontendConfig {
  dsp::StftConfig stft;
  std::size_t n_mels = 64;
  double fmin = 0.0;
  std::optional<double> fmax;  // defaults to sample_rate / 2
  dsp::MelNormalization mel_norm = dsp::MelNormalization::Amplitude;
  std::size_t hpss_kernel_time = 31;
  std::size_t hpss_kernel_freq = 31;
};

/// n_mels x frames x C tensor of band-normalized log-Mel channels, stored
/// channel-planar (channel c occupies values[c * n_mels * frames ...]).
struct FeatureTensor {
  std::size_t channels = 0;
  std::size_t n_mels = 0;
  std::size_t frames = 0;
  std::vector<float> values;
  ComboName combo = ComboName::M;
  std::string clip_id;

  std::size_t plane_size() const noexcept { return n_mels * frames; }
  std::span<const float> channel(std::size_t c) const {
    return {values.data() + c * plane_size(), plane_size()};
  }
  float at(std::size_t mel, std::size_t frame, std::size_t c) const {
    return values[c * plane_size() + mel * frames + frame];
  }
};

/// Computes representations for clips of one sample rate. The Mel filterbank
/// is built once and shared read-only, so const methods are thread-safe.
class FeatureExtractor {
 public:
  explicit FeatureExtractor(int sample_rate = kDefaultSampleRate, FrontendConfig config = {});

  int sample_rate() const noexcept { return sample_rate_; }
  const FrontendConfig& config() const noexcept { return config_; }
  const dsp::MelFilterbank& filterbank() const noexcept { return filterbank_; }

  /// Band-normalized log-Mel of one of the time-domain channels M/L/R/D.
  dsp::LogMelMatrix channel_log_mel(const AudioClip& clip, Channel which) const;

  /// Harmonic and percussive band-normalized log-Mels of the Mono signal.
  std::pair<dsp::LogMelMatrix, dsp::LogMelMatrix> hpss_log_mel(const AudioClip& clip) const;

  FeatureTensor build(const AudioClip& clip, const RepresentationCombo& combo) const;

  /// Builds several combos, computing each channel (and HPSS) at most once.
  std::vector<FeatureTensor> build_all(const AudioClip& clip, std::span<const RepresentationCombo> combos) const;

 private:
  int sample_rate_;
  FrontendConfig config_;
  dsp::MelFilterbank filterbank_;
};

/// Convenience wrapper constructing a FeatureExtractor for the clip's rate.
FeatureTensor build_representation(const AudioClip& clip, const RepresentationCombo& combo,
                                   const FrontendConfig& config = {});

}  // namespace asc
