#include "asc/features.hpp"

#include <algorithm>
#include <map>

#include "asc/error.hpp"

namespace asc {

namespace {

using enum ChannelTag;

Channel time_channel(ChannelTag tag) {
  switch (tag) {
    case M: return Channel::Mono;
    case L: return Channel::Left;
    case R: return Channel::Right;
    case D: return Channel::Difference;
    default: break;
  }
  throw Error(ErrorCode::InvalidArgument, "not a time-domain channel");
}

}  // namespace

char to_char(ChannelTag tag) noexcept {
  static constexpr char names[] = {'M', 'L', 'R', 'D', 'H', 'P'};
  return names[static_cast<int>(tag)];
}

std::string_view to_string(ComboName name) noexcept {
  switch (name) {
    case ComboName::M: return "M";
    case ComboName::LRD: return "LRD";
    case ComboName::HP: return "HP";
    case ComboName::HPM: return "HPM";
    case ComboName::HPD: return "HPD";
    case ComboName::HPLR: return "HPLR";
  }
  return "M";
}

std::string_view RepresentationCombo::label() const noexcept { return to_string(name); }

const std::vector<RepresentationCombo>& list_combos() {
  static const std::vector<RepresentationCombo> combos = {
      {ComboName::M, {M}},
      {ComboName::LRD, {L, R, D}},
      {ComboName::HP, {H, P}},
      {ComboName::HPM, {H, P, M}},
      {ComboName::HPD, {H, P, D}},
      {ComboName::HPLR, {H, P, L, R}},
  };
  return combos;
}

const RepresentationCombo& combo_by_name(std::string_view name) {
  for (const auto& c : list_combos()) {
    if (c.label() == name) return c;
  }
  throw Error(ErrorCode::InvalidArgument, "unknown representation '" + std::string(name) +
                                              "' (expected M, LRD, HP, HPM, HPD or HPLR)");
}

FeatureExtractor::FeatureExtractor(int sample_rate, FrontendConfig config)
    : sample_rate_(sample_rate), config_(std::move(config)) {
  config_.stft.validate(sample_rate_);
  filterbank_ = dsp::build_mel_filterbank(sample_rate_, config_.stft.fft_size, config_.n_mels, config_.fmin,
                                          config_.fmax.value_or(sample_rate_ / 2.0), config_.mel_norm);
}

dsp::LogMelMatrix FeatureExtractor::channel_log_mel(const AudioClip& clip, Channel which) const {
  if (clip.sample_rate() != sample_rate_) {
    throw Error(ErrorCode::RateMismatch, "clip at " + std::to_string(clip.sample_rate()) +
                                             " Hz, extractor configured for " + std::to_string(sample_rate_));
  }
  const auto signal = derive_channel(clip, which);
  const auto spec = dsp::stft_power(signal, config_.stft, sample_rate_);
  return dsp::band_normalize(dsp::log_mel(spec, filterbank_));
}

std::pair<dsp::LogMelMatrix, dsp::LogMelMatrix> FeatureExtractor::hpss_log_mel(const AudioClip& clip) const {
  if (clip.sample_rate() != sample_rate_) {
    throw Error(ErrorCode::RateMismatch, "clip at " + std::to_string(clip.sample_rate()) +
                                             " Hz, extractor configured for " + std::to_string(sample_rate_));
  }
  const auto mono = derive_channel(clip, Channel::Mono);
  const auto spec = dsp::stft_power(mono, config_.stft, sample_rate_);
  const auto parts = dsp::hpss(spec, config_.hpss_kernel_time, config_.hpss_kernel_freq);
  return {dsp::band_normalize(dsp::log_mel(parts.harmonic, filterbank_)),
          dsp::band_normalize(dsp::log_mel(parts.percussive, filterbank_))};
}

FeatureTensor FeatureExtractor::build(const AudioClip& clip, const RepresentationCombo& combo) const {
  return std::move(build_all(clip, std::span(&combo, 1)).front());
}

std::vector<FeatureTensor> FeatureExtractor::build_all(const AudioClip& clip,
                                                       std::span<const RepresentationCombo> combos) const {
  std::map<ChannelTag, dsp::LogMelMatrix> cache;
  auto get = [&](ChannelTag tag) -> const dsp::LogMelMatrix& {
    if (auto it = cache.find(tag); it != cache.end()) return it->second;
    if (tag == H || tag == P) {
      auto [h, p] = hpss_log_mel(clip);
      cache.emplace(H, std::move(h));
      cache.emplace(P, std::move(p));
      return cache.at(tag);
    }
    return cache.emplace(tag, channel_log_mel(clip, time_channel(tag))).first->second;
  };

  std::vector<FeatureTensor> out;
  out.reserve(combos.size());
  for (const auto& combo : combos) {
    if (combo.channels.empty()) throw Error(ErrorCode::InvalidArgument, "combo has no channels");
    FeatureTensor t;
    t.combo = combo.name;
    t.clip_id = clip.source_id();
    t.channels = combo.channels.size();
    for (std::size_t c = 0; c < combo.channels.size(); ++c) {
      const auto& m = get(combo.channels[c]);
      if (c == 0) {
        t.n_mels = m.values.rows();
        t.frames = m.values.cols();
        t.values.resize(t.channels * t.plane_size());
      }
      std::transform(m.values.data().begin(), m.values.data().end(), t.values.begin() + c * t.plane_size(),
                     [](double v) { return static_cast<float>(v); });
    }
    out.push_back(std::move(t));
  }
  return out;
}

FeatureTensor build_representation(const AudioClip& clip, const RepresentationCombo& combo,
                                   const FrontendConfig& config) {
  return FeatureExtractor(clip.sample_rate(), config).build(clip, combo);
}

}  // namespace asc
