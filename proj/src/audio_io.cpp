#include "asc/audio_io.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <optional>

#include "asc/error.hpp"

namespace asc {

namespace {

constexpr std::uint16_t kFormatPcm = 1;
constexpr std::uint16_t kFormatFloat = 3;
constexpr std::uint16_t kFormatExtensible = 0xFFFE;

std::uint16_t read_u16(const unsigned char* p) {
  return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}

std::uint32_t read_u32(const unsigned char* p) {
  return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

struct WavFormat {
  std::uint16_t format = 0;
  std::uint16_t channels = 0;
  std::uint32_t sample_rate = 0;
  std::uint16_t block_align = 0;
  std::uint16_t bits = 0;
};

void put_u16(std::ostream& out, std::uint16_t v) {
  const char b[2] = {static_cast<char>(v & 0xFF), static_cast<char>(v >> 8)};
  out.write(b, 2);
}

void put_u32(std::ostream& out, std::uint32_t v) {
  const char b[4] = {static_cast<char>(v & 0xFF), static_cast<char>((v >> 8) & 0xFF),
                     static_cast<char>((v >> 16) & 0xFF), static_cast<char>(v >> 24)};
  out.write(b, 4);
}

}  // namespace

AudioClip::AudioClip(std::vector<double> left, std::vector<double> right, int sample_rate,
                     std::string source_id)
    : left_(std::move(left)),
      right_(std::move(right)),
      sample_rate_(sample_rate),
      source_id_(std::move(source_id)) {
  if (left_.size() != right_.size()) {
    throw Error(ErrorCode::InvalidArgument, "left/right channel lengths differ (" +
                                                std::to_string(left_.size()) + " vs " +
                                                std::to_string(right_.size()) + ")");
  }
  if (sample_rate_ <= 0) throw Error(ErrorCode::InvalidArgument, "sample rate must be positive");
}

std::vector<double> derive_channel(const AudioClip& clip, Channel which) {
  auto l = clip.left();
  auto r = clip.right();
  std::vector<double> out(clip.size());
  switch (which) {
    case Channel::Left: std::copy(l.begin(), l.end(), out.begin()); break;
    case Channel::Right: std::copy(r.begin(), r.end(), out.begin()); break;
    case Channel::Mono:
      for (std::size_t i = 0; i < out.size(); ++i) out[i] = 0.5 * (l[i] + r[i]);
      break;
    case Channel::Difference:
      for (std::size_t i = 0; i < out.size(); ++i) out[i] = l[i] - r[i];
      break;
  }
  return out;
}

std::size_t expected_sample_count(int sample_rate, double seconds) {
  return static_cast<std::size_t>(std::llround(seconds * sample_rate));
}

AudioClip load_clip(const std::filesystem::path& path, int expected_rate, double expected_seconds) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path.string());
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)),
                                   std::istreambuf_iterator<char>());
  const std::string where = " (" + path.string() + ")";
  if (bytes.size() < 12 || std::memcmp(bytes.data(), "RIFF", 4) != 0 ||
      std::memcmp(bytes.data() + 8, "WAVE", 4) != 0) {
    throw Error(ErrorCode::UnsupportedFormat, "not a RIFF/WAVE file" + where);
  }

  std::optional<WavFormat> fmt;
  const unsigned char* data = nullptr;
  std::size_t data_size = 0;
  std::size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    const unsigned char* chunk = bytes.data() + pos;
    const std::uint32_t size = read_u32(chunk + 4);
    const std::size_t body = pos + 8;
    const std::size_t avail = bytes.size() - body;
    if (std::memcmp(chunk, "fmt ", 4) == 0) {
      if (size < 16 || avail < 16) throw Error(ErrorCode::UnsupportedFormat, "short fmt chunk" + where);
      const unsigned char* f = bytes.data() + body;
      WavFormat w;
      w.format = read_u16(f);
      w.channels = read_u16(f + 2);
      w.sample_rate = read_u32(f + 4);
      w.block_align = read_u16(f + 12);
      w.bits = read_u16(f + 14);
      if (w.format == kFormatExtensible) {
        if (size < 40 || avail < 40) throw Error(ErrorCode::UnsupportedFormat, "short extensible fmt" + where);
        // first two bytes of the subformat GUID carry the format tag
        w.format = read_u16(f + 24);
      }
      fmt = w;
    } else if (std::memcmp(chunk, "data", 4) == 0) {
      data = bytes.data() + body;
      data_size = std::min<std::size_t>(size, avail);
      if (fmt) break;
    }
    pos = body + size + (size & 1u);
  }
  if (!fmt) throw Error(ErrorCode::UnsupportedFormat, "missing fmt chunk" + where);
  if (!data) throw Error(ErrorCode::UnsupportedFormat, "missing data chunk" + where);
  if (fmt->channels != 2) {
    throw Error(ErrorCode::UnsupportedFormat,
                "expected 2 channels, found " + std::to_string(fmt->channels) + where);
  }
  const bool pcm16 = fmt->format == kFormatPcm && fmt->bits == 16;
  const bool pcm24 = fmt->format == kFormatPcm && fmt->bits == 24;
  const bool f32 = fmt->format == kFormatFloat && fmt->bits == 32;
  if (!pcm16 && !pcm24 && !f32) {
    throw Error(ErrorCode::UnsupportedFormat, "unsupported encoding (format " +
                                                  std::to_string(fmt->format) + ", " +
                                                  std::to_string(fmt->bits) + " bits)" + where);
  }
  if (static_cast<int>(fmt->sample_rate) != expected_rate) {
    throw Error(ErrorCode::RateMismatch, "file rate " + std::to_string(fmt->sample_rate) +
                                             " Hz, expected " + std::to_string(expected_rate) +
                                             " Hz" + where);
  }

  const std::size_t bytes_per_sample = fmt->bits / 8;
  const std::size_t frame_bytes = bytes_per_sample * 2;
  const std::size_t frames = data_size / frame_bytes;
  const std::size_t wanted = expected_sample_count(expected_rate, expected_seconds);
  if (frames < wanted) {
    throw Error(ErrorCode::DurationTooShort, std::to_string(frames) + " frames, need " +
                                                 std::to_string(wanted) + where);
  }

  std::vector<double> left(wanted), right(wanted);
  for (std::size_t i = 0; i < wanted; ++i) {
    const unsigned char* p = data + i * frame_bytes;
    for (int ch = 0; ch < 2; ++ch) {
      const unsigned char* s = p + ch * bytes_per_sample;
      double v;
      if (pcm16) {
        v = static_cast<std::int16_t>(read_u16(s)) / 32768.0;
      } else if (pcm24) {
        std::int32_t x = static_cast<std::int32_t>(s[0] | (s[1] << 8) | (s[2] << 16));
        if (x & 0x800000) x |= ~0xFFFFFF;
        v = x / 8388608.0;
      } else {
        const std::uint32_t bits = read_u32(s);
        float f;
        std::memcpy(&f, &bits, sizeof f);
        v = f;
      }
      (ch == 0 ? left : right)[i] = v;
    }
  }
  return AudioClip(std::move(left), std::move(right), expected_rate, path.stem().string());
}

void write_wav(const std::filesystem::path& path, std::span<const std::vector<double>> channels,
               int sample_rate, WavEncoding encoding) {
  if (channels.empty()) throw Error(ErrorCode::InvalidArgument, "no channels to write");
  const std::size_t frames = channels[0].size();
  for (const auto& c : channels) {
    if (c.size() != frames) throw Error(ErrorCode::InvalidArgument, "channel lengths differ");
  }
  const std::uint16_t bits = encoding == WavEncoding::Pcm16 ? 16 : encoding == WavEncoding::Pcm24 ? 24 : 32;
  const auto n_ch = static_cast<std::uint16_t>(channels.size());
  const std::uint16_t block = static_cast<std::uint16_t>(n_ch * bits / 8);
  const std::uint32_t data_bytes = static_cast<std::uint32_t>(frames * block);

  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + path.string());
  out.write("RIFF", 4);
  put_u32(out, 36 + data_bytes);
  out.write("WAVEfmt ", 8);
  put_u32(out, 16);
  put_u16(out, encoding == WavEncoding::Float32 ? kFormatFloat : kFormatPcm);
  put_u16(out, n_ch);
  put_u32(out, static_cast<std::uint32_t>(sample_rate));
  put_u32(out, static_cast<std::uint32_t>(sample_rate) * block);
  put_u16(out, block);
  put_u16(out, bits);
  out.write("data", 4);
  put_u32(out, data_bytes);

  std::vector<char> buf(data_bytes);
  char* p = buf.data();
  for (std::size_t i = 0; i < frames; ++i) {
    for (const auto& c : channels) {
      const double v = c[i];
      if (encoding == WavEncoding::Float32) {
        const float f = static_cast<float>(v);
        std::memcpy(p, &f, 4);
        p += 4;
      } else if (encoding == WavEncoding::Pcm16) {
        const auto x = static_cast<std::int16_t>(std::lround(std::clamp(v, -1.0, 32767.0 / 32768.0) * 32768.0));
        std::memcpy(p, &x, 2);  // little-endian host
        p += 2;
      } else {
        const auto x = static_cast<std::int32_t>(
            std::lround(std::clamp(v, -1.0, 8388607.0 / 8388608.0) * 8388608.0));
        p[0] = static_cast<char>(x & 0xFF);
        p[1] = static_cast<char>((x >> 8) & 0xFF);
        p[2] = static_cast<char>((x >> 16) & 0xFF);
        p += 3;
      }
    }
  }
  out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
  if (!out) throw Error(ErrorCode::Io, "write failed for " + path.string());
}

void write_wav(const std::filesystem::path& path, const AudioClip& clip, WavEncoding encoding) {
  const std::vector<double> chans[2] = {std::vector<double>(clip.left().begin(), clip.left().end()),
                                        std::vector<double>(clip.right().begin(), clip.right().end())};
  write_wav(path, std::span<const std::vector<double>>(chans, 2), clip.sample_rate(), encoding);
}

}  // namespace asc
