#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "asc/features.hpp"

namespace asc {

/// "LMT1" container: magic, u32 rank, u32 dims[rank], u8 dtype (0 = float32),
/// row-major little-endian payload.
struct TensorRecord {
  std::vector<std::uint32_t> dims;
  std::vector<float> values;

  std::size_t element_count() const noexcept;
};

inline constexpr std::uint8_t kDtypeFloat32 = 0;

void write_tensor(std::ostream& out, std::span<const std::uint32_t> dims, std::span<const float> values);

/// Errors: ParseError on bad magic, dtype, or truncated payload.
TensorRecord read_tensor(std::istream& in);

struct FeatureFileMeta {
  std::string clip_id;
  std::string combo;
  std::string label;
};

/// `<dir>/<clip_id>.<combo>.lmt`
std::filesystem::path feature_path(const std::filesystem::path& dir, std::string_view clip_id, ComboName combo);

/// Writes the tensor as dims [n_mels, frames, C] plus a `.meta` sidecar line
/// `clip_id<TAB>combo<TAB>label`.
void save_feature_tensor(const std::filesystem::path& path, const FeatureTensor& tensor, std::string_view label);

struct LoadedFeature {
  FeatureTensor tensor;
  FeatureFileMeta meta;
};

/// Errors: Io, ParseError.
LoadedFeature load_feature_tensor(const std::filesystem::path& path);

}  // namespace asc
