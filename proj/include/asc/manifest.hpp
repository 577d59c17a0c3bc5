#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "asc/labels.hpp"

namespace asc {

enum class Split { Train, Validation, Test };

std::string_view to_string(Split split) noexcept;
std::optional<Split> parse_split(std::string_view text);

struct ManifestEntry {
  std::string path;  // relative to the manifest's directory
  std::string label;
  std::optional<Split> split;

  /// Stem of the audio path; used to name feature files and prediction rows.
  std::string clip_id() const;
};

struct DatasetManifest {
  std::vector<ManifestEntry> entries;
  std::filesystem::path base_dir;

  std::filesystem::path resolve(const ManifestEntry& entry) const { return base_dir / entry.path; }
};

/// Parses `path,label[,split]` rows (tab or comma separated, auto-detected from
/// the first record). A first row whose label column reads "label" or
/// "scene_label" is treated as a header.
///
/// Errors: ParseError (empty file, malformed row, bad split tag), UnknownLabel,
/// DuplicateEntry, Io.
DatasetManifest parse_manifest(std::string_view text, const LabelSet& labels = LabelSet::scenes());
DatasetManifest load_manifest(const std::filesystem::path& path,
                              const LabelSet& labels = LabelSet::scenes());

}  // namespace asc
