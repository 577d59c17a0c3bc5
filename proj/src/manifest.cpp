#include "asc/manifest.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <set>
#include <sstream>

#include "asc/error.hpp"

namespace asc {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split_fields(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t at = line.find(sep, start);
    out.push_back(trim(line.substr(start, at == std::string_view::npos ? std::string_view::npos : at - start)));
    if (at == std::string_view::npos) break;
    start = at + 1;
  }
  return out;
}

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

}  // namespace

std::string_view to_string(Split split) noexcept {
  switch (split) {
    case Split::Train: return "train";
    case Split::Validation: return "validation";
    case Split::Test: return "test";
  }
  return "train";
}

std::optional<Split> parse_split(std::string_view text) {
  const std::string s = lower(text);
  if (s == "train") return Split::Train;
  if (s == "validation" || s == "val") return Split::Validation;
  if (s == "test") return Split::Test;
  return std::nullopt;
}

std::string ManifestEntry::clip_id() const { return std::filesystem::path(path).stem().string(); }

DatasetManifest parse_manifest(std::string_view text, const LabelSet& labels) {
  if (text.starts_with("\xEF\xBB\xBF")) text.remove_prefix(3);

  DatasetManifest manifest;
  std::set<std::string> seen;
  std::optional<char> sep;
  bool first_record = true;
  std::size_t line_no = 0;

  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string_view line = text.substr(pos, eol - pos);
    pos = eol + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (trim(line).empty()) {
      if (eol == text.size()) break;
      continue;
    }
    if (!sep) sep = line.find('\t') != std::string_view::npos ? '\t' : ',';

    const auto fields = split_fields(line, *sep);
    const std::string where = "line " + std::to_string(line_no);
    if (fields.size() < 2 || fields.size() > 3) {
      throw Error(ErrorCode::ParseError, where + ": expected path,label[,split]");
    }
    if (first_record) {
      first_record = false;
      const std::string head = lower(fields[1]);
      if (head == "label" || head == "scene_label") continue;
    }
    if (fields[0].empty() || fields[1].empty()) {
      throw Error(ErrorCode::ParseError, where + ": empty path or label");
    }

    ManifestEntry entry;
    entry.path = std::string(fields[0]);
    entry.label = std::string(fields[1]);
    if (!labels.find(entry.label)) {
      throw Error(ErrorCode::UnknownLabel, where + ": '" + entry.label + "'");
    }
    if (fields.size() == 3 && !fields[2].empty()) {
      entry.split = parse_split(fields[2]);
      if (!entry.split) throw Error(ErrorCode::ParseError, where + ": bad split '" + std::string(fields[2]) + "'");
    }
    if (!seen.insert(entry.path).second) {
      throw Error(ErrorCode::DuplicateEntry, where + ": '" + entry.path + "' listed twice");
    }
    manifest.entries.push_back(std::move(entry));
    if (eol == text.size()) break;
  }
  if (manifest.entries.empty()) throw Error(ErrorCode::ParseError, "manifest has no entries");
  return manifest;
}

DatasetManifest load_manifest(const std::filesystem::path& path, const LabelSet& labels) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open manifest " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  DatasetManifest manifest = parse_manifest(ss.str(), labels);
  manifest.base_dir = path.parent_path();
  return manifest;
}

}  // namespace asc
