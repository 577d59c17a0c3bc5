#include "asc/predictions_io.hpp"

#include <charconv>
#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>
#include <unordered_map>

#include "asc/error.hpp"

namespace asc {

namespace {

std::vector<std::string> split_commas(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream s(line);
  while (std::getline(s, field, ',')) out.push_back(field);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

bool read_record(std::istream& in, std::string& line) {
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty()) return true;
  }
  return false;
}

std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path.string());
  return in;
}

std::ofstream open_out(const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + path.string());
  return out;
}

}  // namespace

void write_predictions(std::ostream& out, const PredictionTable& table, const LabelSet& labels) {
  out << "clip_id";
  for (const auto& n : labels.names()) out << ',' << n;
  out << '\n';
  out << std::setprecision(9);
  for (std::size_t i = 0; i < table.size(); ++i) {
    if (table.scores[i].size() != labels.size()) throw Error(ErrorCode::ShapeMismatch, "score row has the wrong width");
    out << table.clip_ids[i];
    for (double v : table.scores[i]) out << ',' << v;
    out << '\n';
  }
}

void write_predictions(const std::filesystem::path& path, const PredictionTable& table, const LabelSet& labels) {
  auto out = open_out(path);
  write_predictions(out, table, labels);
  if (!out) throw Error(ErrorCode::Io, "write failed for " + path.string());
}

PredictionTable read_predictions(std::istream& in, const LabelSet& labels) {
  std::string line;
  if (!read_record(in, line)) throw Error(ErrorCode::ParseError, "prediction file is empty");
  const auto header = split_commas(line);
  if (header.size() != labels.size() + 1 || header[0] != "clip_id") {
    throw Error(ErrorCode::ParseError, "prediction header must be clip_id followed by " + std::to_string(labels.size()) + " labels");
  }
  for (std::size_t k = 0; k < labels.size(); ++k) {
    if (header[k + 1] != labels.name(k)) throw Error(ErrorCode::ParseError, "unexpected label column '" + header[k + 1] + "'");
  }
  PredictionTable t;
  std::set<std::string> seen;
  std::size_t line_no = 1;
  while (read_record(in, line)) {
    ++line_no;
    const auto f = split_commas(line);
    if (f.size() != labels.size() + 1) throw Error(ErrorCode::ParseError, "line " + std::to_string(line_no) + ": wrong field count");
    if (!seen.insert(f[0]).second) throw Error(ErrorCode::DuplicateEntry, "clip '" + f[0] + "' listed twice");
    std::vector<double> row(labels.size());
    for (std::size_t k = 0; k < labels.size(); ++k) {
      const auto& tok = f[k + 1];
      const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), row[k]);
      if (tok.empty() || ec != std::errc() || ptr != tok.data() + tok.size()) {
        throw Error(ErrorCode::ParseError, "line " + std::to_string(line_no) + ": bad number '" + tok + "'");
      }
    }
    t.clip_ids.push_back(f[0]);
    t.scores.push_back(std::move(row));
  }
  return t;
}

PredictionTable read_predictions(const std::filesystem::path& path, const LabelSet& labels) {
  auto in = open_in(path);
  try {
    return read_predictions(in, labels);
  } catch (const Error& e) {
    throw Error(e.code(), path.string() + ": " + e.detail());
  }
}

PredictionTable align_to(const PredictionTable& reference, const PredictionTable& other) {
  if (reference.size() != other.size()) {
    throw Error(ErrorCode::ClipSetMismatch, std::to_string(reference.size()) + " vs " + std::to_string(other.size()) + " clips");
  }
  std::unordered_map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < other.size(); ++i) index.emplace(other.clip_ids[i], i);
  PredictionTable out;
  out.clip_ids = reference.clip_ids;
  out.scores.reserve(reference.size());
  for (const auto& id : reference.clip_ids) {
    const auto it = index.find(id);
    if (it == index.end()) throw Error(ErrorCode::ClipSetMismatch, "clip '" + id + "' missing from one prediction file");
    out.scores.push_back(other.scores[it->second]);
  }
  return out;
}

void write_decisions(const std::filesystem::path& path, const std::vector<DecisionEntry>& decisions) {
  auto out = open_out(path);
  out << "clip_id,label\n";
  for (const auto& d : decisions) out << d.clip_id << ',' << d.label << '\n';
  if (!out) throw Error(ErrorCode::Io, "write failed for " + path.string());
}

std::vector<DecisionEntry> read_decisions(const std::filesystem::path& path) {
  auto in = open_in(path);
  std::string line;
  if (!read_record(in, line) || line != "clip_id,label") {
    throw Error(ErrorCode::ParseError, path.string() + ": expected header clip_id,label");
  }
  std::vector<DecisionEntry> out;
  std::set<std::string> seen;
  while (read_record(in, line)) {
    const auto f = split_commas(line);
    if (f.size() != 2) throw Error(ErrorCode::ParseError, path.string() + ": bad decision line '" + line + "'");
    if (!seen.insert(f[0]).second) throw Error(ErrorCode::DuplicateEntry, "clip '" + f[0] + "' decided twice");
    out.push_back({f[0], f[1]});
  }
  return out;
}

}  // namespace asc
