#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "asc/labels.hpp"

namespace asc {

/// Per-clip class scores from one model (or a fused ensemble).
struct PredictionTable {
  std::vector<std::string> clip_ids;
  std::vector<std::vector<double>> scores;  // clip-major, one column per label

  std::size_t size() const noexcept { return clip_ids.size(); }
};

/// Header `clip_id,<labels...>`, scores printed with 9 significant digits.
void write_predictions(std::ostream& out, const PredictionTable& table, const LabelSet& labels = LabelSet::scenes());
void write_predictions(const std::filesystem::path& path, const PredictionTable& table,
                       const LabelSet& labels = LabelSet::scenes());

/// Errors: Io, ParseError (header must list the labels in order), DuplicateEntry.
PredictionTable read_predictions(std::istream& in, const LabelSet& labels = LabelSet::scenes());
PredictionTable read_predictions(const std::filesystem::path& path, const LabelSet& labels = LabelSet::scenes());

/// Reorders `other` to follow `reference`'s clip order.
/// Errors: ClipSetMismatch (the two tables do not cover the same clips).
PredictionTable align_to(const PredictionTable& reference, const PredictionTable& other);

struct DecisionEntry {
  std::string clip_id;
  std::string label;
};

/// Header `clip_id,label`.
void write_decisions(const std::filesystem::path& path, const std::vector<DecisionEntry>& decisions);
/// Errors: Io, ParseError, DuplicateEntry.
std::vector<DecisionEntry> read_decisions(const std::filesystem::path& path);

}  // namespace asc
