#include "asc/labels.hpp"

#include <algorithm>
#include <set>

#include "asc/error.hpp"

namespace asc {

LabelSet::LabelSet(std::vector<std::string> names) : names_(std::move(names)) {
  if (names_.empty()) throw Error(ErrorCode::InvalidArgument, "label set is empty");
  std::set<std::string> seen(names_.begin(), names_.end());
  if (seen.size() != names_.size()) throw Error(ErrorCode::InvalidArgument, "label set has duplicates");
}

const LabelSet& LabelSet::scenes() {
  static const LabelSet set({"airport", "bus", "metro", "metro_station", "park", "public_square",
                             "shopping_mall", "street_pedestrian", "street_traffic", "tram"});
  return set;
}

const std::string& LabelSet::name(std::size_t index) const {
  if (index >= names_.size()) {
    throw Error(ErrorCode::IndexOutOfRange, "class index " + std::to_string(index));
  }
  return names_[index];
}

std::optional<std::size_t> LabelSet::find(std::string_view label) const {
  auto it = std::find(names_.begin(), names_.end(), label);
  if (it == names_.end()) return std::nullopt;
  return static_cast<std::size_t>(it - names_.begin());
}

std::size_t LabelSet::index_of(std::string_view label) const {
  if (auto idx = find(label)) return *idx;
  throw Error(ErrorCode::UnknownLabel, "'" + std::string(label) + "' is not a known scene label");
}

}  // namespace asc
