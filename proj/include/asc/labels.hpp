#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace asc {

/// Ordered set of scene labels; a label's position is its class index.
class LabelSet {
 public:
  explicit LabelSet(std::vector<std::string> names);

  /// The ten acoustic scene classes, in the conventional DCASE order.
  static const LabelSet& scenes();

  std::size_t size() const noexcept { return names_.size(); }
  const std::string& name(std::size_t index) const;
  const std::vector<std::string>& names() const noexcept { return names_; }
  std::optional<std::size_t> find(std::string_view label) const;

  /// Throws UnknownLabel.
  std::size_t index_of(std::string_view label) const;

 private:
  std::vector<std::string> names_;
};

}  // namespace asc
