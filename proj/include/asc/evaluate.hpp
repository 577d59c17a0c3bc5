#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "asc/labels.hpp"

namespace asc::evaluate {

/// rows = truth, cols = prediction.
class ConfusionMatrix {
 public:
  explicit ConfusionMatrix(std::size_t classes = 10);

  std::size_t classes() const noexcept { return classes_; }

  /// Errors: IndexOutOfRange.
  void accumulate(std::size_t truth, std::size_t predicted);
  /// Elementwise sum, for combining evaluation shards. Errors: ShapeMismatch.
  void merge(const ConfusionMatrix& other);

  std::uint64_t count(std::size_t truth, std::size_t predicted) const;
  std::uint64_t row_total(std::size_t truth) const;
  std::uint64_t total() const noexcept { return total_; }
  std::uint64_t trace() const;

 private:
  std::size_t classes_;
  std::vector<std::uint64_t> counts_;
  std::uint64_t total_ = 0;
};

struct ClassAccuracies {
  std::vector<std::optional<double>> per_class;  // percent; nullopt for classes with no samples
  double macro_average = 0.0;                    // unweighted mean over defined classes, percent
  std::vector<std::string> warnings;
};

ClassAccuracies class_accuracies(const ConfusionMatrix& cm, const LabelSet& labels = LabelSet::scenes());

struct MethodColumn {
  std::string name;  // e.g. "Sum", "Prod", "OWA"
  ClassAccuracies accuracies;
};

/// `class,<method>...` with an `average` row; undefined cells left empty.
void write_report_csv(std::ostream& out, const LabelSet& labels, const std::vector<MethodColumn>& columns);

/// Aligned text table, one row per class plus an average row.
void write_report_table(std::ostream& out, const LabelSet& labels, const std::vector<MethodColumn>& columns);

}  // namespace asc::evaluate
