#include "asc/evaluate.hpp"

#include <algorithm>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "asc/error.hpp"

namespace asc::evaluate {

ConfusionMatrix::ConfusionMatrix(std::size_t classes) : classes_(classes), counts_(classes * classes, 0) {}

void ConfusionMatrix::accumulate(std::size_t truth, std::size_t predicted) {
  if (truth >= classes_ || predicted >= classes_) {
    throw Error(ErrorCode::IndexOutOfRange, "pair (" + std::to_string(truth) + ", " + std::to_string(predicted) +
                                                ") outside " + std::to_string(classes_) + " classes");
  }
  ++counts_[truth * classes_ + predicted];
  ++total_;
}

void ConfusionMatrix::merge(const ConfusionMatrix& other) {
  if (other.classes_ != classes_) throw Error(ErrorCode::ShapeMismatch, "confusion matrices differ in size");
  for (std::size_t i = 0; i < counts_.size(); ++i) counts_[i] += other.counts_[i];
  total_ += other.total_;
}

std::uint64_t ConfusionMatrix::count(std::size_t truth, std::size_t predicted) const {
  if (truth >= classes_ || predicted >= classes_) throw Error(ErrorCode::IndexOutOfRange, "cell out of range");
  return counts_[truth * classes_ + predicted];
}

std::uint64_t ConfusionMatrix::row_total(std::size_t truth) const {
  std::uint64_t n = 0;
  for (std::size_t p = 0; p < classes_; ++p) n += count(truth, p);
  return n;
}

std::uint64_t ConfusionMatrix::trace() const {
  std::uint64_t n = 0;
  for (std::size_t c = 0; c < classes_; ++c) n += counts_[c * classes_ + c];
  return n;
}

ClassAccuracies class_accuracies(const ConfusionMatrix& cm, const LabelSet& labels) {
  ClassAccuracies out;
  out.per_class.resize(cm.classes());
  double sum = 0.0;
  std::size_t defined = 0;
  for (std::size_t c = 0; c < cm.classes(); ++c) {
    const auto n = cm.row_total(c);
    if (n == 0) {
      const std::string name = c < labels.size() ? labels.name(c) : std::to_string(c);
      out.warnings.push_back("class '" + name + "' has no samples; excluded from the average");
      continue;
    }
    const double acc = 100.0 * static_cast<double>(cm.count(c, c)) / static_cast<double>(n);
    out.per_class[c] = acc;
    sum += acc;
    ++defined;
  }
  out.macro_average = defined ? sum / static_cast<double>(defined) : 0.0;
  return out;
}

namespace {

std::string cell(const std::optional<double>& v, int precision) {
  if (!v) return "";
  std::ostringstream s;
  s << std::fixed << std::setprecision(precision) << *v;
  return s.str();
}

}  // namespace

void write_report_csv(std::ostream& out, const LabelSet& labels, const std::vector<MethodColumn>& columns) {
  out << "class";
  for (const auto& c : columns) out << ',' << c.name;
  out << '\n';
  for (std::size_t k = 0; k < labels.size(); ++k) {
    out << labels.name(k);
    for (const auto& c : columns) out << ',' << (k < c.accuracies.per_class.size() ? cell(c.accuracies.per_class[k], 4) : "");
    out << '\n';
  }
  out << "average";
  for (const auto& c : columns) out << ',' << cell(c.accuracies.macro_average, 4);
  out << '\n';
}

void write_report_table(std::ostream& out, const LabelSet& labels, const std::vector<MethodColumn>& columns) {
  std::size_t name_w = std::string("Average").size();
  for (const auto& n : labels.names()) name_w = std::max(name_w, n.size());
  std::vector<std::size_t> col_w;
  for (const auto& c : columns) col_w.push_back(std::max<std::size_t>(c.name.size(), 6));

  auto rule = [&] {
    out << std::string(name_w, '-');
    for (auto w : col_w) out << "-+-" << std::string(w, '-');
    out << '\n';
  };
  out << std::left << std::setw(static_cast<int>(name_w)) << "Class";
  for (std::size_t i = 0; i < columns.size(); ++i) out << " | " << std::right << std::setw(static_cast<int>(col_w[i])) << columns[i].name;
  out << '\n';
  rule();
  for (std::size_t k = 0; k < labels.size(); ++k) {
    out << std::left << std::setw(static_cast<int>(name_w)) << labels.name(k);
    for (std::size_t i = 0; i < columns.size(); ++i) {
      const auto& pc = columns[i].accuracies.per_class;
      const std::string v = k < pc.size() && pc[k] ? cell(pc[k], 1) : "n/a";
      out << " | " << std::right << std::setw(static_cast<int>(col_w[i])) << v;
    }
    out << '\n';
  }
  rule();
  out << std::left << std::setw(static_cast<int>(name_w)) << "Average";
  for (std::size_t i = 0; i < columns.size(); ++i) {
    out << " | " << std::right << std::setw(static_cast<int>(col_w[i])) << cell(columns[i].accuracies.macro_average, 2);
  }
  out << '\n';
}

}  // namespace asc::evaluate
