#include "asc/ensemble.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <functional>
#include <string>

#include "asc/error.hpp"

namespace asc::ensemble {

EnsembleInput::EnsembleInput(const std::vector<std::vector<double>>& predictions) {
  if (predictions.empty()) throw Error(ErrorCode::InvalidArgument, "ensemble needs at least one model");
  models_ = predictions.size();
  classes_ = predictions.front().size();
  if (classes_ == 0) throw Error(ErrorCode::InvalidArgument, "prediction vectors are empty");
  values_.reserve(models_ * classes_);
  for (std::size_t m = 0; m < models_; ++m) {
    const auto& row = predictions[m];
    if (row.size() != classes_) throw Error(ErrorCode::InvalidArgument, "models disagree on the class count");
    double sum = 0.0;
    for (double p : row) {
      if (!(p >= 0.0)) throw Error(ErrorCode::InvalidArgument, "probabilities must be non-negative and finite");
      sum += p;
    }
    if (std::abs(sum - 1.0) > 1e-6) {
      throw Error(ErrorCode::InvalidArgument, "model " + std::to_string(m) + " probabilities sum to " + std::to_string(sum));
    }
    values_.insert(values_.end(), row.begin(), row.end());
  }
}

OwaWeights::OwaWeights(std::vector<double> weights) : w_(std::move(weights)) {
  if (w_.empty()) throw Error(ErrorCode::WeightsNotNormalized, "no weights");
  double sum = 0.0;
  for (double w : w_) {
    if (!(w >= 0.0) || !std::isfinite(w)) throw Error(ErrorCode::WeightsNotNormalized, "weights must be non-negative");
    sum += w;
  }
  if (std::abs(sum - 1.0) > 1e-9) {
    throw Error(ErrorCode::WeightsNotNormalized, "weights sum to " + std::to_string(sum));
  }
}

OwaWeights OwaWeights::and_like_default() { return OwaWeights({0.1, 0.15, 0.75}); }

OwaWeights OwaWeights::uniform(std::size_t m) {
  return OwaWeights(std::vector<double>(m, 1.0 / static_cast<double>(m)));
}

std::vector<double> fuse_arithmetic(const EnsembleInput& input) {
  std::vector<double> out(input.classes(), 0.0);
  for (std::size_t c = 0; c < input.classes(); ++c) {
    for (std::size_t m = 0; m < input.models(); ++m) out[c] += input.at(m, c);
    out[c] /= static_cast<double>(input.models());
  }
  return out;
}

std::vector<double> fuse_geometric(const EnsembleInput& input) {
  std::vector<double> out(input.classes());
  const double inv_m = 1.0 / static_cast<double>(input.models());
  for (std::size_t c = 0; c < input.classes(); ++c) {
    double log_sum = 0.0;
    for (std::size_t m = 0; m < input.models(); ++m) log_sum += std::log(std::max(input.at(m, c), kGeometricFloor));
    out[c] = std::exp(log_sum * inv_m);
  }
  return out;
}

std::vector<double> fuse_owa(const EnsembleInput& input, const OwaWeights& weights) {
  if (weights.size() != input.models()) {
    throw Error(ErrorCode::WeightLengthMismatch, std::to_string(weights.size()) + " weights for " +
                                                     std::to_string(input.models()) + " models");
  }
  std::vector<double> out(input.classes());
  std::vector<double> column(input.models());
  const auto w = weights.values();
  for (std::size_t c = 0; c < input.classes(); ++c) {
    for (std::size_t m = 0; m < input.models(); ++m) column[m] = input.at(m, c);
    std::sort(column.begin(), column.end(), std::greater<>());
    double s = 0.0;
    for (std::size_t i = 0; i < column.size(); ++i) s += w[i] * column[i];
    out[c] = s;
  }
  return out;
}

std::size_t decide(std::span<const double> scores) {
  if (scores.empty()) throw Error(ErrorCode::InvalidArgument, "no scores");
  std::size_t best = 0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (!std::isfinite(scores[i])) throw Error(ErrorCode::NonFiniteScore, "score " + std::to_string(i) + " is not finite");
    if (scores[i] > scores[best]) best = i;
  }
  return best;
}

std::string_view to_string(FusionMethod method) noexcept {
  switch (method) {
    case FusionMethod::Sum: return "sum";
    case FusionMethod::Prod: return "prod";
    case FusionMethod::Owa: return "owa";
  }
  return "sum";
}

FusionMethod parse_method(std::string_view name) {
  if (name == "sum") return FusionMethod::Sum;
  if (name == "prod") return FusionMethod::Prod;
  if (name == "owa") return FusionMethod::Owa;
  throw Error(ErrorCode::InvalidArgument, "unknown fusion method '" + std::string(name) + "' (sum|prod|owa)");
}

std::vector<double> fuse(const EnsembleInput& input, FusionMethod method, const std::optional<OwaWeights>& weights) {
  switch (method) {
    case FusionMethod::Sum: return fuse_arithmetic(input);
    case FusionMethod::Prod: return fuse_geometric(input);
    case FusionMethod::Owa:
      if (weights) return fuse_owa(input, *weights);
      if (input.models() != 3) {
        throw Error(ErrorCode::WeightLengthMismatch,
                    "default OWA weights cover 3 models; supply weights for " + std::to_string(input.models()));
      }
      return fuse_owa(input, OwaWeights::and_like_default());
  }
  return fuse_arithmetic(input);
}

OwaWeights parse_weights(std::string_view text) {
  std::vector<double> w;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find(',', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view tok = text.substr(start, end - start);
    while (!tok.empty() && tok.front() == ' ') tok.remove_prefix(1);
    while (!tok.empty() && tok.back() == ' ') tok.remove_suffix(1);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (tok.empty() || ec != std::errc() || ptr != tok.data() + tok.size()) {
      throw Error(ErrorCode::ParseError, "bad weight '" + std::string(tok) + "'");
    }
    w.push_back(v);
    start = end + 1;
  }
  return OwaWeights(std::move(w));
}

}  // namespace asc::ensemble
