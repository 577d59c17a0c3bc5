#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace asc::ensemble {

inline constexpr double kGeometricFloor = 1e-12;

/// M x K model-major matrix of per-model class likelihoods.
class EnsembleInput {
 public:
  /// Errors: InvalidArgument (no models, ragged rows, negative entries, or a
  /// row that does not sum to 1 within 1e-6).
  explicit EnsembleInput(const std::vector<std::vector<double>>& predictions);

  std::size_t models() const noexcept { return models_; }
  std::size_t classes() const noexcept { return classes_; }
  double at(std::size_t model, std::size_t cls) const { return values_[model * classes_ + cls]; }
  std::span<const double> model(std::size_t m) const { return {values_.data() + m * classes_, classes_}; }

 private:
  std::size_t models_ = 0, classes_ = 0;
  std::vector<double> values_;
};

/// Rank weights: w[i] multiplies the i-th largest value.
class OwaWeights {
 public:
  /// Errors: WeightsNotNormalized (negative entry or sum not 1 within 1e-9).
  explicit OwaWeights(std::vector<double> weights);

  /// [0.1, 0.15, 0.75]: most mass on the smallest of three values (and-like).
  static OwaWeights and_like_default();
  static OwaWeights uniform(std::size_t m);

  std::size_t size() const noexcept { return w_.size(); }
  std::span<const double> values() const noexcept { return w_; }

 private:
  std::vector<double> w_;
};

/// Per-class mean over models.
std::vector<double> fuse_arithmetic(const EnsembleInput& input);

/// Per-class M-th root of the product, each probability clamped to >= 1e-12.
/// Not renormalised.
std::vector<double> fuse_geometric(const EnsembleInput& input);

/// Per class: sort the M probabilities descending, then sum w_i * p_(i).
/// Errors: WeightLengthMismatch.
std::vector<double> fuse_owa(const EnsembleInput& input, const OwaWeights& weights);

/// argmax; ties go to the lowest index. Errors: NonFiniteScore, InvalidArgument (empty).
std::size_t decide(std::span<const double> scores);

enum class FusionMethod { Sum, Prod, Owa };

std::string_view to_string(FusionMethod method) noexcept;
/// Accepts "sum", "prod", "owa". Errors: InvalidArgument.
FusionMethod parse_method(std::string_view name);

/// Dispatches on `method`; OWA falls back to the and-like default weights when
/// none are given and M == 3. Errors: WeightLengthMismatch.
std::vector<double> fuse(const EnsembleInput& input, FusionMethod method,
                         const std::optional<OwaWeights>& weights = std::nullopt);

/// Parses "0.1,0.15,0.75". Errors: ParseError, WeightsNotNormalized.
OwaWeights parse_weights(std::string_view text);

}  // namespace asc::ensemble
