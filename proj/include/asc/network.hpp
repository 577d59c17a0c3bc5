#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "asc/random.hpp"

namespace asc::nn {

/// Max-pooling window as (frequency, time).
struct PoolShape {
  std::size_t freq = 2;
  std::size_t time = 2;
  bool operator==(const PoolShape&) const = default;
};

/// Vfy-3LX: three blocks of [conv3x3 + BN + ELU] x2 with X, 2X, 4X filters,
/// each followed by max pooling and dropout, then Dense(100)+BN+ELU, dropout,
/// Dense(n_classes)+BN+softmax.
struct NetworkConfig {
  std::size_t base_filters = 16;
  std::size_t in_channels = 1;
  std::size_t n_classes = 10;
  std::size_t input_height = 64;  // Mel bands
  std::size_t input_width = 500;  // frames
  std::array<PoolShape, 3> pools = {{{2, 10}, {2, 5}, {2, 5}}};
  std::array<double, 4> dropout_rates = {0.3, 0.3, 0.3, 0.4};
  double elu_alpha = 1.0;
  std::size_t dense_units = 100;
  double bn_momentum = 0.99;
  double bn_epsilon = 1e-3;

  /// Throws InvalidConfig.
  void validate() const;

  /// Spatial size after the third pooling stage.
  std::array<std::size_t, 2> final_spatial() const;
  std::size_t flatten_length() const;

  bool operator==(const NetworkConfig&) const = default;
};

/// N x C x H x W, row-major.
template <class Real>
struct Tensor4 {
  std::size_t n = 0, c = 0, h = 0, w = 0;
  std::vector<Real> data;

  Tensor4() = default;
  Tensor4(std::size_t n_, std::size_t c_, std::size_t h_, std::size_t w_, Real fill = Real(0))
      : n(n_), c(c_), h(h_), w(w_), data(n_ * c_ * h_ * w_, fill) {}

  std::size_t sample_size() const noexcept { return c * h * w; }
  std::span<Real> sample(std::size_t i) { return {data.data() + i * sample_size(), sample_size()}; }
  std::span<const Real> sample(std::size_t i) const { return {data.data() + i * sample_size(), sample_size()}; }
  Real& at(std::size_t in, std::size_t ic, std::size_t ih, std::size_t iw) {
    return data[((in * c + ic) * h + ih) * w + iw];
  }
  Real at(std::size_t in, std::size_t ic, std::size_t ih, std::size_t iw) const {
    return data[((in * c + ic) * h + ih) * w + iw];
  }
};

enum class LayerKind { Conv3x3, BatchNorm, Elu, MaxPool, Dropout, Flatten, Dense, Softmax };

std::string_view to_string(LayerKind kind) noexcept;

/// How a training-path forward pass treats the stochastic/stateful layers.
struct PassOptions {
  bool dropout = false;
  bool batch_statistics = false;
  bool update_moving_statistics = false;

  static constexpr PassOptions train() { return {true, true, true}; }
  /// Deterministic pass through the moving statistics, still recording what backward needs.
  static constexpr PassOptions frozen() { return {false, false, false}; }
};

template <class T>
struct ParamView {
  std::string name;  // "<layer>.<param>"
  std::vector<std::uint32_t> dims;
  std::span<T> values;
  std::span<T> grads;  // empty for non-trainable running statistics
  bool trainable = false;
};

struct LayerInfo {
  std::string name;
  LayerKind kind;
  std::array<std::size_t, 3> output_shape;  // C, H, W
  std::size_t params;
};

template <class Real>
class Layer;

template <class Real>
class BasicNetwork {
 public:
  /// Glorot-uniform kernels, zero biases, BN gamma=1 beta=0, moving mean 0 / var 1.
  explicit BasicNetwork(const NetworkConfig& config, std::uint64_t init_seed = 0);
  ~BasicNetwork();
  BasicNetwork(BasicNetwork&&) noexcept;
  BasicNetwork& operator=(BasicNetwork&&) noexcept;
  BasicNetwork(const BasicNetwork& other);
  BasicNetwork& operator=(const BasicNetwork& other);

  const NetworkConfig& config() const noexcept { return config_; }

  /// All parameters including BatchNorm moving statistics.
  std::size_t param_count() const;
  std::size_t trainable_param_count() const;
  std::vector<LayerInfo> summary() const;

  /// Inference: dropout off, BN on moving statistics. Thread-safe on a shared network.
  /// Errors: ShapeMismatch.
  Tensor4<Real> predict(const Tensor4<Real>& batch) const;

  /// Training-path forward; records activations for backward().
  Tensor4<Real> forward(const Tensor4<Real>& batch, const PassOptions& options, Rng& dropout_rng);

  /// Backpropagates dL/dlogits (the input of the final softmax) and
  /// accumulates parameter gradients.
  void backward_from_logits(const Tensor4<Real>& dlogits);

  void zero_grad();

  std::vector<ParamView<Real>> parameters();
  std::vector<ParamView<const Real>> parameters() const;

  /// Trainable subset, in a fixed order.
  std::vector<ParamView<Real>> trainable_parameters();

 private:
  void check_input(const Tensor4<Real>& batch) const;

  NetworkConfig config_;
  std::vector<std::unique_ptr<Layer<Real>>> layers_;
};

using Network = BasicNetwork<float>;
using NetworkF64 = BasicNetwork<double>;

/// Parameter count of the network `config` describes, without allocating it.
std::size_t param_count(const NetworkConfig& config);

/// Mean categorical cross-entropy of softmax outputs.
template <class Real>
double cross_entropy(const Tensor4<Real>& probs, std::span<const std::size_t> labels);

/// Zeroes gradients, runs forward + backward and returns the loss.
/// Errors: ShapeMismatch, IndexOutOfRange.
template <class Real>
double compute_gradients(BasicNetwork<Real>& net, const Tensor4<Real>& batch, std::span<const std::size_t> labels,
                         const PassOptions& options, Rng& dropout_rng);

}  // namespace asc::nn
