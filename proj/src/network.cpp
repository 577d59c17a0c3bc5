#include "asc/network.hpp"

#include <cmath>

#include "asc/error.hpp"
#include "layers.hpp"

namespace asc::nn {

std::string_view to_string(LayerKind kind) noexcept {
  switch (kind) {
    case LayerKind::Conv3x3: return "Conv3x3";
    case LayerKind::BatchNorm: return "BatchNorm";
    case LayerKind::Elu: return "ELU";
    case LayerKind::MaxPool: return "MaxPool";
    case LayerKind::Dropout: return "Dropout";
    case LayerKind::Flatten: return "Flatten";
    case LayerKind::Dense: return "Dense";
    case LayerKind::Softmax: return "Softmax";
  }
  return "?";
}

void NetworkConfig::validate() const {
  auto fail = [](const std::string& m) { throw Error(ErrorCode::InvalidConfig, m); };
  if (base_filters == 0) fail("base_filters must be positive");
  if (in_channels < 1 || in_channels > 4) fail("in_channels must be 1..4, got " + std::to_string(in_channels));
  if (n_classes < 2) fail("n_classes must be at least 2");
  if (input_height == 0 || input_width == 0) fail("input shape must be non-empty");
  if (dense_units == 0) fail("dense_units must be positive");
  std::size_t h = input_height, w = input_width;
  for (const auto& p : pools) {
    if (p.freq == 0 || p.time == 0) fail("pool shapes must be positive");
    h /= p.freq;
    w /= p.time;
    if (h == 0 || w == 0) fail("input " + std::to_string(input_height) + "x" + std::to_string(input_width) +
                               " is too small for the pooling stages");
  }
  for (double r : dropout_rates) {
    if (!(r >= 0.0 && r < 1.0)) fail("dropout rates must be in [0, 1)");
  }
  if (!(elu_alpha > 0.0)) fail("elu_alpha must be positive");
  if (!(bn_momentum >= 0.0 && bn_momentum < 1.0)) fail("bn_momentum must be in [0, 1)");
  if (!(bn_epsilon > 0.0)) fail("bn_epsilon must be positive");
}

std::array<std::size_t, 2> NetworkConfig::final_spatial() const {
  std::size_t h = input_height, w = input_width;
  for (const auto& p : pools) {
    h /= p.freq;
    w /= p.time;
  }
  return {h, w};
}

std::size_t NetworkConfig::flatten_length() const {
  const auto [h, w] = final_spatial();
  return h * w * 4 * base_filters;
}

std::size_t param_count(const NetworkConfig& config) {
  config.validate();
  const std::size_t x = config.base_filters;
  const std::size_t widths[3] = {x, 2 * x, 4 * x};
  std::size_t total = 0;
  std::size_t in = config.in_channels;
  for (std::size_t w : widths) {
    for (int j = 0; j < 2; ++j) {
      total += in * 9 * w + w;  // kernel + bias
      total += 4 * w;           // gamma, beta, moving mean, moving variance
      in = w;
    }
  }
  total += config.flatten_length() * config.dense_units + config.dense_units + 4 * config.dense_units;
  total += config.dense_units * config.n_classes + config.n_classes + 4 * config.n_classes;
  return total;
}

template <class Real>
BasicNetwork<Real>::BasicNetwork(const NetworkConfig& config, std::uint64_t init_seed) : config_(config) {
  config_.validate();
  const std::size_t x = config_.base_filters;
  const std::size_t widths[3] = {x, 2 * x, 4 * x};
  std::size_t in = config_.in_channels;
  for (int b = 0; b < 3; ++b) {
    for (int j = 1; j <= 2; ++j) {
      const std::string id = std::to_string(b + 1) + "_" + std::to_string(j);
      layers_.push_back(std::make_unique<Conv3x3<Real>>("conv" + id, in, widths[b]));
      layers_.push_back(std::make_unique<BatchNorm<Real>>("bn" + id, widths[b], config_.bn_momentum, config_.bn_epsilon));
      layers_.push_back(std::make_unique<Elu<Real>>("elu" + id, config_.elu_alpha));
      in = widths[b];
    }
    layers_.push_back(std::make_unique<MaxPool<Real>>("pool" + std::to_string(b + 1), config_.pools[b]));
    layers_.push_back(std::make_unique<Dropout<Real>>("dropout" + std::to_string(b + 1), config_.dropout_rates[b]));
  }
  layers_.push_back(std::make_unique<Flatten<Real>>("flatten"));
  layers_.push_back(std::make_unique<Dense<Real>>("dense1", config_.flatten_length(), config_.dense_units));
  layers_.push_back(std::make_unique<BatchNorm<Real>>("bn_dense1", config_.dense_units, config_.bn_momentum, config_.bn_epsilon));
  layers_.push_back(std::make_unique<Elu<Real>>("elu_dense1", config_.elu_alpha));
  layers_.push_back(std::make_unique<Dropout<Real>>("dropout4", config_.dropout_rates[3]));
  layers_.push_back(std::make_unique<Dense<Real>>("dense2", config_.dense_units, config_.n_classes));
  layers_.push_back(std::make_unique<BatchNorm<Real>>("bn_dense2", config_.n_classes, config_.bn_momentum, config_.bn_epsilon));
  layers_.push_back(std::make_unique<Softmax<Real>>("softmax"));

  Rng rng(init_seed, "init");
  for (auto& l : layers_) l->init(rng);
}

template <class Real>
BasicNetwork<Real>::~BasicNetwork() = default;
template <class Real>
BasicNetwork<Real>::BasicNetwork(BasicNetwork&&) noexcept = default;
template <class Real>
BasicNetwork<Real>& BasicNetwork<Real>::operator=(BasicNetwork&&) noexcept = default;

template <class Real>
BasicNetwork<Real>::BasicNetwork(const BasicNetwork& other) : config_(other.config_) {
  layers_.reserve(other.layers_.size());
  for (const auto& l : other.layers_) layers_.push_back(l->clone());
}

template <class Real>
BasicNetwork<Real>& BasicNetwork<Real>::operator=(const BasicNetwork& other) {
  if (this != &other) *this = BasicNetwork(other);
  return *this;
}

template <class Real>
std::size_t BasicNetwork<Real>::param_count() const {
  std::size_t n = 0;
  for (const auto& p : parameters()) n += p.values.size();
  return n;
}

template <class Real>
std::size_t BasicNetwork<Real>::trainable_param_count() const {
  std::size_t n = 0;
  for (const auto& p : parameters()) {
    if (p.trainable) n += p.values.size();
  }
  return n;
}

template <class Real>
std::vector<LayerInfo> BasicNetwork<Real>::summary() const {
  std::vector<LayerInfo> out;
  std::array<std::size_t, 3> shape = {config_.in_channels, config_.input_height, config_.input_width};
  for (const auto& l : layers_) {
    shape = l->output_shape(shape);
    std::size_t n = 0;
    for (const auto& p : l->params()) n += p.values.size();
    out.push_back({l->name(), l->kind(), shape, n});
  }
  return out;
}

template <class Real>
void BasicNetwork<Real>::check_input(const Tensor4<Real>& batch) const {
  if (batch.n == 0 || batch.c != config_.in_channels || batch.h != config_.input_height ||
      batch.w != config_.input_width) {
    throw Error(ErrorCode::ShapeMismatch,
                "input " + std::to_string(batch.n) + "x" + std::to_string(batch.c) + "x" + std::to_string(batch.h) +
                    "x" + std::to_string(batch.w) + ", network expects Nx" + std::to_string(config_.in_channels) +
                    "x" + std::to_string(config_.input_height) + "x" + std::to_string(config_.input_width));
  }
}

template <class Real>
Tensor4<Real> BasicNetwork<Real>::predict(const Tensor4<Real>& batch) const {
  check_input(batch);
  Tensor4<Real> x = layers_.front()->infer(batch);
  for (std::size_t i = 1; i < layers_.size(); ++i) x = layers_[i]->infer(x);
  return x;
}

template <class Real>
Tensor4<Real> BasicNetwork<Real>::forward(const Tensor4<Real>& batch, const PassOptions& options, Rng& dropout_rng) {
  check_input(batch);
  Tensor4<Real> x = layers_.front()->forward(batch, options, dropout_rng);
  for (std::size_t i = 1; i < layers_.size(); ++i) x = layers_[i]->forward(x, options, dropout_rng);
  return x;
}

template <class Real>
void BasicNetwork<Real>::backward_from_logits(const Tensor4<Real>& dlogits) {
  // the final layer is the softmax; its gradient is folded into dlogits
  Tensor4<Real> g = dlogits;
  for (std::size_t i = layers_.size() - 1; i-- > 0;) {
    g = layers_[i]->backward(g, i > 0);
  }
}

template <class Real>
void BasicNetwork<Real>::zero_grad() {
  for (auto& l : layers_) l->zero_grad();
}

template <class Real>
std::vector<ParamView<Real>> BasicNetwork<Real>::parameters() {
  std::vector<ParamView<Real>> out;
  for (auto& l : layers_) {
    for (auto& p : l->params()) out.push_back(std::move(p));
  }
  return out;
}

template <class Real>
std::vector<ParamView<const Real>> BasicNetwork<Real>::parameters() const {
  std::vector<ParamView<const Real>> out;
  for (const auto& l : layers_) {
    // params() only hands out views; nothing is modified here
    for (auto& p : const_cast<Layer<Real>&>(*l).params()) {
      out.push_back({std::move(p.name), std::move(p.dims), p.values, p.grads, p.trainable});
    }
  }
  return out;
}

template <class Real>
std::vector<ParamView<Real>> BasicNetwork<Real>::trainable_parameters() {
  std::vector<ParamView<Real>> out;
  for (auto& p : parameters()) {
    if (p.trainable) out.push_back(std::move(p));
  }
  return out;
}

template <class Real>
double cross_entropy(const Tensor4<Real>& probs, std::span<const std::size_t> labels) {
  if (labels.size() != probs.n) throw Error(ErrorCode::ShapeMismatch, "label count differs from batch size");
  double loss = 0.0;
  for (std::size_t s = 0; s < probs.n; ++s) {
    if (labels[s] >= probs.sample_size()) throw Error(ErrorCode::IndexOutOfRange, "label " + std::to_string(labels[s]));
    loss -= std::log(std::max(static_cast<double>(probs.sample(s)[labels[s]]), 1e-12));
  }
  return loss / static_cast<double>(probs.n);
}

template <class Real>
double compute_gradients(BasicNetwork<Real>& net, const Tensor4<Real>& batch, std::span<const std::size_t> labels,
                         const PassOptions& options, Rng& dropout_rng) {
  net.zero_grad();
  const Tensor4<Real> probs = net.forward(batch, options, dropout_rng);
  const double loss = cross_entropy(probs, labels);
  // softmax + cross-entropy: dL/dlogits = (p - onehot) / N
  Tensor4<Real> g = probs;
  const Real inv_n = static_cast<Real>(1.0 / static_cast<double>(probs.n));
  for (std::size_t s = 0; s < probs.n; ++s) {
    auto row = g.sample(s);
    row[labels[s]] -= Real(1);
    for (auto& v : row) v *= inv_n;
  }
  net.backward_from_logits(g);
  return loss;
}

template class BasicNetwork<float>;
template class BasicNetwork<double>;
template double cross_entropy(const Tensor4<float>&, std::span<const std::size_t>);
template double cross_entropy(const Tensor4<double>&, std::span<const std::size_t>);
template double compute_gradients(BasicNetwork<float>&, const Tensor4<float>&, std::span<const std::size_t>,
                                  const PassOptions&, Rng&);
template double compute_gradients(BasicNetwork<double>&, const Tensor4<double>&, std::span<const std::size_t>,
                                  const PassOptions&, Rng&);

}  // namespace asc::nn
