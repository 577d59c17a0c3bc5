#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "asc/network.hpp"

namespace asc::nn {

template <class Real>
class Layer {
 public:
  explicit Layer(std::string name) : name_(std::move(name)) {}
  virtual ~Layer() = default;

  virtual LayerKind kind() const = 0;
  virtual std::unique_ptr<Layer> clone() const = 0;
  const std::string& name() const noexcept { return name_; }

  /// (C, H, W) produced from an input of shape `in`.
  virtual std::array<std::size_t, 3> output_shape(std::array<std::size_t, 3> in) const { return in; }

  virtual Tensor4<Real> infer(const Tensor4<Real>& x) const = 0;
  virtual Tensor4<Real> forward(const Tensor4<Real>& x, const PassOptions& options, Rng& rng) = 0;
  /// Accumulates into parameter gradients; returns dL/dx when `need_input_grad`.
  virtual Tensor4<Real> backward(const Tensor4<Real>& dy, bool need_input_grad) = 0;

  virtual std::vector<ParamView<Real>> params() { return {}; }
  virtual void init(Rng&) {}
  virtual void zero_grad() {}
  virtual void release_cache() {}

 private:
  std::string name_;
};

template <class Real>
class Conv3x3 final : public Layer<Real> {
 public:
  Conv3x3(std::string name, std::size_t in_channels, std::size_t out_channels);

  LayerKind kind() const override { return LayerKind::Conv3x3; }
  std::unique_ptr<Layer<Real>> clone() const override { return std::make_unique<Conv3x3>(*this); }
  std::array<std::size_t, 3> output_shape(std::array<std::size_t, 3> in) const override {
    return {out_, in[1], in[2]};
  }
  Tensor4<Real> infer(const Tensor4<Real>& x) const override;
  Tensor4<Real> forward(const Tensor4<Real>& x, const PassOptions&, Rng&) override;
  Tensor4<Real> backward(const Tensor4<Real>& dy, bool need_input_grad) override;
  std::vector<ParamView<Real>> params() override;
  void init(Rng& rng) override;
  void zero_grad() override;
  void release_cache() override { input_ = {}; }

 private:
  std::size_t in_, out_;
  std::vector<Real> kernel_, bias_;  // kernel: out x (in * 9)
  std::vector<Real> dkernel_, dbias_;
  Tensor4<Real> input_;
};

template <class Real>
class Dense final : public Layer<Real> {
 public:
  Dense(std::string name, std::size_t in_features, std::size_t out_features);

  LayerKind kind() const override { return LayerKind::Dense; }
  std::unique_ptr<Layer<Real>> clone() const override { return std::make_unique<Dense>(*this); }
  std::array<std::size_t, 3> output_shape(std::array<std::size_t, 3>) const override { return {out_, 1, 1}; }
  Tensor4<Real> infer(const Tensor4<Real>& x) const override;
  Tensor4<Real> forward(const Tensor4<Real>& x, const PassOptions&, Rng&) override;
  Tensor4<Real> backward(const Tensor4<Real>& dy, bool need_input_grad) override;
  std::vector<ParamView<Real>> params() override;
  void init(Rng& rng) override;
  void zero_grad() override;
  void release_cache() override { input_ = {}; }

 private:
  std::size_t in_, out_;
  std::vector<Real> weight_, bias_;  // weight: out x in
  std::vector<Real> dweight_, dbias_;
  Tensor4<Real> input_;
};

/// Per-channel normalization over N*H*W (N for dense features).
template <class Real>
class BatchNorm final : public Layer<Real> {
 public:
  BatchNorm(std::string name, std::size_t features, double momentum, double epsilon);

  LayerKind kind() const override { return LayerKind::BatchNorm; }
  std::unique_ptr<Layer<Real>> clone() const override { return std::make_unique<BatchNorm>(*this); }
  Tensor4<Real> infer(const Tensor4<Real>& x) const override;
  Tensor4<Real> forward(const Tensor4<Real>& x, const PassOptions& options, Rng&) override;
  Tensor4<Real> backward(const Tensor4<Real>& dy, bool need_input_grad) override;
  std::vector<ParamView<Real>> params() override;
  void zero_grad() override;
  void release_cache() override { xhat_ = {}; }

 private:
  std::size_t features_;
  double momentum_, epsilon_;
  std::vector<Real> gamma_, beta_, moving_mean_, moving_var_;
  std::vector<Real> dgamma_, dbeta_;
  Tensor4<Real> xhat_;
  std::vector<double> inv_std_;
  bool used_batch_stats_ = false;
};

template <class Real>
class Elu final : public Layer<Real> {
 public:
  Elu(std::string name, double alpha) : Layer<Real>(std::move(name)), alpha_(alpha) {}

  LayerKind kind() const override { return LayerKind::Elu; }
  std::unique_ptr<Layer<Real>> clone() const override { return std::make_unique<Elu>(*this); }
  Tensor4<Real> infer(const Tensor4<Real>& x) const override;
  Tensor4<Real> forward(const Tensor4<Real>& x, const PassOptions&, Rng&) override;
  Tensor4<Real> backward(const Tensor4<Real>& dy, bool need_input_grad) override;
  void release_cache() override { output_ = {}; }

 private:
  double alpha_;
  Tensor4<Real> output_;
};

/// Non-overlapping max pooling; trailing rows/columns that do not fill a window are dropped.
template <class Real>
class MaxPool final : public Layer<Real> {
 public:
  MaxPool(std::string name, PoolShape shape) : Layer<Real>(std::move(name)), shape_(shape) {}

  LayerKind kind() const override { return LayerKind::MaxPool; }
  std::unique_ptr<Layer<Real>> clone() const override { return std::make_unique<MaxPool>(*this); }
  std::array<std::size_t, 3> output_shape(std::array<std::size_t, 3> in) const override {
    return {in[0], in[1] / shape_.freq, in[2] / shape_.time};
  }
  Tensor4<Real> infer(const Tensor4<Real>& x) const override { return pool(x, nullptr); }
  Tensor4<Real> forward(const Tensor4<Real>& x, const PassOptions&, Rng&) override;
  Tensor4<Real> backward(const Tensor4<Real>& dy, bool need_input_grad) override;
  void release_cache() override { argmax_ = {}; }

 private:
  Tensor4<Real> pool(const Tensor4<Real>& x, std::vector<std::uint32_t>* argmax) const;

  PoolShape shape_;
  std::vector<std::uint32_t> argmax_;
  std::array<std::size_t, 4> input_shape_{};
};

/// Inverted dropout: kept units are scaled by 1/(1-rate) at train time.
template <class Real>
class Dropout final : public Layer<Real> {
 public:
  Dropout(std::string name, double rate) : Layer<Real>(std::move(name)), rate_(rate) {}

  LayerKind kind() const override { return LayerKind::Dropout; }
  std::unique_ptr<Layer<Real>> clone() const override { return std::make_unique<Dropout>(*this); }
  Tensor4<Real> infer(const Tensor4<Real>& x) const override { return x; }
  Tensor4<Real> forward(const Tensor4<Real>& x, const PassOptions& options, Rng& rng) override;
  Tensor4<Real> backward(const Tensor4<Real>& dy, bool need_input_grad) override;
  void release_cache() override { mask_ = {}; }

 private:
  double rate_;
  std::vector<Real> mask_;  // empty when the last pass did not drop
};

template <class Real>
class Flatten final : public Layer<Real> {
 public:
  explicit Flatten(std::string name) : Layer<Real>(std::move(name)) {}

  LayerKind kind() const override { return LayerKind::Flatten; }
  std::unique_ptr<Layer<Real>> clone() const override { return std::make_unique<Flatten>(*this); }
  std::array<std::size_t, 3> output_shape(std::array<std::size_t, 3> in) const override {
    return {in[0] * in[1] * in[2], 1, 1};
  }
  Tensor4<Real> infer(const Tensor4<Real>& x) const override;
  Tensor4<Real> forward(const Tensor4<Real>& x, const PassOptions&, Rng&) override;
  Tensor4<Real> backward(const Tensor4<Real>& dy, bool need_input_grad) override;

 private:
  std::array<std::size_t, 4> input_shape_{};
};

template <class Real>
class Softmax final : public Layer<Real> {
 public:
  explicit Softmax(std::string name) : Layer<Real>(std::move(name)) {}

  LayerKind kind() const override { return LayerKind::Softmax; }
  std::unique_ptr<Layer<Real>> clone() const override { return std::make_unique<Softmax>(*this); }
  Tensor4<Real> infer(const Tensor4<Real>& x) const override;
  Tensor4<Real> forward(const Tensor4<Real>& x, const PassOptions&, Rng&) override;
  /// Full Jacobian-vector product; the network bypasses this when training on cross-entropy.
  Tensor4<Real> backward(const Tensor4<Real>& dy, bool need_input_grad) override;
  void release_cache() override { output_ = {}; }

 private:
  Tensor4<Real> output_;
};

}  // namespace asc::nn
