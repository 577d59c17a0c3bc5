#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "asc/network.hpp"

namespace asc::nn {

struct AdamConfig {
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  double decay = 0.0;  // lr / (1 + decay * steps)
  bool amsgrad = true;
};

/// Adam with optional AMSGrad (running maximum of the second moment):
///   m = b1 m + (1-b1) g,  v = b2 v + (1-b2) g^2,  vmax = max(vmax, v)
///   p -= lr * sqrt(1 - b2^t) / (1 - b1^t) * m / (sqrt(vmax) + eps)
template <class Real>
class Adam {
 public:
  struct Slot {
    std::string name;
    std::vector<Real> m, v, vmax;
  };

  explicit Adam(AdamConfig config = {}) : config_(config) {}

  const AdamConfig& config() const noexcept { return config_; }
  std::uint64_t steps() const noexcept { return steps_; }

  /// Applies one update to every trainable view. Slots are created on the
  /// first call and matched by name afterwards. Errors: InvalidArgument when
  /// the parameter set changes between calls.
  void step(std::span<const ParamView<Real>> params, double learning_rate);

  const std::vector<Slot>& slots() const noexcept { return slots_; }
  void restore(std::uint64_t steps, std::vector<Slot> slots);

 private:
  AdamConfig config_;
  std::uint64_t steps_ = 0;
  std::vector<Slot> slots_;
};

}  // namespace asc::nn
