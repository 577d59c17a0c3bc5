#include "asc/optimizer.hpp"

#include <algorithm>
#include <cmath>

#include "asc/error.hpp"

namespace asc::nn {

template <class Real>
void Adam<Real>::step(std::span<const ParamView<Real>> params, double learning_rate) {
  if (slots_.empty()) {
    for (const auto& p : params) {
      if (!p.trainable) continue;
      const std::size_t n = p.values.size();
      slots_.push_back({p.name, std::vector<Real>(n), std::vector<Real>(n), std::vector<Real>(n)});
    }
  }
  std::size_t slot = 0;
  for (const auto& p : params) {
    if (!p.trainable) continue;
    if (slot >= slots_.size() || slots_[slot].name != p.name || slots_[slot].m.size() != p.values.size()) {
      throw Error(ErrorCode::InvalidArgument, "optimizer state does not match parameter '" + p.name + "'");
    }
    ++slot;
  }
  if (slot != slots_.size()) throw Error(ErrorCode::InvalidArgument, "optimizer state has extra slots");

  ++steps_;
  const double t = static_cast<double>(steps_);
  double lr = learning_rate;
  if (config_.decay > 0.0) lr /= 1.0 + config_.decay * (t - 1.0);
  const double b1 = config_.beta1, b2 = config_.beta2;
  const double lr_t = lr * std::sqrt(1.0 - std::pow(b2, t)) / (1.0 - std::pow(b1, t));

  slot = 0;
  for (const auto& p : params) {
    if (!p.trainable) continue;
    auto& s = slots_[slot++];
    for (std::size_t i = 0; i < p.values.size(); ++i) {
      const double g = p.grads[i];
      const double m = b1 * s.m[i] + (1.0 - b1) * g;
      const double v = b2 * s.v[i] + (1.0 - b2) * g * g;
      s.m[i] = static_cast<Real>(m);
      s.v[i] = static_cast<Real>(v);
      double denom_v = v;
      if (config_.amsgrad) {
        s.vmax[i] = std::max(s.vmax[i], static_cast<Real>(v));
        denom_v = s.vmax[i];
      }
      p.values[i] = static_cast<Real>(p.values[i] - lr_t * m / (std::sqrt(denom_v) + config_.epsilon));
    }
  }
}

template <class Real>
void Adam<Real>::restore(std::uint64_t steps, std::vector<Slot> slots) {
  steps_ = steps;
  slots_ = std::move(slots);
}

template class Adam<float>;
template class Adam<double>;

}  // namespace asc::nn
