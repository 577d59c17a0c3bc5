#include "layers.hpp"

#include <Eigen/Core>
#include <algorithm>
#include <cmath>
#include <limits>

#include "asc/error.hpp"

namespace asc::nn {

namespace {

template <class Real>
using RowMat = Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
template <class Real>
using MapMat = Eigen::Map<RowMat<Real>>;
template <class Real>
using ConstMapMat = Eigen::Map<const RowMat<Real>>;
template <class Real>
using ConstMapVec = Eigen::Map<const Eigen::Matrix<Real, Eigen::Dynamic, 1>>;

template <class Real>
void glorot_uniform(std::vector<Real>& w, double fan_in, double fan_out, Rng& rng) {
  const double limit = std::sqrt(6.0 / (fan_in + fan_out));
  for (auto& v : w) v = static_cast<Real>(rng.uniform(-limit, limit));
}

// cols: (C*9) x (H*W); zero "same" padding.
template <class Real>
void im2col(const Real* in, std::size_t c, std::size_t h, std::size_t w, Real* cols) {
  const std::size_t hw = h * w;
  for (std::size_t ci = 0; ci < c; ++ci) {
    const Real* plane = in + ci * hw;
    for (int ky = 0; ky < 3; ++ky) {
      for (int kx = 0; kx < 3; ++kx) {
        Real* row = cols + (ci * 9 + static_cast<std::size_t>(ky * 3 + kx)) * hw;
        const int dy = ky - 1, dx = kx - 1;
        const std::size_t x0 = dx < 0 ? 1 : 0;
        const std::size_t x1 = dx > 0 ? w - 1 : w;
        for (std::size_t y = 0; y < h; ++y) {
          Real* dst = row + y * w;
          const auto sy = static_cast<std::ptrdiff_t>(y) + dy;
          if (sy < 0 || sy >= static_cast<std::ptrdiff_t>(h)) {
            std::fill(dst, dst + w, Real(0));
            continue;
          }
          const Real* src = plane + static_cast<std::size_t>(sy) * w;
          if (x0 > 0) dst[0] = Real(0);
          if (x1 < w) dst[w - 1] = Real(0);
          if (x1 > x0) {
            std::copy(src + static_cast<std::ptrdiff_t>(x0) + dx, src + static_cast<std::ptrdiff_t>(x1) + dx, dst + x0);
          }
        }
      }
    }
  }
}

template <class Real>
void col2im(const Real* cols, std::size_t c, std::size_t h, std::size_t w, Real* out) {
  const std::size_t hw = h * w;
  std::fill(out, out + c * hw, Real(0));
  for (std::size_t ci = 0; ci < c; ++ci) {
    Real* plane = out + ci * hw;
    for (int ky = 0; ky < 3; ++ky) {
      for (int kx = 0; kx < 3; ++kx) {
        const Real* row = cols + (ci * 9 + static_cast<std::size_t>(ky * 3 + kx)) * hw;
        const int dy = ky - 1, dx = kx - 1;
        const std::size_t x0 = dx < 0 ? 1 : 0;
        const std::size_t x1 = dx > 0 ? w - 1 : w;
        for (std::size_t y = 0; y < h; ++y) {
          const auto sy = static_cast<std::ptrdiff_t>(y) + dy;
          if (sy < 0 || sy >= static_cast<std::ptrdiff_t>(h)) continue;
          Real* dst = plane + static_cast<std::size_t>(sy) * w;
          const Real* src = row + y * w;
          for (std::size_t x = x0; x < x1; ++x) dst[static_cast<std::ptrdiff_t>(x) + dx] += src[x];
        }
      }
    }
  }
}

template <class T>
ParamView<T> view(std::string name, std::vector<std::uint32_t> dims, std::vector<T>& values, std::vector<T>* grads) {
  ParamView<T> v;
  v.name = std::move(name);
  v.dims = std::move(dims);
  v.values = values;
  if (grads) v.grads = *grads;
  v.trainable = grads != nullptr;
  return v;
}

}  // namespace

// ---------------------------------------------------------------- Conv3x3

template <class Real>
Conv3x3<Real>::Conv3x3(std::string name, std::size_t in_channels, std::size_t out_channels)
    : Layer<Real>(std::move(name)),
      in_(in_channels),
      out_(out_channels),
      kernel_(out_channels * in_channels * 9),
      bias_(out_channels),
      dkernel_(kernel_.size()),
      dbias_(out_channels) {}

template <class Real>
void Conv3x3<Real>::init(Rng& rng) {
  glorot_uniform(kernel_, static_cast<double>(in_ * 9), static_cast<double>(out_ * 9), rng);
  std::fill(bias_.begin(), bias_.end(), Real(0));
}

template <class Real>
void Conv3x3<Real>::zero_grad() {
  std::fill(dkernel_.begin(), dkernel_.end(), Real(0));
  std::fill(dbias_.begin(), dbias_.end(), Real(0));
}

template <class Real>
std::vector<ParamView<Real>> Conv3x3<Real>::params() {
  return {view(this->name() + ".kernel",
               {static_cast<std::uint32_t>(out_), static_cast<std::uint32_t>(in_), 3u, 3u}, kernel_, &dkernel_),
          view(this->name() + ".bias", {static_cast<std::uint32_t>(out_)}, bias_, &dbias_)};
}

template <class Real>
Tensor4<Real> Conv3x3<Real>::infer(const Tensor4<Real>& x) const {
  if (x.c != in_) throw Error(ErrorCode::ShapeMismatch, this->name() + ": channel count");
  const std::size_t hw = x.h * x.w;
  const std::size_t k = in_ * 9;
  Tensor4<Real> y(x.n, out_, x.h, x.w);
  std::vector<Real> cols(k * hw);
  ConstMapMat<Real> wk(kernel_.data(), static_cast<Eigen::Index>(out_), static_cast<Eigen::Index>(k));
  ConstMapVec<Real> b(bias_.data(), static_cast<Eigen::Index>(out_));
  for (std::size_t s = 0; s < x.n; ++s) {
    im2col(x.sample(s).data(), in_, x.h, x.w, cols.data());
    ConstMapMat<Real> cm(cols.data(), static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(hw));
    MapMat<Real> ym(y.sample(s).data(), static_cast<Eigen::Index>(out_), static_cast<Eigen::Index>(hw));
    ym.noalias() = wk * cm;
    ym.colwise() += b;
  }
  return y;
}

template <class Real>
Tensor4<Real> Conv3x3<Real>::forward(const Tensor4<Real>& x, const PassOptions&, Rng&) {
  input_ = x;
  return infer(x);
}

template <class Real>
Tensor4<Real> Conv3x3<Real>::backward(const Tensor4<Real>& dy, bool need_input_grad) {
  const auto& x = input_;
  const std::size_t hw = x.h * x.w;
  const std::size_t k = in_ * 9;
  std::vector<Real> cols(k * hw);
  std::vector<Real> dcols(need_input_grad ? k * hw : 0);
  Tensor4<Real> dx;
  if (need_input_grad) dx = Tensor4<Real>(x.n, x.c, x.h, x.w);

  ConstMapMat<Real> wk(kernel_.data(), static_cast<Eigen::Index>(out_), static_cast<Eigen::Index>(k));
  MapMat<Real> dwk(dkernel_.data(), static_cast<Eigen::Index>(out_), static_cast<Eigen::Index>(k));
  for (std::size_t s = 0; s < x.n; ++s) {
    im2col(x.sample(s).data(), in_, x.h, x.w, cols.data());
    ConstMapMat<Real> cm(cols.data(), static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(hw));
    ConstMapMat<Real> g(dy.sample(s).data(), static_cast<Eigen::Index>(out_), static_cast<Eigen::Index>(hw));
    dwk.noalias() += g * cm.transpose();
    // Plain loops: Eigen's vectorised redux peels by pointer alignment, which
    // would make the summation order depend on where the buffer landed.
    const Real* gp = dy.sample(s).data();
    for (std::size_t o = 0; o < out_; ++o) {
      Real acc = 0;
      for (std::size_t i = 0; i < hw; ++i) acc += gp[o * hw + i];
      dbias_[o] += acc;
    }
    if (need_input_grad) {
      MapMat<Real> dc(dcols.data(), static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(hw));
      dc.noalias() = wk.transpose() * g;
      col2im(dcols.data(), in_, x.h, x.w, dx.sample(s).data());
    }
  }
  return dx;
}

// ---------------------------------------------------------------- Dense

template <class Real>
Dense<Real>::Dense(std::string name, std::size_t in_features, std::size_t out_features)
    : Layer<Real>(std::move(name)),
      in_(in_features),
      out_(out_features),
      weight_(in_features * out_features),
      bias_(out_features),
      dweight_(weight_.size()),
      dbias_(out_features) {}

template <class Real>
void Dense<Real>::init(Rng& rng) {
  glorot_uniform(weight_, static_cast<double>(in_), static_cast<double>(out_), rng);
  std::fill(bias_.begin(), bias_.end(), Real(0));
}

template <class Real>
void Dense<Real>::zero_grad() {
  std::fill(dweight_.begin(), dweight_.end(), Real(0));
  std::fill(dbias_.begin(), dbias_.end(), Real(0));
}

template <class Real>
std::vector<ParamView<Real>> Dense<Real>::params() {
  return {view(this->name() + ".weight", {static_cast<std::uint32_t>(out_), static_cast<std::uint32_t>(in_)},
               weight_, &dweight_),
          view(this->name() + ".bias", {static_cast<std::uint32_t>(out_)}, bias_, &dbias_)};
}

template <class Real>
Tensor4<Real> Dense<Real>::infer(const Tensor4<Real>& x) const {
  if (x.sample_size() != in_) throw Error(ErrorCode::ShapeMismatch, this->name() + ": feature count");
  Tensor4<Real> y(x.n, out_, 1, 1);
  ConstMapMat<Real> xm(x.data.data(), static_cast<Eigen::Index>(x.n), static_cast<Eigen::Index>(in_));
  ConstMapMat<Real> wm(weight_.data(), static_cast<Eigen::Index>(out_), static_cast<Eigen::Index>(in_));
  MapMat<Real> ym(y.data.data(), static_cast<Eigen::Index>(x.n), static_cast<Eigen::Index>(out_));
  ym.noalias() = xm * wm.transpose();
  ym.rowwise() += ConstMapVec<Real>(bias_.data(), static_cast<Eigen::Index>(out_)).transpose();
  return y;
}

template <class Real>
Tensor4<Real> Dense<Real>::forward(const Tensor4<Real>& x, const PassOptions&, Rng&) {
  input_ = x;
  return infer(x);
}

template <class Real>
Tensor4<Real> Dense<Real>::backward(const Tensor4<Real>& dy, bool need_input_grad) {
  const auto n = static_cast<Eigen::Index>(input_.n);
  ConstMapMat<Real> xm(input_.data.data(), n, static_cast<Eigen::Index>(in_));
  ConstMapMat<Real> g(dy.data.data(), n, static_cast<Eigen::Index>(out_));
  MapMat<Real> dw(dweight_.data(), static_cast<Eigen::Index>(out_), static_cast<Eigen::Index>(in_));
  dw.noalias() += g.transpose() * xm;
  for (std::size_t o = 0; o < out_; ++o) {
    Real acc = 0;
    for (std::size_t i = 0; i < input_.n; ++i) acc += dy.data[i * out_ + o];
    dbias_[o] += acc;
  }
  Tensor4<Real> dx;
  if (need_input_grad) {
    dx = Tensor4<Real>(input_.n, input_.c, input_.h, input_.w);
    ConstMapMat<Real> wm(weight_.data(), static_cast<Eigen::Index>(out_), static_cast<Eigen::Index>(in_));
    MapMat<Real> dxm(dx.data.data(), n, static_cast<Eigen::Index>(in_));
    dxm.noalias() = g * wm;
  }
  return dx;
}

// ---------------------------------------------------------------- BatchNorm

template <class Real>
BatchNorm<Real>::BatchNorm(std::string name, std::size_t features, double momentum, double epsilon)
    : Layer<Real>(std::move(name)),
      features_(features),
      momentum_(momentum),
      epsilon_(epsilon),
      gamma_(features, Real(1)),
      beta_(features, Real(0)),
      moving_mean_(features, Real(0)),
      moving_var_(features, Real(1)),
      dgamma_(features),
      dbeta_(features) {}

template <class Real>
void BatchNorm<Real>::zero_grad() {
  std::fill(dgamma_.begin(), dgamma_.end(), Real(0));
  std::fill(dbeta_.begin(), dbeta_.end(), Real(0));
}

template <class Real>
std::vector<ParamView<Real>> BatchNorm<Real>::params() {
  const std::vector<std::uint32_t> d = {static_cast<std::uint32_t>(features_)};
  return {view(this->name() + ".gamma", d, gamma_, &dgamma_), view(this->name() + ".beta", d, beta_, &dbeta_),
          view<Real>(this->name() + ".moving_mean", d, moving_mean_, nullptr),
          view<Real>(this->name() + ".moving_variance", d, moving_var_, nullptr)};
}

template <class Real>
Tensor4<Real> BatchNorm<Real>::infer(const Tensor4<Real>& x) const {
  if (x.c != features_) throw Error(ErrorCode::ShapeMismatch, this->name() + ": feature count");
  Tensor4<Real> y(x.n, x.c, x.h, x.w);
  const std::size_t hw = x.h * x.w;
  for (std::size_t c = 0; c < features_; ++c) {
    // same arithmetic as the training-path forward, so both agree bit-for-bit
    const double mean = moving_mean_[c];
    const double inv = 1.0 / std::sqrt(static_cast<double>(moving_var_[c]) + epsilon_);
    const Real g = gamma_[c], b = beta_[c];
    for (std::size_t s = 0; s < x.n; ++s) {
      const Real* src = x.data.data() + (s * features_ + c) * hw;
      Real* dst = y.data.data() + (s * features_ + c) * hw;
      for (std::size_t i = 0; i < hw; ++i) dst[i] = g * static_cast<Real>((src[i] - mean) * inv) + b;
    }
  }
  return y;
}

template <class Real>
Tensor4<Real> BatchNorm<Real>::forward(const Tensor4<Real>& x, const PassOptions& options, Rng&) {
  if (x.c != features_) throw Error(ErrorCode::ShapeMismatch, this->name() + ": feature count");
  const std::size_t hw = x.h * x.w;
  const double count = static_cast<double>(x.n * hw);
  xhat_ = Tensor4<Real>(x.n, x.c, x.h, x.w);
  inv_std_.assign(features_, 0.0);
  used_batch_stats_ = options.batch_statistics;
  Tensor4<Real> y(x.n, x.c, x.h, x.w);
  for (std::size_t c = 0; c < features_; ++c) {
    double mean, var;
    if (options.batch_statistics) {
      double sum = 0.0;
      for (std::size_t s = 0; s < x.n; ++s) {
        const Real* src = x.data.data() + (s * features_ + c) * hw;
        for (std::size_t i = 0; i < hw; ++i) sum += src[i];
      }
      mean = sum / count;
      double sq = 0.0;
      for (std::size_t s = 0; s < x.n; ++s) {
        const Real* src = x.data.data() + (s * features_ + c) * hw;
        for (std::size_t i = 0; i < hw; ++i) {
          const double d = src[i] - mean;
          sq += d * d;
        }
      }
      var = sq / count;
      if (options.update_moving_statistics) {
        moving_mean_[c] = static_cast<Real>(momentum_ * moving_mean_[c] + (1.0 - momentum_) * mean);
        moving_var_[c] = static_cast<Real>(momentum_ * moving_var_[c] + (1.0 - momentum_) * var);
      }
    } else {
      mean = moving_mean_[c];
      var = moving_var_[c];
    }
    const double inv = 1.0 / std::sqrt(var + epsilon_);
    inv_std_[c] = inv;
    const Real g = gamma_[c], b = beta_[c];
    for (std::size_t s = 0; s < x.n; ++s) {
      const std::size_t off = (s * features_ + c) * hw;
      for (std::size_t i = 0; i < hw; ++i) {
        const Real xh = static_cast<Real>((x.data[off + i] - mean) * inv);
        xhat_.data[off + i] = xh;
        y.data[off + i] = g * xh + b;
      }
    }
  }
  return y;
}

template <class Real>
Tensor4<Real> BatchNorm<Real>::backward(const Tensor4<Real>& dy, bool need_input_grad) {
  const std::size_t hw = dy.h * dy.w;
  const double count = static_cast<double>(dy.n * hw);
  Tensor4<Real> dx;
  if (need_input_grad) dx = Tensor4<Real>(dy.n, dy.c, dy.h, dy.w);
  for (std::size_t c = 0; c < features_; ++c) {
    double sum_dy = 0.0, sum_dy_xhat = 0.0;
    for (std::size_t s = 0; s < dy.n; ++s) {
      const std::size_t off = (s * features_ + c) * hw;
      for (std::size_t i = 0; i < hw; ++i) {
        sum_dy += dy.data[off + i];
        sum_dy_xhat += static_cast<double>(dy.data[off + i]) * xhat_.data[off + i];
      }
    }
    dgamma_[c] += static_cast<Real>(sum_dy_xhat);
    dbeta_[c] += static_cast<Real>(sum_dy);
    if (!need_input_grad) continue;
    const double g = gamma_[c];
    const double inv = inv_std_[c];
    for (std::size_t s = 0; s < dy.n; ++s) {
      const std::size_t off = (s * features_ + c) * hw;
      for (std::size_t i = 0; i < hw; ++i) {
        if (used_batch_stats_) {
          // d/dx of gamma * (x - mean_B) / sqrt(var_B + eps) + beta
          dx.data[off + i] = static_cast<Real>(
              g * inv * (dy.data[off + i] - sum_dy / count - xhat_.data[off + i] * sum_dy_xhat / count));
        } else {
          dx.data[off + i] = static_cast<Real>(g * inv * dy.data[off + i]);
        }
      }
    }
  }
  return dx;
}

// ---------------------------------------------------------------- ELU

template <class Real>
Tensor4<Real> Elu<Real>::infer(const Tensor4<Real>& x) const {
  Tensor4<Real> y = x;
  const Real a = static_cast<Real>(alpha_);
  for (auto& v : y.data) {
    if (!(v > Real(0))) v = a * std::expm1(v);
  }
  return y;
}

template <class Real>
Tensor4<Real> Elu<Real>::forward(const Tensor4<Real>& x, const PassOptions&, Rng&) {
  output_ = infer(x);
  return output_;
}

template <class Real>
Tensor4<Real> Elu<Real>::backward(const Tensor4<Real>& dy, bool need_input_grad) {
  if (!need_input_grad) return {};
  Tensor4<Real> dx = dy;
  const Real a = static_cast<Real>(alpha_);
  for (std::size_t i = 0; i < dx.data.size(); ++i) {
    const Real y = output_.data[i];
    if (!(y > Real(0))) dx.data[i] *= y + a;
  }
  return dx;
}

// ---------------------------------------------------------------- MaxPool

template <class Real>
Tensor4<Real> MaxPool<Real>::pool(const Tensor4<Real>& x, std::vector<std::uint32_t>* argmax) const {
  const std::size_t oh = x.h / shape_.freq, ow = x.w / shape_.time;
  if (oh == 0 || ow == 0) throw Error(ErrorCode::ShapeMismatch, this->name() + ": input smaller than pool window");
  Tensor4<Real> y(x.n, x.c, oh, ow);
  if (argmax) argmax->assign(y.data.size(), 0);
  std::size_t o = 0;
  for (std::size_t p = 0; p < x.n * x.c; ++p) {
    const std::size_t base = p * x.h * x.w;
    for (std::size_t i = 0; i < oh; ++i) {
      for (std::size_t j = 0; j < ow; ++j, ++o) {
        std::size_t best = base + i * shape_.freq * x.w + j * shape_.time;
        Real bv = x.data[best];
        for (std::size_t di = 0; di < shape_.freq; ++di) {
          const std::size_t row = base + (i * shape_.freq + di) * x.w + j * shape_.time;
          for (std::size_t dj = 0; dj < shape_.time; ++dj) {
            if (x.data[row + dj] > bv) {
              bv = x.data[row + dj];
              best = row + dj;
            }
          }
        }
        y.data[o] = bv;
        if (argmax) (*argmax)[o] = static_cast<std::uint32_t>(best);
      }
    }
  }
  return y;
}

template <class Real>
Tensor4<Real> MaxPool<Real>::forward(const Tensor4<Real>& x, const PassOptions&, Rng&) {
  input_shape_ = {x.n, x.c, x.h, x.w};
  return pool(x, &argmax_);
}

template <class Real>
Tensor4<Real> MaxPool<Real>::backward(const Tensor4<Real>& dy, bool need_input_grad) {
  if (!need_input_grad) return {};
  Tensor4<Real> dx(input_shape_[0], input_shape_[1], input_shape_[2], input_shape_[3]);
  for (std::size_t o = 0; o < dy.data.size(); ++o) dx.data[argmax_[o]] += dy.data[o];
  return dx;
}

// ---------------------------------------------------------------- Dropout

template <class Real>
Tensor4<Real> Dropout<Real>::forward(const Tensor4<Real>& x, const PassOptions& options, Rng& rng) {
  if (!options.dropout || rate_ <= 0.0) {
    mask_.clear();
    return x;
  }
  const Real keep_scale = static_cast<Real>(1.0 / (1.0 - rate_));
  mask_.resize(x.data.size());
  Tensor4<Real> y = x;
  for (std::size_t i = 0; i < y.data.size(); ++i) {
    mask_[i] = rng.uniform() < rate_ ? Real(0) : keep_scale;
    y.data[i] *= mask_[i];
  }
  return y;
}

template <class Real>
Tensor4<Real> Dropout<Real>::backward(const Tensor4<Real>& dy, bool need_input_grad) {
  if (!need_input_grad) return {};
  if (mask_.empty()) return dy;
  Tensor4<Real> dx = dy;
  for (std::size_t i = 0; i < dx.data.size(); ++i) dx.data[i] *= mask_[i];
  return dx;
}

// ---------------------------------------------------------------- Flatten

template <class Real>
Tensor4<Real> Flatten<Real>::infer(const Tensor4<Real>& x) const {
  Tensor4<Real> y = x;
  y.c = x.c * x.h * x.w;
  y.h = y.w = 1;
  return y;
}

template <class Real>
Tensor4<Real> Flatten<Real>::forward(const Tensor4<Real>& x, const PassOptions&, Rng&) {
  input_shape_ = {x.n, x.c, x.h, x.w};
  return infer(x);
}

template <class Real>
Tensor4<Real> Flatten<Real>::backward(const Tensor4<Real>& dy, bool need_input_grad) {
  if (!need_input_grad) return {};
  Tensor4<Real> dx = dy;
  dx.n = input_shape_[0];
  dx.c = input_shape_[1];
  dx.h = input_shape_[2];
  dx.w = input_shape_[3];
  return dx;
}

// ---------------------------------------------------------------- Softmax

template <class Real>
Tensor4<Real> Softmax<Real>::infer(const Tensor4<Real>& x) const {
  Tensor4<Real> y = x;
  const std::size_t k = x.sample_size();
  for (std::size_t s = 0; s < x.n; ++s) {
    auto row = y.sample(s);
    const Real mx = *std::max_element(row.begin(), row.end());
    double total = 0.0;
    for (auto& v : row) {
      v = std::exp(v - mx);
      total += v;
    }
    for (std::size_t i = 0; i < k; ++i) row[i] = static_cast<Real>(row[i] / total);
  }
  return y;
}

template <class Real>
Tensor4<Real> Softmax<Real>::forward(const Tensor4<Real>& x, const PassOptions&, Rng&) {
  output_ = infer(x);
  return output_;
}

template <class Real>
Tensor4<Real> Softmax<Real>::backward(const Tensor4<Real>& dy, bool need_input_grad) {
  if (!need_input_grad) return {};
  Tensor4<Real> dx = dy;
  for (std::size_t s = 0; s < dy.n; ++s) {
    auto y = output_.sample(s);
    auto g = dy.sample(s);
    double dot = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) dot += static_cast<double>(g[i]) * y[i];
    auto d = dx.sample(s);
    for (std::size_t i = 0; i < y.size(); ++i) d[i] = static_cast<Real>(y[i] * (g[i] - dot));
  }
  return dx;
}

#define ASC_INSTANTIATE_LAYERS(T)   \
  template class Conv3x3<T>;        \
  template class Dense<T>;          \
  template class BatchNorm<T>;      \
  template class Elu<T>;            \
  template class MaxPool<T>;        \
  template class Dropout<T>;        \
  template class Flatten<T>;        \
  template class Softmax<T>;

ASC_INSTANTIATE_LAYERS(float)
ASC_INSTANTIATE_LAYERS(double)

}  // namespace asc::nn
