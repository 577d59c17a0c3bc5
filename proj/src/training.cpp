#include "asc/training.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numeric>
#include <mutex>
#include <ostream>
#include <thread>

#include "asc/error.hpp"

namespace asc::nn {

Dataset::Dataset(std::size_t channels, std::size_t height, std::size_t width)
    : channels_(channels), height_(height), width_(width) {}

void Dataset::add(std::span<const float> values, std::size_t label, std::string id) {
  if (values.size() != channels_ * height_ * width_) {
    throw Error(ErrorCode::ShapeMismatch, "sample of " + std::to_string(values.size()) + " values, dataset expects " +
                                              std::to_string(channels_) + "x" + std::to_string(height_) + "x" +
                                              std::to_string(width_));
  }
  values_.insert(values_.end(), values.begin(), values.end());
  labels_.push_back(label);
  ids_.push_back(std::move(id));
}

void Dataset::add(const FeatureTensor& tensor, std::size_t label) {
  if (empty() && channels_ == 0) {
    channels_ = tensor.channels;
    height_ = tensor.n_mels;
    width_ = tensor.frames;
  }
  if (tensor.channels != channels_ || tensor.n_mels != height_ || tensor.frames != width_) {
    throw Error(ErrorCode::ShapeMismatch, "feature tensor " + tensor.clip_id + " is " +
                                              std::to_string(tensor.n_mels) + "x" + std::to_string(tensor.frames) +
                                              "x" + std::to_string(tensor.channels) + ", dataset holds " +
                                              std::to_string(height_) + "x" + std::to_string(width_) + "x" +
                                              std::to_string(channels_));
  }
  add(tensor.values, label, tensor.clip_id);
}

Tensor4<float> Dataset::gather(std::span<const std::size_t> indices) const {
  Tensor4<float> t(indices.size(), channels_, height_, width_);
  const std::size_t n = channels_ * height_ * width_;
  for (std::size_t i = 0; i < indices.size(); ++i) {
    const auto src = values_.begin() + static_cast<std::ptrdiff_t>(indices[i] * n);
    std::copy(src, src + static_cast<std::ptrdiff_t>(n), t.sample(i).begin());
  }
  return t;
}

Tensor4<float> Dataset::slice(std::size_t begin, std::size_t end) const {
  std::vector<std::size_t> idx(end - begin);
  std::iota(idx.begin(), idx.end(), begin);
  return gather(idx);
}

PlateauScheduler::PlateauScheduler(const TrainingSchedule& schedule)
    : factor_(schedule.lr_factor),
      plateau_patience_(schedule.plateau_patience),
      stop_patience_(schedule.early_stop_patience),
      lr_(schedule.initial_lr) {}

PlateauScheduler::Decision PlateauScheduler::observe(double val_accuracy) {
  Decision d;
  if (val_accuracy > best_) {
    best_ = val_accuracy;
    since_best_ = 0;
    since_reduce_ = 0;
    d.improved = true;
    return d;
  }
  ++since_best_;
  ++since_reduce_;
  if (since_reduce_ >= plateau_patience_) {
    lr_ *= factor_;
    since_reduce_ = 0;
    d.lr_reduced = true;
  }
  d.stop = since_best_ >= stop_patience_;
  return d;
}

double train_step(Network& net, const Tensor4<float>& batch, std::span<const std::size_t> labels,
                  Adam<float>& optimizer, double learning_rate, Rng& dropout_rng) {
  if (batch.n == 0) throw Error(ErrorCode::EmptySplit, "empty batch");
  const double loss = compute_gradients(net, batch, labels, PassOptions::train(), dropout_rng);
  if (!std::isfinite(loss)) throw Error(ErrorCode::NonFiniteLoss, "loss is " + std::to_string(loss));
  auto params = net.trainable_parameters();
  for (const auto& p : params) {
    for (float g : p.grads) {
      if (!std::isfinite(g)) throw Error(ErrorCode::NonFiniteLoss, "non-finite gradient in " + p.name);
    }
  }
  optimizer.step(params, learning_rate);
  return loss;
}

std::vector<std::vector<float>> predict_dataset(const Network& net, const Dataset& data, std::size_t batch_size,
                                                std::size_t workers) {
  batch_size = std::max<std::size_t>(batch_size, 1);
  std::vector<std::vector<float>> out(data.size());
  const std::size_t n_batches = (data.size() + batch_size - 1) / batch_size;
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto work = [&] {
    try {
      for (std::size_t b = next++; b < n_batches; b = next++) {
        const std::size_t begin = b * batch_size;
        const auto probs = net.predict(data.slice(begin, std::min(data.size(), begin + batch_size)));
        for (std::size_t s = 0; s < probs.n; ++s) {
          const auto row = probs.sample(s);
          out[begin + s].assign(row.begin(), row.end());
        }
      }
    } catch (...) {
      std::lock_guard lock(failure_mutex);
      if (!failure) failure = std::current_exception();
      next = n_batches;
    }
  };
  workers = std::clamp<std::size_t>(workers, 1, std::max<std::size_t>(n_batches, 1));
  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t i = 0; i < workers; ++i) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);
  return out;
}

double accuracy(const Network& net, const Dataset& data, std::size_t batch_size) {
  if (data.empty()) return 0.0;
  const auto probs = predict_dataset(net, data, batch_size);
  std::size_t correct = 0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    const auto best = static_cast<std::size_t>(std::max_element(probs[i].begin(), probs[i].end()) - probs[i].begin());
    if (best == data.label(i)) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(data.size());
}

FitResult fit(Network& net, const Dataset& train_set, const Dataset& validation_set,
              const TrainingSchedule& schedule, const FitOptions& options) {
  if (train_set.empty()) throw Error(ErrorCode::EmptySplit, "training split is empty");
  if (validation_set.empty()) throw Error(ErrorCode::EmptySplit, "validation split is empty");
  if (schedule.batch_size == 0) throw Error(ErrorCode::InvalidConfig, "batch size must be positive");
  const auto& cfg = net.config();
  for (const Dataset* d : {&train_set, &validation_set}) {
    if (d->channels() != cfg.in_channels || d->height() != cfg.input_height || d->width() != cfg.input_width) {
      throw Error(ErrorCode::ShapeMismatch, "dataset shape does not match the network input");
    }
  }

  Adam<float> optimizer(options.adam);
  PlateauScheduler scheduler(schedule);
  Rng shuffle_rng(options.seed, "shuffle");
  Rng dropout_rng(options.seed, "dropout");
  std::vector<std::size_t> order(train_set.size());
  std::iota(order.begin(), order.end(), 0);

  FitResult result;
  std::vector<std::size_t> batch_labels;
  for (std::size_t epoch = 1; epoch <= schedule.max_epochs; ++epoch) {
    const double lr = scheduler.learning_rate();
    shuffle_rng.shuffle(order.begin(), order.end());
    double loss_sum = 0.0;
    for (std::size_t b = 0; b < order.size(); b += schedule.batch_size) {
      const std::size_t e = std::min(order.size(), b + schedule.batch_size);
      const std::span<const std::size_t> idx(order.data() + b, e - b);
      batch_labels.clear();
      for (auto i : idx) batch_labels.push_back(train_set.label(i));
      loss_sum += train_step(net, train_set.gather(idx), batch_labels, optimizer, lr, dropout_rng) *
                  static_cast<double>(idx.size());
    }

    EpochRecord rec;
    rec.epoch = epoch;
    rec.learning_rate = lr;
    rec.train_loss = loss_sum / static_cast<double>(order.size());
    rec.train_accuracy = accuracy(net, train_set, schedule.batch_size);
    rec.val_accuracy = accuracy(net, validation_set, schedule.batch_size);
    rec.best_train_loss = result.log.empty() ? rec.train_loss : std::min(result.log.back().best_train_loss, rec.train_loss);
    result.log.push_back(rec);

    const auto decision = scheduler.observe(rec.val_accuracy);
    if (decision.improved) {
      result.best = make_checkpoint(net, &optimizer, {epoch, rec.val_accuracy, scheduler.learning_rate()});
      result.best_epoch = epoch;
    }
    const bool keep_going = !options.on_epoch || options.on_epoch(rec);
    if (decision.stop) {
      result.early_stopped = true;
      break;
    }
    if (!keep_going) break;
  }
  return result;
}

void write_training_log(std::ostream& out, std::span<const EpochRecord> log) {
  const auto flags = out.flags();
  const auto prec = out.precision();
  out.precision(9);
  out << "epoch,lr,train_loss,train_acc,val_acc,best_train_loss\n";
  for (const auto& r : log) {
    out << r.epoch << ',' << r.learning_rate << ',' << r.train_loss << ',' << r.train_accuracy << ','
        << r.val_accuracy << ',' << r.best_train_loss << '\n';
  }
  out.flags(flags);
  out.precision(prec);
}

}  // namespace asc::nn
