#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "asc/checkpoint.hpp"
#include "asc/features.hpp"
#include "asc/network.hpp"
#include "asc/optimizer.hpp"

namespace asc::nn {

/// Labelled samples of identical C x H x W shape, stored contiguously.
class Dataset {
 public:
  Dataset() = default;
  Dataset(std::size_t channels, std::size_t height, std::size_t width);

  /// Errors: ShapeMismatch.
  void add(std::span<const float> values, std::size_t label, std::string id = {});
  void add(const FeatureTensor& tensor, std::size_t label);

  std::size_t size() const noexcept { return labels_.size(); }
  bool empty() const noexcept { return labels_.empty(); }
  std::size_t channels() const noexcept { return channels_; }
  std::size_t height() const noexcept { return height_; }
  std::size_t width() const noexcept { return width_; }
  std::size_t label(std::size_t i) const { return labels_.at(i); }
  const std::vector<std::size_t>& labels() const noexcept { return labels_; }
  const std::string& id(std::size_t i) const { return ids_.at(i); }

  Tensor4<float> gather(std::span<const std::size_t> indices) const;
  Tensor4<float> slice(std::size_t begin, std::size_t end) const;

 private:
  std::size_t channels_ = 0, height_ = 0, width_ = 0;
  std::vector<float> values_;
  std::vector<std::size_t> labels_;
  std::vector<std::string> ids_;
};

struct TrainingSchedule {
  std::size_t max_epochs = 2000;
  std::size_t batch_size = 32;
  double initial_lr = 1e-3;
  double lr_factor = 0.5;
  std::size_t plateau_patience = 50;
  std::size_t early_stop_patience = 100;
};

/// Reduce-on-plateau and early stopping keyed on validation accuracy. An epoch
/// improves only if it strictly beats the best so far, so ties keep the earlier epoch.
class PlateauScheduler {
 public:
  struct Decision {
    bool improved = false;
    bool lr_reduced = false;
    bool stop = false;
  };

  explicit PlateauScheduler(const TrainingSchedule& schedule);

  /// Call once per finished epoch; the returned learning rate applies to the next epoch.
  Decision observe(double val_accuracy);

  double learning_rate() const noexcept { return lr_; }
  double best() const noexcept { return best_; }
  std::size_t epochs_since_improvement() const noexcept { return since_best_; }

 private:
  double factor_;
  std::size_t plateau_patience_, stop_patience_;
  double lr_;
  double best_ = -1.0;
  std::size_t since_best_ = 0;
  std::size_t since_reduce_ = 0;
};

/// One Adam step on a batch, train-mode pass (dropout on, batch statistics).
/// Returns the loss before the update.
/// Errors: NonFiniteLoss (loss or any gradient not finite; no Adam update is applied).
double train_step(Network& net, const Tensor4<float>& batch, std::span<const std::size_t> labels,
                  Adam<float>& optimizer, double learning_rate, Rng& dropout_rng);

struct EpochRecord {
  std::size_t epoch = 0;  // 1-based
  double learning_rate = 0.0;
  double train_loss = 0.0;      // mean train-mode loss over the epoch's batches
  double train_accuracy = 0.0;  // inference-mode accuracy on the training split
  double val_accuracy = 0.0;
  double best_train_loss = 0.0;  // lowest train_loss seen up to and including this epoch
};

struct FitOptions {
  std::uint64_t seed = 0;
  AdamConfig adam;
  /// Return false to stop after this epoch.
  std::function<bool(const EpochRecord&)> on_epoch;
};

struct FitResult {
  Checkpoint best;  // state at the end of the best-validation epoch
  std::vector<EpochRecord> log;
  std::size_t best_epoch = 0;
  bool early_stopped = false;
};

/// Errors: EmptySplit, ShapeMismatch, NonFiniteLoss.
FitResult fit(Network& net, const Dataset& train_set, const Dataset& validation_set,
              const TrainingSchedule& schedule, const FitOptions& options = {});

/// Class probabilities for every sample, inference mode. Batches are spread over
/// `workers` threads; results do not depend on the worker count.
std::vector<std::vector<float>> predict_dataset(const Network& net, const Dataset& data, std::size_t batch_size = 32,
                                                std::size_t workers = 1);

double accuracy(const Network& net, const Dataset& data, std::size_t batch_size = 32);

/// Header `epoch,lr,train_loss,train_acc,val_acc,best_train_loss`.
void write_training_log(std::ostream& out, std::span<const EpochRecord> log);

}  // namespace asc::nn
