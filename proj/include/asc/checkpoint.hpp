#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "asc/network.hpp"
#include "asc/optimizer.hpp"

namespace asc::nn {

inline constexpr std::uint16_t kCheckpointVersion = 1;

struct NamedTensor {
  std::string name;
  std::vector<std::uint32_t> dims;
  std::vector<float> values;
  bool operator==(const NamedTensor&) const = default;
};

struct TrainingMeta {
  std::uint64_t epoch = 0;
  double best_val_accuracy = 0.0;
  double learning_rate = 1e-3;
  bool operator==(const TrainingMeta&) const = default;
};

/// Everything needed to resume training or reproduce inference.
struct Checkpoint {
  NetworkConfig config;
  std::vector<NamedTensor> parameters;  // learnable parameters and BN moving statistics
  AdamConfig adam;
  std::uint64_t adam_steps = 0;
  std::vector<NamedTensor> adam_state;  // "m/<param>", "v/<param>", "vmax/<param>"
  TrainingMeta meta;
};

Checkpoint make_checkpoint(const Network& net, const Adam<float>* optimizer, const TrainingMeta& meta);

/// Errors: CorruptCheckpoint when tensors are missing or mis-shaped.
Network restore_network(const Checkpoint& ckpt);
Adam<float> restore_optimizer(const Checkpoint& ckpt);

/// Layout: "VFYC", u16 version, u32 length + JSON header (config, optimizer
/// settings, training metadata, layer-name manifest), u32 tensor count, then
/// per tensor a u16 length-prefixed name followed by an LMT1 record, then "CEND".
void save_checkpoint(const Checkpoint& ckpt, const std::filesystem::path& path);

/// Errors: Io, CorruptCheckpoint, VersionMismatch.
Checkpoint load_checkpoint(const std::filesystem::path& path);

}  // namespace asc::nn
