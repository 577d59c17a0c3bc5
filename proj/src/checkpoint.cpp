#include "asc/checkpoint.hpp"

#include <cstring>
#include <fstream>
#include <map>
#include <json.hpp>
#include <sstream>

#include "asc/error.hpp"
#include "asc/tensor_io.hpp"

namespace asc::nn {

namespace {

using nlohmann::json;

json config_to_json(const NetworkConfig& c) {
  json pools = json::array();
  for (const auto& p : c.pools) pools.push_back({p.freq, p.time});
  return {{"base_filters", c.base_filters}, {"in_channels", c.in_channels},   {"n_classes", c.n_classes},
          {"input_height", c.input_height}, {"input_width", c.input_width},   {"pools", pools},
          {"dropout_rates", c.dropout_rates}, {"elu_alpha", c.elu_alpha},     {"dense_units", c.dense_units},
          {"bn_momentum", c.bn_momentum},   {"bn_epsilon", c.bn_epsilon}};
}

NetworkConfig config_from_json(const json& j) {
  NetworkConfig c;
  c.base_filters = j.at("base_filters").get<std::size_t>();
  c.in_channels = j.at("in_channels").get<std::size_t>();
  c.n_classes = j.at("n_classes").get<std::size_t>();
  c.input_height = j.at("input_height").get<std::size_t>();
  c.input_width = j.at("input_width").get<std::size_t>();
  const auto& pools = j.at("pools");
  if (pools.size() != 3) throw Error(ErrorCode::CorruptCheckpoint, "expected 3 pool shapes");
  for (std::size_t i = 0; i < 3; ++i) c.pools[i] = {pools[i].at(0).get<std::size_t>(), pools[i].at(1).get<std::size_t>()};
  c.dropout_rates = j.at("dropout_rates").get<std::array<double, 4>>();
  c.elu_alpha = j.at("elu_alpha").get<double>();
  c.dense_units = j.at("dense_units").get<std::size_t>();
  c.bn_momentum = j.at("bn_momentum").get<double>();
  c.bn_epsilon = j.at("bn_epsilon").get<double>();
  return c;
}

template <class T>
void put(std::ostream& out, T v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof v);
}

template <class T>
T get(std::istream& in) {
  T v{};
  if (!in.read(reinterpret_cast<char*>(&v), sizeof v)) throw Error(ErrorCode::CorruptCheckpoint, "truncated file");
  return v;
}

}  // namespace

Checkpoint make_checkpoint(const Network& net, const Adam<float>* optimizer, const TrainingMeta& meta) {
  Checkpoint ck;
  ck.config = net.config();
  ck.meta = meta;
  for (const auto& p : net.parameters()) {
    ck.parameters.push_back({p.name, p.dims, std::vector<float>(p.values.begin(), p.values.end())});
  }
  if (optimizer) {
    ck.adam = optimizer->config();
    ck.adam_steps = optimizer->steps();
    for (const auto& s : optimizer->slots()) {
      const std::vector<std::uint32_t> dims = {static_cast<std::uint32_t>(s.m.size())};
      ck.adam_state.push_back({"m/" + s.name, dims, s.m});
      ck.adam_state.push_back({"v/" + s.name, dims, s.v});
      ck.adam_state.push_back({"vmax/" + s.name, dims, s.vmax});
    }
  }
  return ck;
}

Network restore_network(const Checkpoint& ckpt) {
  Network net(ckpt.config);
  std::map<std::string, const NamedTensor*> by_name;
  for (const auto& t : ckpt.parameters) by_name[t.name] = &t;
  for (auto& p : net.parameters()) {
    auto it = by_name.find(p.name);
    if (it == by_name.end()) throw Error(ErrorCode::CorruptCheckpoint, "missing parameter '" + p.name + "'");
    const NamedTensor& t = *it->second;
    if (t.dims != p.dims || t.values.size() != p.values.size()) {
      throw Error(ErrorCode::CorruptCheckpoint, "parameter '" + p.name + "' has the wrong shape");
    }
    std::copy(t.values.begin(), t.values.end(), p.values.begin());
  }
  if (by_name.size() != net.parameters().size()) {
    throw Error(ErrorCode::CorruptCheckpoint, "checkpoint has unexpected extra parameters");
  }
  return net;
}

Adam<float> restore_optimizer(const Checkpoint& ckpt) {
  Adam<float> opt(ckpt.adam);
  if (ckpt.adam_state.empty()) return opt;
  if (ckpt.adam_state.size() % 3 != 0) throw Error(ErrorCode::CorruptCheckpoint, "incomplete optimizer state");
  std::vector<Adam<float>::Slot> slots;
  for (std::size_t i = 0; i < ckpt.adam_state.size(); i += 3) {
    const auto& m = ckpt.adam_state[i];
    const auto& v = ckpt.adam_state[i + 1];
    const auto& vmax = ckpt.adam_state[i + 2];
    if (!m.name.starts_with("m/") || v.name != "v/" + m.name.substr(2) || vmax.name != "vmax/" + m.name.substr(2)) {
      throw Error(ErrorCode::CorruptCheckpoint, "malformed optimizer state near '" + m.name + "'");
    }
    slots.push_back({m.name.substr(2), m.values, v.values, vmax.values});
  }
  opt.restore(ckpt.adam_steps, std::move(slots));
  return opt;
}

void save_checkpoint(const Checkpoint& ckpt, const std::filesystem::path& path) {
  json header;
  header["config"] = config_to_json(ckpt.config);
  header["adam"] = {{"beta1", ckpt.adam.beta1},
                    {"beta2", ckpt.adam.beta2},
                    {"epsilon", ckpt.adam.epsilon},
                    {"decay", ckpt.adam.decay},
                    {"amsgrad", ckpt.adam.amsgrad},
                    {"steps", ckpt.adam_steps}};
  header["meta"] = {{"epoch", ckpt.meta.epoch},
                    {"best_val_accuracy", ckpt.meta.best_val_accuracy},
                    {"learning_rate", ckpt.meta.learning_rate}};
  json layers = json::array();
  for (const auto& t : ckpt.parameters) {
    const std::string layer = t.name.substr(0, t.name.find('.'));
    if (layers.empty() || layers.back() != layer) layers.push_back(layer);
  }
  header["layers"] = layers;
  const std::string text = header.dump();

  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + path.string());
  out.write("VFYC", 4);
  put<std::uint16_t>(out, kCheckpointVersion);
  put<std::uint32_t>(out, static_cast<std::uint32_t>(text.size()));
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  put<std::uint32_t>(out, static_cast<std::uint32_t>(ckpt.parameters.size() + ckpt.adam_state.size()));
  auto write_named = [&](const NamedTensor& t) {
    put<std::uint16_t>(out, static_cast<std::uint16_t>(t.name.size()));
    out.write(t.name.data(), static_cast<std::streamsize>(t.name.size()));
    write_tensor(out, t.dims, t.values);
  };
  for (const auto& t : ckpt.parameters) write_named(t);
  for (const auto& t : ckpt.adam_state) write_named(t);
  out.write("CEND", 4);
  if (!out) throw Error(ErrorCode::Io, "write failed for " + path.string());
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path.string());
  char magic[4];
  if (!in.read(magic, 4) || std::memcmp(magic, "VFYC", 4) != 0) {
    throw Error(ErrorCode::CorruptCheckpoint, path.string() + " is not a checkpoint");
  }
  const auto version = get<std::uint16_t>(in);
  if (version != kCheckpointVersion) {
    throw Error(ErrorCode::VersionMismatch, "checkpoint version " + std::to_string(version) + ", expected " +
                                                std::to_string(kCheckpointVersion));
  }
  Checkpoint ck;
  try {
    const auto len = get<std::uint32_t>(in);
    if (len > (1u << 24)) throw Error(ErrorCode::CorruptCheckpoint, "implausible header length");
    std::string text(len, '\0');
    if (!in.read(text.data(), len)) throw Error(ErrorCode::CorruptCheckpoint, "truncated header");
    const json header = json::parse(text);
    ck.config = config_from_json(header.at("config"));
    const auto& adam = header.at("adam");
    ck.adam = {adam.at("beta1").get<double>(), adam.at("beta2").get<double>(), adam.at("epsilon").get<double>(),
               adam.at("decay").get<double>(), adam.at("amsgrad").get<bool>()};
    ck.adam_steps = adam.at("steps").get<std::uint64_t>();
    const auto& meta = header.at("meta");
    ck.meta = {meta.at("epoch").get<std::uint64_t>(), meta.at("best_val_accuracy").get<double>(),
               meta.at("learning_rate").get<double>()};

    const auto count = get<std::uint32_t>(in);
    for (std::uint32_t i = 0; i < count; ++i) {
      const auto name_len = get<std::uint16_t>(in);
      std::string name(name_len, '\0');
      if (!in.read(name.data(), name_len)) throw Error(ErrorCode::CorruptCheckpoint, "truncated tensor name");
      TensorRecord rec = read_tensor(in);
      NamedTensor t{std::move(name), std::move(rec.dims), std::move(rec.values)};
      (t.name.find('/') != std::string::npos ? ck.adam_state : ck.parameters).push_back(std::move(t));
    }
    char end[4];
    if (!in.read(end, 4) || std::memcmp(end, "CEND", 4) != 0) {
      throw Error(ErrorCode::CorruptCheckpoint, "missing end marker");
    }
  } catch (const Error& e) {
    if (e.code() == ErrorCode::CorruptCheckpoint) throw;
    throw Error(ErrorCode::CorruptCheckpoint, e.what());
  } catch (const json::exception& e) {
    throw Error(ErrorCode::CorruptCheckpoint, std::string("bad header: ") + e.what());
  }
  return ck;
}

}  // namespace asc::nn
