#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <fstream>

#include "asc/checkpoint.hpp"
#include "asc/training.hpp"
#include "check.hpp"
#include "oracles.hpp"

using namespace asc;
using namespace asc::nn;

namespace {

NetworkConfig mini() {
  NetworkConfig c;
  c.base_filters = 2;
  c.in_channels = 3;
  c.input_height = 8;
  c.input_width = 10;
  c.pools = {{{2, 2}, {2, 5}, {2, 1}}};
  c.dense_units = 6;
  return c;
}

Tensor4<float> batch() {
  Rng rng(1);
  Tensor4<float> t(3, 3, 8, 10);
  for (auto& v : t.data) v = static_cast<float>(rng.normal());
  return t;
}

// A network with a few Adam steps behind it so moving stats and moments are non-trivial.
std::pair<Network, Adam<float>> trained() {
  Network net(mini(), 2);
  Adam<float> opt;
  Rng rng(3);
  const auto b = batch();
  const std::vector<std::size_t> labels = {1, 4, 7};
  for (int i = 0; i < 5; ++i) train_step(net, b, labels, opt, 1e-3, rng);
  return {std::move(net), std::move(opt)};
}

}  // namespace

TEST_CASE("save then load gives bit-identical outputs and optimizer state") {
  const auto dir = oracle::temp_dir("ckpt_roundtrip");
  auto [net, opt] = trained();
  const auto ck = make_checkpoint(net, &opt, TrainingMeta{5, 0.4, 5e-4});
  save_checkpoint(ck, dir / "m.vfyc");
  const auto back = load_checkpoint(dir / "m.vfyc");
  CHECK(back.config == ck.config);
  CHECK(back.parameters == ck.parameters);
  CHECK(back.adam_state == ck.adam_state);
  CHECK(back.adam_steps == 5);
  CHECK(back.meta == ck.meta);
  const auto restored = restore_network(back);
  CHECK(restored.predict(batch()).data == net.predict(batch()).data);
  const auto ropt = restore_optimizer(back);
  CHECK(ropt.steps() == opt.steps());
  REQUIRE(ropt.slots().size() == opt.slots().size());
  CHECK(ropt.slots()[0].vmax == opt.slots()[0].vmax);

  save_checkpoint(back, dir / "again.vfyc");
  CHECK(oracle::read_file(dir / "again.vfyc") == oracle::read_file(dir / "m.vfyc"));
}

TEST_CASE("checkpoint without optimizer state") {
  const auto dir = oracle::temp_dir("ckpt_noopt");
  const Network net(mini(), 9);
  save_checkpoint(make_checkpoint(net, nullptr, {}), dir / "m.vfyc");
  const auto back = load_checkpoint(dir / "m.vfyc");
  CHECK(back.adam_state.empty());
  CHECK(restore_network(back).predict(batch()).data == net.predict(batch()).data);
}

TEST_CASE("corrupt, truncated and wrong-version files") {
  const auto dir = oracle::temp_dir("ckpt_bad");
  auto [net, opt] = trained();
  save_checkpoint(make_checkpoint(net, &opt, {}), dir / "m.vfyc");
  const auto bytes = oracle::read_file(dir / "m.vfyc");
  REQUIRE(bytes.substr(0, 4) == "VFYC");

  for (std::size_t keep : {std::size_t{3}, std::size_t{8}, bytes.size() / 2, bytes.size() - 1}) {
    std::ofstream(dir / "cut.vfyc", std::ios::binary) << bytes.substr(0, keep);
    CHECK_CODE(load_checkpoint(dir / "cut.vfyc"), ErrorCode::CorruptCheckpoint);
  }
  auto bumped = bytes;
  bumped[4] = static_cast<char>(kCheckpointVersion + 1);
  std::ofstream(dir / "v.vfyc", std::ios::binary) << bumped;
  CHECK_CODE(load_checkpoint(dir / "v.vfyc"), ErrorCode::VersionMismatch);
  auto magic = bytes;
  magic[0] = 'X';
  std::ofstream(dir / "x.vfyc", std::ios::binary) << magic;
  CHECK_CODE(load_checkpoint(dir / "x.vfyc"), ErrorCode::CorruptCheckpoint);
  CHECK_CODE(load_checkpoint(dir / "none.vfyc"), ErrorCode::Io);
}

TEST_CASE("restoring parameters into a mismatched architecture fails") {
  auto [net, opt] = trained();
  auto ck = make_checkpoint(net, &opt, {});
  ck.parameters.pop_back();
  CHECK_CODE(restore_network(ck), ErrorCode::CorruptCheckpoint);
  ck = make_checkpoint(net, &opt, {});
  ck.parameters[0].values.push_back(0.0f);
  ck.parameters[0].dims.back() += 1;
  CHECK_CODE(restore_network(ck), ErrorCode::CorruptCheckpoint);
}
