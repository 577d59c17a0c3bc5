#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "asc/network.hpp"
#include "check.hpp"

using namespace asc;
using namespace asc::nn;

namespace {

NetworkConfig mini(std::size_t in_channels = 2) {
  NetworkConfig c;
  c.base_filters = 2;
  c.in_channels = in_channels;
  c.input_height = 8;
  c.input_width = 10;
  c.pools = {{{2, 2}, {2, 5}, {2, 1}}};
  c.dense_units = 6;
  return c;
}

template <class Real>
Tensor4<Real> random_batch(const NetworkConfig& c, std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  Tensor4<Real> t(n, c.in_channels, c.input_height, c.input_width);
  for (auto& v : t.data) v = static_cast<Real>(rng.normal());
  return t;
}

}  // namespace

TEST_CASE("spatial trace and flatten lengths") {
  NetworkConfig c;
  c.in_channels = 3;
  const Network net(c, 1);
  std::vector<std::array<std::size_t, 3>> pooled;
  for (const auto& l : net.summary()) {
    if (l.kind == LayerKind::MaxPool) pooled.push_back(l.output_shape);
  }
  REQUIRE(pooled.size() == 3);
  CHECK(pooled[0] == std::array<std::size_t, 3>{16, 32, 50});
  CHECK(pooled[1] == std::array<std::size_t, 3>{32, 16, 10});
  CHECK(pooled[2] == std::array<std::size_t, 3>{64, 8, 2});
  CHECK(c.flatten_length() == 1024);
  c.base_filters = 32;
  CHECK(c.flatten_length() == 2048);
  c.base_filters = 64;
  const Network big(c, 1);
  std::size_t last_conv = 0;
  for (const auto& l : big.summary()) {
    if (l.kind == LayerKind::Conv3x3) last_conv = l.output_shape[0];
  }
  CHECK(last_conv == 256);
}

TEST_CASE("layer order follows the architecture table") {
  const Network net(mini(), 0);
  std::string seq;
  for (const auto& l : net.summary()) seq += std::string(to_string(l.kind)) + " ";
  const std::string block = "Conv3x3 BatchNorm ELU Conv3x3 BatchNorm ELU MaxPool Dropout ";
  CHECK(seq == block + block + block + "Flatten Dense BatchNorm ELU Dropout Dense BatchNorm Softmax ");
}

TEST_CASE("parameter counts for the three widths, and the config-only count agrees") {
  NetworkConfig c;
  c.in_channels = 3;
  for (auto [x, want] : {std::pair<std::size_t, std::size_t>{16, 176926}, {32, 495150}, {64, 1560142}}) {
    c.base_filters = x;
    CHECK(param_count(c) == want);
    CHECK(Network(c, 0).param_count() == want);
  }
}

TEST_CASE("invalid configurations") {
  auto c = mini();
  c.in_channels = 5;
  CHECK_CODE(Network(c, 0), ErrorCode::InvalidConfig);
  c = mini();
  c.input_width = 4;
  CHECK_CODE(Network(c, 0), ErrorCode::InvalidConfig);
  c = mini();
  c.dropout_rates[1] = 1.0;
  CHECK_CODE(Network(c, 0), ErrorCode::InvalidConfig);
}

TEST_CASE("softmax rows sum to one; wrong channel count is rejected") {
  const auto c = mini();
  const Network net(c, 3);
  auto batch = random_batch<float>(c, 5, 9);
  for (auto& v : batch.data) v *= 50.0f;
  const auto out = net.predict(batch);
  REQUIRE(out.n == 5);
  REQUIRE(out.sample_size() == 10);
  for (std::size_t s = 0; s < 5; ++s) {
    double sum = 0;
    for (float p : out.sample(s)) {
      CHECK(p >= 0.0f);
      sum += p;
    }
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-6));
  }
  CHECK_CODE(net.predict(random_batch<float>(mini(3), 1, 1)), ErrorCode::ShapeMismatch);
}

TEST_CASE("fresh network on zero input is near uniform over ten seeds") {
  NetworkConfig c;
  c.in_channels = 1;
  const Tensor4<float> zero(1, 1, 64, 500);
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const Network net(c, seed);
    const auto out = net.predict(zero);
    for (float p : out.sample(0)) CHECK(std::abs(p - 0.1f) <= 0.05f);
  }
}

TEST_CASE("inference is deterministic and does not touch the network") {
  const auto c = mini();
  Network net(c, 4);
  const auto batch = random_batch<float>(c, 3, 5);
  const auto a = net.predict(batch);
  Rng rng(0);
  const auto b = net.forward(batch, PassOptions::frozen(), rng);
  const auto again = net.predict(batch);
  CHECK(a.data == again.data);
  CHECK(a.data == b.data);
}

TEST_CASE("dropout is active only in train mode and seeded by the caller's stream") {
  const auto c = mini();
  Network net(c, 4);
  const auto batch = random_batch<float>(c, 4, 6);
  const PassOptions drop{true, false, false};
  Rng r1(10), r2(10), r3(11);
  const auto a = net.forward(batch, drop, r1);
  const auto b = net.forward(batch, drop, r2);
  const auto d = net.forward(batch, drop, r3);
  CHECK(a.data == b.data);
  CHECK(a.data != d.data);
  CHECK(a.data != net.predict(batch).data);
}

TEST_CASE("moving statistics equal to batch statistics make inference match train-mode normalization") {
  auto c = mini();
  c.bn_momentum = 0.0;  // moving stats become exactly the last batch's stats
  NetworkF64 net(c, 7);
  const auto batch = random_batch<double>(c, 6, 8);
  Rng rng(0);
  const auto batch_mode = net.forward(batch, PassOptions{false, true, true}, rng);
  const auto infer = net.predict(batch);
  for (std::size_t i = 0; i < infer.data.size(); ++i) CHECK(std::abs(infer.data[i] - batch_mode.data[i]) <= 1e-9);
}

TEST_CASE("copies are deep") {
  const auto c = mini();
  Network a(c, 1);
  Network b = a;
  const auto batch = random_batch<float>(c, 2, 3);
  CHECK(a.predict(batch).data == b.predict(batch).data);
  b.parameters()[0].values[0] += 1.0f;
  CHECK(a.predict(batch).data != b.predict(batch).data);
}

TEST_CASE("cross entropy of a known distribution") {
  Tensor4<double> p(2, 3, 1, 1);
  p.data = {0.5, 0.25, 0.25, 0.1, 0.8, 0.1};
  const std::size_t labels[2] = {0, 1};
  CHECK(cross_entropy(p, std::span<const std::size_t>(labels)) == doctest::Approx(-(std::log(0.5) + std::log(0.8)) / 2));
  const std::size_t bad[2] = {0, 3};
  CHECK_CODE(cross_entropy(p, std::span<const std::size_t>(bad)), ErrorCode::IndexOutOfRange);
}
