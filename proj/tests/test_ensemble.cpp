#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>

#include "asc/ensemble.hpp"
#include "asc/random.hpp"
#include "check.hpp"
#include "oracles.hpp"

using namespace asc;
using namespace asc::ensemble;

namespace {

std::vector<double> random_simplex(Rng& rng, std::size_t k) {
  std::vector<double> v(k);
  double s = 0;
  for (auto& x : v) s += (x = -std::log(1.0 - rng.uniform()));
  for (auto& x : v) x /= s;
  return v;
}

}  // namespace

TEST_CASE("arithmetic mean examples") {
  const auto two = fuse_arithmetic(EnsembleInput({{0.6, 0.4}, {0.2, 0.8}}));
  CHECK(two[0] == doctest::Approx(0.4));
  CHECK(two[1] == doctest::Approx(0.6));
  const EnsembleInput three({{0.5, 0.5, 0.0}, {0.4, 0.1, 0.5}, {0.3, 0.3, 0.4}});
  const auto m = fuse_arithmetic(three);
  CHECK(m[0] == doctest::Approx(0.4));
  CHECK(m[1] == doctest::Approx(0.3));
  CHECK(decide(m) == 0);
}

TEST_CASE("geometric and OWA on per-class probabilities 0.9, 0.5, 0.1") {
  const EnsembleInput in({{0.9, 0.1}, {0.5, 0.5}, {0.1, 0.9}});
  CHECK(fuse_geometric(in)[0] == doctest::Approx(std::cbrt(0.045)).epsilon(1e-12));
  CHECK(fuse_geometric(in)[0] == doctest::Approx(0.3557).epsilon(1e-4));
  CHECK(fuse_owa(in, OwaWeights::and_like_default())[0] == doctest::Approx(0.24).epsilon(1e-12));
  CHECK(fuse(in, FusionMethod::Owa)[0] == doctest::Approx(0.24).epsilon(1e-12));
}

TEST_CASE("a zero probability is clamped, not propagated") {
  const EnsembleInput in({{0.0, 1.0}, {1.0, 0.0}, {1.0, 0.0}});
  const auto g = fuse_geometric(in);
  CHECK(g[0] > 0.0);
  CHECK(g[0] <= std::cbrt(kGeometricFloor) * (1 + 1e-12));
}

TEST_CASE("identical models return their common vector for all operators") {
  Rng rng(1);
  for (std::size_t m : {1u, 3u, 5u}) {
    const auto v = random_simplex(rng, 10);
    const EnsembleInput in(std::vector<std::vector<double>>(m, v));
    const auto w = OwaWeights::uniform(m);
    const auto a = fuse_arithmetic(in), g = fuse_geometric(in), o = fuse_owa(in, w);
    for (std::size_t c = 0; c < 10; ++c) {
      CHECK(a[c] == doctest::Approx(v[c]).epsilon(1e-12));
      CHECK(g[c] == doctest::Approx(v[c]).epsilon(1e-12));
      CHECK(o[c] == doctest::Approx(v[c]).epsilon(1e-12));
    }
  }
}

TEST_CASE("operators agree with direct oracles; uniform OWA is the mean") {
  Rng rng(2);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t m = 1 + rng.below(5);
    std::vector<std::vector<double>> p;
    for (std::size_t i = 0; i < m; ++i) p.push_back(random_simplex(rng, 10));
    std::vector<double> w(m);
    double s = 0;
    for (auto& x : w) s += (x = rng.uniform());
    for (auto& x : w) x /= s;
    const EnsembleInput in(p);
    const auto a = fuse_arithmetic(in), g = fuse_geometric(in), o = fuse_owa(in, OwaWeights(w));
    const auto u = fuse_owa(in, OwaWeights::uniform(m));
    const auto ra = oracle::direct_mean(p), rg = oracle::direct_geometric(p), ro = oracle::direct_owa(p, w);
    for (std::size_t c = 0; c < 10; ++c) {
      CHECK(std::abs(a[c] - ra[c]) <= 1e-12);
      CHECK(std::abs(g[c] - rg[c]) <= 1e-9 * std::max(rg[c], 1e-12));
      CHECK(std::abs(o[c] - ro[c]) <= 1e-12);
      CHECK(std::abs(u[c] - a[c]) <= 1e-12);
    }
  }
}

TEST_CASE("OWA is invariant to model order") {
  Rng rng(3);
  std::vector<std::vector<double>> p;
  for (int i = 0; i < 4; ++i) p.push_back(random_simplex(rng, 10));
  const OwaWeights w({0.4, 0.3, 0.2, 0.1});
  const auto ref = fuse_owa(EnsembleInput(p), w);
  std::vector<std::size_t> order = {0, 1, 2, 3};
  while (std::next_permutation(order.begin(), order.end())) {
    std::vector<std::vector<double>> q;
    for (auto i : order) q.push_back(p[i]);
    CHECK(fuse_owa(EnsembleInput(q), w) == ref);
  }
}

TEST_CASE("raising one model's probability never lowers the fused score") {
  Rng rng(4);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<std::vector<double>> p;
    for (int i = 0; i < 3; ++i) p.push_back(random_simplex(rng, 10));
    const std::size_t m = rng.below(3), c = rng.below(10);
    auto q = p;
    const double bump = rng.uniform() * (1.0 - q[m][c]);
    q[m][c] += bump;
    // Rescale the other classes so the row stays a distribution; class c only goes up.
    const double rest = 1.0 - p[m][c];
    for (std::size_t k = 0; k < 10; ++k) {
      if (k != c) q[m][k] = rest > 0 ? p[m][k] * (1.0 - q[m][c]) / rest : 0.0;
    }
    const EnsembleInput a(p), b(q);
    const auto w = OwaWeights::and_like_default();
    CHECK(fuse_arithmetic(b)[c] >= fuse_arithmetic(a)[c]);
    CHECK(fuse_geometric(b)[c] >= fuse_geometric(a)[c]);
    CHECK(fuse_owa(b, w)[c] >= fuse_owa(a, w)[c]);
  }
}

TEST_CASE("decide: argmax, lowest-index ties, scale invariance, non-finite") {
  std::vector<double> s(10, 0.0);
  s[1] = 0.6;
  s[0] = 0.4;
  CHECK(decide(s) == 1);
  std::vector<double> tie(10, 0.0);
  tie[0] = tie[1] = 0.5;
  CHECK(decide(tie) == 0);
  Rng rng(5);
  for (int i = 0; i < 50; ++i) {
    auto v = random_simplex(rng, 10);
    const auto before = decide(v);
    const double k = std::exp(rng.uniform(-20, 20));
    for (auto& x : v) x *= k;
    CHECK(decide(v) == before);
  }
  s[3] = std::numeric_limits<double>::quiet_NaN();
  CHECK_CODE(decide(s), ErrorCode::NonFiniteScore);
  s[3] = std::numeric_limits<double>::infinity();
  CHECK_CODE(decide(s), ErrorCode::NonFiniteScore);
  CHECK_CODE(decide(std::vector<double>{}), ErrorCode::InvalidArgument);
}

TEST_CASE("input and weight validation") {
  CHECK_CODE(EnsembleInput({}), ErrorCode::InvalidArgument);
  CHECK_CODE(EnsembleInput({{0.5, 0.5}, {1.0}}), ErrorCode::InvalidArgument);
  CHECK_CODE(EnsembleInput({{0.5, 0.6}}), ErrorCode::InvalidArgument);
  CHECK_CODE(EnsembleInput({{-0.1, 1.1}}), ErrorCode::InvalidArgument);
  CHECK_CODE(OwaWeights({0.5, 0.4}), ErrorCode::WeightsNotNormalized);
  CHECK_CODE(OwaWeights({1.5, -0.5}), ErrorCode::WeightsNotNormalized);
  const EnsembleInput two({{0.5, 0.5}, {0.2, 0.8}});
  CHECK_CODE(fuse_owa(two, OwaWeights::and_like_default()), ErrorCode::WeightLengthMismatch);
  CHECK_CODE(fuse(two, FusionMethod::Owa), ErrorCode::WeightLengthMismatch);
  CHECK(fuse(two, FusionMethod::Owa, OwaWeights({0.5, 0.5}))[1] == doctest::Approx(0.65));
}

TEST_CASE("method and weight parsing") {
  CHECK(parse_method("sum") == FusionMethod::Sum);
  CHECK(parse_method("prod") == FusionMethod::Prod);
  CHECK(parse_method("owa") == FusionMethod::Owa);
  CHECK(to_string(FusionMethod::Owa) == "owa");
  CHECK_CODE(parse_method("max"), ErrorCode::InvalidArgument);
  const auto w = parse_weights("0.2, 0.3,0.5");
  REQUIRE(w.size() == 3);
  CHECK(w.values()[2] == 0.5);
  CHECK_CODE(parse_weights("0.2,abc"), ErrorCode::ParseError);
  CHECK_CODE(parse_weights(""), ErrorCode::ParseError);
  CHECK_CODE(parse_weights("0.2,0.2"), ErrorCode::WeightsNotNormalized);
}
