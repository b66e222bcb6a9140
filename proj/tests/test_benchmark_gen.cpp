#include <doctest.h>

#include <cmath>
#include <numeric>

#include "scaledinc/benchmark_gen.hpp"
#include "scaledinc/rng.hpp"

using namespace scaledinc;

TEST_CASE("measure mixing") {
  const Graph g(6, {{0, 1}, {1, 2}, {0, 2}, {3, 4}, {4, 5}, {3, 5}, {2, 3}});
  CHECK(measure_mixing(g, Partition::single_community(6)) == 0.0);
  CHECK(measure_mixing(g, Partition::singletons(6)) == 1.0);
  CHECK(measure_mixing(g, Partition(std::vector<CommunityId>{0, 0, 0, 1, 1, 1})) == 2.0 / 14.0);
  CHECK_THROWS_AS(measure_mixing(Graph(3, {}), Partition::single_community(3)), ValidationError);
}

TEST_CASE("parameter validation") {
  const BenchmarkParams ok;
  CHECK_NOTHROW(ok.validate());
  auto bad = [&](auto mutate) {
    auto p = ok;
    mutate(p);
    CHECK_THROWS_AS(p.validate(), ValidationError);
    CHECK_THROWS_AS(generate_benchmark(p), ValidationError);
  };
  bad([](BenchmarkParams& p) { p.mixing = -0.1; });
  bad([](BenchmarkParams& p) { p.mixing = 1.5; });
  bad([](BenchmarkParams& p) { p.max_degree = 256; });
  bad([](BenchmarkParams& p) { p.avg_degree = 60; });
  bad([](BenchmarkParams& p) { p.min_community = 60; });
  bad([](BenchmarkParams& p) { p.max_community = 300; });
  bad([](BenchmarkParams& p) { p.min_community = 8; });
  bad([](BenchmarkParams& p) { p.degree_exponent = 0.0; });
  bad([](BenchmarkParams& p) { p.community_exponent = -1.0; });
}

TEST_CASE("power-law helpers") {
  const powerlaw::DiscreteSampler s(3, 10, 2.0);
  CHECK(s.sample(0.0) == 3);
  CHECK(s.sample(0.999999999) == 10);
  for (double u = 0.0; u < 1.0; u += 0.01) {
    const auto k = s.sample(u);
    CHECK(k >= 3);
    CHECK(k <= 10);
  }
  double num = 0.0, den = 0.0;
  for (int k = 2; k <= 9; ++k) {
    num += k * std::pow(k, -1.5);
    den += std::pow(k, -1.5);
  }
  CHECK(powerlaw::truncated_mean(2, 9, 1.5) == doctest::Approx(num / den));

  // Empirical frequencies follow the mass function.
  Rng rng(1);
  std::vector<int> counts(11, 0);
  const int draws = 200000;
  for (int i = 0; i < draws; ++i) ++counts[s.sample(uniform_real(rng))];
  double z = 0.0;
  for (int k = 3; k <= 10; ++k) z += std::pow(k, -2.0);
  for (int k = 3; k <= 10; ++k) {
    CHECK(counts[k] / static_cast<double>(draws) == doctest::Approx(std::pow(k, -2.0) / z).epsilon(0.05));
  }
}

TEST_CASE("generated benchmarks respect their contract") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    BenchmarkParams p;
    p.rng_seed = seed;
    const auto b = generate_benchmark(p);
    CHECK(b.graph.node_count() == 256);
    CHECK(b.planted.node_count() == 256);
    const auto& sizes = b.planted.community_sizes();
    CHECK(std::accumulate(sizes.begin(), sizes.end(), std::size_t{0}) == 256);
    for (const auto s : sizes) {
      CHECK(s >= 15);
      CHECK(s <= 51);
    }
    std::size_t max_degree = 0;
    for (NodeId v = 0; v < 256; ++v) {
      max_degree = std::max(max_degree, b.graph.degree(v));
      for (const auto u : b.graph.neighbors(v)) CHECK(u != v);
    }
    CHECK(max_degree <= 50);
    const double mean_degree = static_cast<double>(b.graph.degree_sum()) / 256.0;
    CHECK(mean_degree == doctest::Approx(10.0).epsilon(0.15));
    CHECK(b.achieved_mixing == measure_mixing(b.graph, b.planted));
    CHECK(std::abs(b.achieved_mixing - 0.35) <= 0.05);
  }
}

TEST_CASE("zero mixing keeps every edge inside") {
  BenchmarkParams p;
  p.mixing = 0.0;
  p.rng_seed = 4;
  const auto b = generate_benchmark(p);
  CHECK(b.achieved_mixing == 0.0);
  for (const auto& e : b.graph.edges()) CHECK(b.planted.community_of(e.u) == b.planted.community_of(e.v));
}

TEST_CASE("generation is deterministic") {
  BenchmarkParams p;
  p.rng_seed = 77;
  const auto a = generate_benchmark(p);
  const auto b = generate_benchmark(p);
  CHECK(a.graph == b.graph);
  CHECK(a.planted == b.planted);
  p.rng_seed = 78;
  CHECK_FALSE(generate_benchmark(p).graph == a.graph);
}

TEST_CASE("small custom parameters") {
  BenchmarkParams p;
  p.node_count = 40;
  p.avg_degree = 4;
  p.max_degree = 8;
  p.min_community = 8;
  p.max_community = 20;
  p.mixing = 0.2;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    p.rng_seed = seed;
    const auto b = generate_benchmark(p);
    for (const auto s : b.planted.community_sizes()) {
      CHECK(s >= 8);
      CHECK(s <= 20);
    }
  }
}
