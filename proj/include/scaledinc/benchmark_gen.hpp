#pragma once

#include <cstdint>

#include "scaledinc/errors.hpp"
#include "scaledinc/graph.hpp"

namespace scaledinc {

// Planted-partition benchmark with power-law degrees and community sizes.
// Defaults are the 256-node setting used for the simulated ensemble.
struct BenchmarkParams {
  std::uint32_t node_count = 256;
  double mixing = 0.35;
  double avg_degree = 10.0;
  std::uint32_t max_degree = 50;
  std::uint32_t min_community = 15;
  std::uint32_t max_community = 51;
  double degree_exponent = 2.0;
  double community_exponent = 1.0;
  std::uint64_t rng_seed = 0;

  // Throws ValidationError naming the first violated constraint.
  void validate() const;
};

struct PlantedBenchmark {
  Graph graph;
  Partition planted;
  double achieved_mixing = 0.0;
};

class GenerationError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

// Steps: degrees from a truncated discrete power law whose mean matches
// avg_degree; community sizes from a truncated power law summing to
// node_count; nodes placed so that each node's intra-degree
// round((1 - mixing) * k) fits its community; intra- and inter-community
// stubs paired at random, then edge swaps remove self-loops and multi-edges.
// Stubs that cannot be placed after the swap budget are dropped, so the
// realized mixing is measured afterwards.
PlantedBenchmark generate_benchmark(const BenchmarkParams& params);

// Fraction of edge ends that cross community boundaries. Throws
// ValidationError for an edgeless graph.
double measure_mixing(const Graph& graph, const Partition& partition);

// Exposed for testing.
namespace powerlaw {

// Mean of P(k) ∝ k^-exponent on the integers [lo, hi].
double truncated_mean(std::uint32_t lo, std::uint32_t hi, double exponent);

// Inverse-transform sampler for P(k) ∝ k^-exponent on [lo, hi].
class DiscreteSampler {
 public:
  DiscreteSampler(std::uint32_t lo, std::uint32_t hi, double exponent);
  // u in [0, 1).
  std::uint32_t sample(double u) const;
  std::uint32_t lo() const { return lo_; }

 private:
  std::uint32_t lo_;
  std::vector<double> cdf_;
};

}  // namespace powerlaw

}  // namespace scaledinc
