#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "scaledinc/graph.hpp"

namespace scaledinc {

// Per-community terms of the Newman-Girvan modularity
//
//   Q = sum_i [ e_ii / M - (a_i / M)^2 ]
//
// where M is the degree sum (twice the edge count), a_i the total degree of
// community i, and e_ii the number of intra-community edge *ends*: every edge
// with both endpoints in i contributes 2. With that convention the
// single-community partition has Q = 0 exactly.
struct CommunityTerms {
  std::uint64_t intra_edge_ends = 0;
  std::uint64_t degree_total = 0;
};

struct ModularityBreakdown {
  std::vector<CommunityTerms> per_community;
  std::uint64_t degree_sum = 0;
  double total_q = 0.0;
};

// Throws ValidationError for an edgeless graph or a size mismatch.
ModularityBreakdown modularity(const Graph& graph, const Partition& partition);

// A nondeterministic community detector. Implementations must be pure
// functions of (graph, seed) and safe to call concurrently.
class CommunityDetector {
 public:
  virtual ~CommunityDetector() = default;
  virtual Partition detect(const Graph& graph, std::uint64_t seed) const = 0;
};

// Multi-level greedy agglomerative modularity maximizer (local moving followed
// by community aggregation, repeated). The seed fixes the node visiting order
// at every level. A move or level is accepted only if it raises Q by more than
// min_gain.
class GreedyModularityDetector final : public CommunityDetector {
 public:
  explicit GreedyModularityDetector(double min_gain = 1e-12) : min_gain_(min_gain) {}
  Partition detect(const Graph& graph, std::uint64_t seed) const override;

 private:
  double min_gain_;
};

// Runs the default detector. Throws ValidationError for an edgeless graph.
Partition detect_communities(const Graph& graph, std::uint64_t seed);

enum class SelectionRule { highest_q, max_summed_jaccard };

struct DetectorConfig {
  std::uint32_t runs = 10;
  std::uint64_t rng_seed = 0;
  SelectionRule selection_rule = SelectionRule::highest_q;
};

struct DetectionRuns {
  std::vector<Partition> partitions;  // run r used seed rng_seed + r
  std::vector<double> q_values;
  std::size_t best_index = 0;

  const Partition& best() const { return partitions[best_index]; }
};

// Index of the maximal score; ties go to the lowest index. Throws
// ValidationError for an empty list.
std::size_t argmax_lowest_index(std::span<const double> scores);

// Runs the detector config.runs times (concurrently) and selects one run.
DetectionRuns detection_runs(const Graph& graph, const DetectorConfig& config,
                             const CommunityDetector& detector);
Partition best_partition(const Graph& graph, const DetectorConfig& config,
                         const CommunityDetector& detector);
Partition best_partition(const Graph& graph, const DetectorConfig& config);

namespace serial {
DetectionRuns detection_runs(const Graph& graph, const DetectorConfig& config,
                             const CommunityDetector& detector);
}  // namespace serial

}  // namespace scaledinc
