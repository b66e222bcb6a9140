#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "scaledinc/consistency.hpp"
#include "scaledinc/graph.hpp"
#include "scaledinc/similarity.hpp"

namespace scaledinc {

// Scaled-inclusivity map with each partition in turn as the reference; map i
// aggregates the n - 1 comparisons against partition i. Maps are computed
// concurrently. Requires n >= 2.
std::vector<ConsistencyMap> reference_maps(std::span<const Partition> partitions);

struct WeightedAverageMap {
  std::vector<double> scores;
  std::vector<double> weights;
  JaccardMatrix jaccard;
  std::vector<ConsistencyMap> per_reference_maps;
};

// Per-reference maps averaged with the normalized Jaccard column sums as
// weights: scores[v] = sum_i weights[i] * map_i[v], summed in index order.
WeightedAverageMap weighted_average_map(std::span<const Partition> partitions);

struct ArgmaxReferenceMap {
  std::vector<std::uint32_t> best_reference;  // 1-based partition index
  std::vector<double> best_score;
};

// Per node, the reference whose scaled map scores it highest. Ties go to
// the earliest partition.
ArgmaxReferenceMap argmax_reference_map(std::span<const Partition> partitions);
ArgmaxReferenceMap argmax_reference_map(std::span<const ConsistencyMap> per_reference_maps);

struct SignedCommunityMap {
  std::vector<double> scores;
  std::optional<std::size_t> reference_index;
  CommunityId community_id = 0;
  std::size_t comparisons = 0;
};

// For reference community R_q and each compared community A_p overlapping it,
// nodes of A_p ∩ R_q gain X(p, q) and nodes of A_p outside R_q lose X(p, q).
// Positive scores therefore only occur inside R_q and negative ones only
// outside. Throws ValidationError for an invalid community id.
SignedCommunityMap signed_community_map(std::span<const Partition> others,
                                        const Partition& reference, CommunityId community_id);
SignedCommunityMap signed_community_map(std::span<const Partition> ensemble,
                                        std::size_t reference_index, CommunityId community_id);

namespace serial {
std::vector<ConsistencyMap> reference_maps(std::span<const Partition> partitions);
WeightedAverageMap weighted_average_map(std::span<const Partition> partitions);
}  // namespace serial

}  // namespace scaledinc
