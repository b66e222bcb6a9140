#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "scaledinc/graph.hpp"

namespace scaledinc {

// Community-by-community similarity between a compared partition (rows, A_p)
// and a reference partition (columns, R_q):
//
//   X(p, q) = (|A_p ∩ R_q| / |A_p|) * (|A_p ∩ R_q| / |R_q|)
//
// Intersections are kept as exact integer counts; the single division happens
// in value().
class OverlapMatrix {
 public:
  OverlapMatrix(std::vector<std::vector<NodeId>> row_sets,
                std::vector<std::vector<NodeId>> col_sets,
                std::vector<std::uint64_t> intersections);

  std::size_t rows() const { return row_sets_.size(); }
  std::size_t cols() const { return col_sets_.size(); }
  std::uint64_t intersection(std::size_t p, std::size_t q) const {
    return intersections_[p * cols() + q];
  }
  double value(std::size_t p, std::size_t q) const;
  const std::vector<std::vector<NodeId>>& row_sets() const { return row_sets_; }
  const std::vector<std::vector<NodeId>>& col_sets() const { return col_sets_; }

 private:
  std::vector<std::vector<NodeId>> row_sets_;
  std::vector<std::vector<NodeId>> col_sets_;
  std::vector<std::uint64_t> intersections_;
};

// Throws ValidationError if the partitions cover different node counts.
OverlapMatrix overlap_matrix(const Partition& compared, const Partition& reference);

// The X(p, q) value of (p, q) = (compared community, reference community)
// of one node. Exact in the sense that it equals OverlapMatrix::value.
double overlap_value(std::uint64_t intersection, std::uint64_t row_size, std::uint64_t col_size);

enum class Scheme { binary_exclusive, binary_inclusive, scaled };

// The recording vector: one accumulated score per node.
struct ConsistencyMap {
  std::vector<double> scores;
  Scheme scheme = Scheme::scaled;
  std::optional<std::size_t> reference_index;  // 0-based, when taken from an ensemble
  std::size_t comparisons = 0;
};

// Column-max matching. For each reference community, the compared community
// with the largest X (lowest row index on ties) is its best match. Every node
// of a best-matching community gains 1 per comparison, once even if that
// community is the best match of several reference communities.
ConsistencyMap binary_exclusivity(std::span<const Partition> others, const Partition& reference);

// Every node in A_p ∩ R_q with X(p, q) > threshold gains 1 per comparison.
// Throws ValidationError if threshold is outside [0, 1].
ConsistencyMap binary_inclusivity(std::span<const Partition> others, const Partition& reference,
                                  double threshold = 0.0);

// Every node in A_p ∩ R_q gains X(p, q) per comparison.
ConsistencyMap scaled_inclusivity(std::span<const Partition> others, const Partition& reference);

// Ensemble forms: partition reference_index is the reference and every other
// partition is compared against it.
ConsistencyMap binary_exclusivity(std::span<const Partition> ensemble, std::size_t reference_index);
ConsistencyMap binary_inclusivity(std::span<const Partition> ensemble, std::size_t reference_index,
                                  double threshold = 0.0);
ConsistencyMap scaled_inclusivity(std::span<const Partition> ensemble, std::size_t reference_index);

ConsistencyMap consistency_map(std::span<const Partition> ensemble, std::size_t reference_index,
                               Scheme scheme, double threshold = 0.0);

const char* scheme_name(Scheme scheme);

}  // namespace scaledinc
