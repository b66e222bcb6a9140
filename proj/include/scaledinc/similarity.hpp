#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "scaledinc/graph.hpp"

namespace scaledinc {

// Unordered node pairs (q, r), q < r, that share a community. Sorted.
using CoPairSet = std::vector<std::pair<NodeId, NodeId>>;

CoPairSet copair_set(const Partition& partition);

// Number of co-membership pairs, sum_j C(s_j, 2).
std::uint64_t copair_count(const Partition& partition);

// |S_a ∩ S_b| / |S_a ∪ S_b| over co-membership pair sets. Independent of
// community numbering. Defined as 1 when both pair sets are empty.
// Throws ValidationError on a node-count mismatch.
double jaccard_similarity(const Partition& a, const Partition& b);

// Symmetric n x n matrix with zero diagonal.
class JaccardMatrix {
 public:
  JaccardMatrix() = default;
  explicit JaccardMatrix(std::size_t n) : n_(n), values_(n * n, 0.0) {}

  std::size_t size() const { return n_; }
  double operator()(std::size_t row, std::size_t col) const { return values_[row * n_ + col]; }
  void set_symmetric(std::size_t row, std::size_t col, double value) {
    values_[row * n_ + col] = value;
    values_[col * n_ + row] = value;
  }
  // Sum of column j, accumulated in row order.
  double column_sum(std::size_t col) const;

  friend bool operator==(const JaccardMatrix&, const JaccardMatrix&) = default;

 private:
  std::size_t n_ = 0;
  std::vector<double> values_;
};

// Entry (c, d) = jaccard_similarity(partitions[c], partitions[d]) for c != d.
// Requires at least two partitions. Pairs are evaluated concurrently.
JaccardMatrix pairwise_jaccard(std::span<const Partition> partitions);

// Column sums of J normalized to sum to one. An all-zero matrix yields
// uniform weights.
std::vector<double> similarity_weights(const JaccardMatrix& j);

namespace serial {
JaccardMatrix pairwise_jaccard(std::span<const Partition> partitions);
}  // namespace serial

}  // namespace scaledinc
