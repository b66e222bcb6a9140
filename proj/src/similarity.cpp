#include "scaledinc/similarity.hpp"

#include <algorithm>
#include <string>

#include "scaledinc/errors.hpp"

namespace scaledinc {

namespace {

std::uint64_t choose2(std::uint64_t s) { return s * (s - (s > 0 ? 1 : 0)) / 2; }

void require_same_universe(const Partition& a, const Partition& b) {
  if (a.node_count() != b.node_count()) {
    throw ValidationError("partitions cover different node counts (" +
                          std::to_string(a.node_count()) + " vs " +
                          std::to_string(b.node_count()) + ")");
  }
}

void require_ensemble(std::span<const Partition> partitions) {
  if (partitions.size() < 2) throw ValidationError("ensemble requires n >= 2 partitions");
  for (const auto& p : partitions) require_same_universe(partitions.front(), p);
}

}  // namespace

CoPairSet copair_set(const Partition& partition) {
  CoPairSet pairs;
  pairs.reserve(copair_count(partition));
  for (const auto& members : all_community_members(partition)) {
    for (std::size_t i = 0; i < members.size(); ++i) {
      for (std::size_t j = i + 1; j < members.size(); ++j) pairs.emplace_back(members[i], members[j]);
    }
  }
  std::sort(pairs.begin(), pairs.end());
  return pairs;
}

std::uint64_t copair_count(const Partition& partition) {
  std::uint64_t total = 0;
  for (const auto s : partition.community_sizes()) total += choose2(s);
  return total;
}

double jaccard_similarity(const Partition& a, const Partition& b) {
  require_same_universe(a, b);
  // A pair is shared iff both nodes sit in the same cell of the contingency
  // table, so |S_a ∩ S_b| = sum over cells of C(n_pq, 2).
  const std::uint64_t cols = b.community_count();
  std::vector<std::uint64_t> cells(a.node_count());
  for (std::size_t i = 0; i < cells.size(); ++i) {
    cells[i] = a.community_of(static_cast<NodeId>(i)) * cols + b.community_of(static_cast<NodeId>(i));
  }
  std::sort(cells.begin(), cells.end());
  std::uint64_t shared = 0;
  for (std::size_t i = 0; i < cells.size();) {
    std::size_t j = i;
    while (j < cells.size() && cells[j] == cells[i]) ++j;
    shared += choose2(j - i);
    i = j;
  }
  const auto joined = copair_count(a) + copair_count(b) - shared;
  if (joined == 0) return 1.0;
  return static_cast<double>(shared) / static_cast<double>(joined);
}

double JaccardMatrix::column_sum(std::size_t col) const {
  double sum = 0.0;
  for (std::size_t row = 0; row < n_; ++row) sum += (*this)(row, col);
  return sum;
}

JaccardMatrix pairwise_jaccard(std::span<const Partition> partitions) {
  require_ensemble(partitions);
  const auto n = partitions.size();
  JaccardMatrix j(n);
  const auto pairs = static_cast<std::ptrdiff_t>(n * (n - 1) / 2);
  // Linear pair index k -> (row, col); each entry is written by one iteration.
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t k = 0; k < pairs; ++k) {
    std::size_t row = 0;
    auto rest = static_cast<std::size_t>(k);
    while (rest >= n - 1 - row) {
      rest -= n - 1 - row;
      ++row;
    }
    const auto col = row + 1 + rest;
    j.set_symmetric(row, col, jaccard_similarity(partitions[row], partitions[col]));
  }
  return j;
}

namespace serial {
JaccardMatrix pairwise_jaccard(std::span<const Partition> partitions) {
  require_ensemble(partitions);
  JaccardMatrix j(partitions.size());
  for (std::size_t c = 0; c < partitions.size(); ++c) {
    for (std::size_t d = c + 1; d < partitions.size(); ++d) {
      j.set_symmetric(c, d, jaccard_similarity(partitions[c], partitions[d]));
    }
  }
  return j;
}
}  // namespace serial

std::vector<double> similarity_weights(const JaccardMatrix& j) {
  const auto n = j.size();
  if (n < 2) throw ValidationError("similarity weights require n >= 2");
  std::vector<double> sums(n);
  double total = 0.0;
  for (std::size_t c = 0; c < n; ++c) {
    sums[c] = j.column_sum(c);
    total += sums[c];
  }
  if (total <= 0.0) return std::vector<double>(n, 1.0 / static_cast<double>(n));
  for (auto& s : sums) s /= total;
  return sums;
}

}  // namespace scaledinc
