#pragma once

// Sparse contingency table between two partitions over the same nodes.
// Only nonzero cells are stored.

#include <algorithm>
#include <cstdint>
#include <vector>

#include "scaledinc/consistency.hpp"
#include "scaledinc/errors.hpp"
#include "scaledinc/graph.hpp"

namespace scaledinc::detail {

struct Cell {
  CommunityId row;  // compared community p
  CommunityId col;  // reference community q
  std::uint64_t count;
  double value;  // X(p, q)
};

struct Contingency {
  std::vector<Cell> cells;             // sorted by (row, col)
  std::vector<std::uint32_t> cell_of;  // per node

  Contingency(const Partition& compared, const Partition& reference) {
    if (compared.node_count() != reference.node_count()) {
      throw ValidationError("partitions cover different node counts");
    }
    const auto n = compared.node_count();
    const std::uint64_t cols = reference.community_count();
    std::vector<std::uint64_t> keys(n);
    for (std::size_t i = 0; i < n; ++i) {
      keys[i] = compared.community_of(static_cast<NodeId>(i)) * cols +
                reference.community_of(static_cast<NodeId>(i));
    }
    auto sorted = keys;
    std::sort(sorted.begin(), sorted.end());
    std::vector<std::uint64_t> distinct;
    for (std::size_t i = 0; i < n;) {
      std::size_t j = i;
      while (j < n && sorted[j] == sorted[i]) ++j;
      const auto row = static_cast<CommunityId>(sorted[i] / cols);
      const auto col = static_cast<CommunityId>(sorted[i] % cols);
      const auto count = static_cast<std::uint64_t>(j - i);
      cells.push_back({row, col, count,
                       overlap_value(count, compared.community_sizes()[row],
                                     reference.community_sizes()[col])});
      distinct.push_back(sorted[i]);
      i = j;
    }
    cell_of.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      cell_of[i] = static_cast<std::uint32_t>(
          std::lower_bound(distinct.begin(), distinct.end(), keys[i]) - distinct.begin());
    }
  }

  const Cell& cell_for(std::size_t node) const { return cells[cell_of[node]]; }
};

}  // namespace scaledinc::detail
