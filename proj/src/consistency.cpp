#include "scaledinc/consistency.hpp"

#include <string>

#include "contingency.hpp"
#include "scaledinc/errors.hpp"

namespace scaledinc {

OverlapMatrix::OverlapMatrix(std::vector<std::vector<NodeId>> row_sets,
                             std::vector<std::vector<NodeId>> col_sets,
                             std::vector<std::uint64_t> intersections)
    : row_sets_(std::move(row_sets)),
      col_sets_(std::move(col_sets)),
      intersections_(std::move(intersections)) {
  if (intersections_.size() != row_sets_.size() * col_sets_.size()) {
    throw ValidationError("overlap matrix shape mismatch");
  }
}

double OverlapMatrix::value(std::size_t p, std::size_t q) const {
  return overlap_value(intersection(p, q), row_sets_[p].size(), col_sets_[q].size());
}

double overlap_value(std::uint64_t intersection, std::uint64_t row_size, std::uint64_t col_size) {
  // Numerator and denominator are exact integers below 2^53 for any
  // realistic node count, so the result is the correctly rounded quotient.
  return static_cast<double>(intersection * intersection) /
         static_cast<double>(row_size * col_size);
}

OverlapMatrix overlap_matrix(const Partition& compared, const Partition& reference) {
  if (compared.node_count() != reference.node_count()) {
    throw ValidationError("partitions cover different node counts");
  }
  const auto cols = reference.community_count();
  std::vector<std::uint64_t> counts(compared.community_count() * cols, 0);
  for (std::size_t i = 0; i < compared.node_count(); ++i) {
    const auto node = static_cast<NodeId>(i);
    ++counts[compared.community_of(node) * cols + reference.community_of(node)];
  }
  return OverlapMatrix(all_community_members(compared), all_community_members(reference),
                       std::move(counts));
}

const char* scheme_name(Scheme scheme) {
  switch (scheme) {
    case Scheme::binary_exclusive:
      return "exclusive";
    case Scheme::binary_inclusive:
      return "inclusive";
    case Scheme::scaled:
      return "scaled";
  }
  return "?";
}

namespace {

void check_threshold(double threshold) {
  if (!(threshold >= 0.0 && threshold <= 1.0)) {
    throw ValidationError("threshold must lie in [0, 1], got " + std::to_string(threshold));
  }
}

// Adds one comparison's contribution to scores.
void accumulate(Scheme scheme, double threshold, const Partition& compared,
                const Partition& reference, std::vector<double>& scores) {
  const detail::Contingency table(compared, reference);
  switch (scheme) {
    case Scheme::scaled:
      for (std::size_t i = 0; i < scores.size(); ++i) scores[i] += table.cell_for(i).value;
      break;
    case Scheme::binary_inclusive:
      for (std::size_t i = 0; i < scores.size(); ++i) {
        if (table.cell_for(i).value > threshold) scores[i] += 1.0;
      }
      break;
    case Scheme::binary_exclusive: {
      // Column maxima. Cells are visited in ascending row order, so a strict
      // comparison keeps the lowest row on ties.
      const auto cols = reference.community_count();
      std::vector<const detail::Cell*> best(cols, nullptr);
      for (const auto& cell : table.cells) {
        if (best[cell.col] == nullptr || cell.value > best[cell.col]->value) best[cell.col] = &cell;
      }
      std::vector<bool> matched(compared.community_count(), false);
      for (const auto* cell : best) {
        if (cell != nullptr) matched[cell->row] = true;
      }
      for (std::size_t i = 0; i < scores.size(); ++i) {
        if (matched[compared.community_of(static_cast<NodeId>(i))]) scores[i] += 1.0;
      }
      break;
    }
  }
}

ConsistencyMap run(Scheme scheme, double threshold, std::span<const Partition> partitions,
                   const Partition& reference, std::optional<std::size_t> skip) {
  if (scheme == Scheme::binary_inclusive) check_threshold(threshold);
  ConsistencyMap map;
  map.scheme = scheme;
  map.reference_index = skip;
  map.scores.assign(reference.node_count(), 0.0);
  for (std::size_t i = 0; i < partitions.size(); ++i) {
    if (skip && *skip == i) continue;
    if (partitions[i].node_count() != reference.node_count()) {
      throw ValidationError("partition " + std::to_string(i + 1) +
                            " covers a different node count than the reference");
    }
    accumulate(scheme, threshold, partitions[i], reference, map.scores);
    ++map.comparisons;
  }
  if (map.comparisons == 0) throw ValidationError("need at least one non-reference partition");
  return map;
}

ConsistencyMap run_ensemble(Scheme scheme, double threshold, std::span<const Partition> ensemble,
                            std::size_t reference_index) {
  if (reference_index >= ensemble.size()) {
    throw ValidationError("reference index " + std::to_string(reference_index + 1) +
                          " out of range 1.." + std::to_string(ensemble.size()));
  }
  return run(scheme, threshold, ensemble, ensemble[reference_index], reference_index);
}

}  // namespace

ConsistencyMap binary_exclusivity(std::span<const Partition> others, const Partition& reference) {
  return run(Scheme::binary_exclusive, 0.0, others, reference, std::nullopt);
}

ConsistencyMap binary_inclusivity(std::span<const Partition> others, const Partition& reference,
                                  double threshold) {
  return run(Scheme::binary_inclusive, threshold, others, reference, std::nullopt);
}

ConsistencyMap scaled_inclusivity(std::span<const Partition> others, const Partition& reference) {
  return run(Scheme::scaled, 0.0, others, reference, std::nullopt);
}

ConsistencyMap binary_exclusivity(std::span<const Partition> ensemble, std::size_t reference_index) {
  return run_ensemble(Scheme::binary_exclusive, 0.0, ensemble, reference_index);
}

ConsistencyMap binary_inclusivity(std::span<const Partition> ensemble, std::size_t reference_index,
                                  double threshold) {
  return run_ensemble(Scheme::binary_inclusive, threshold, ensemble, reference_index);
}

ConsistencyMap scaled_inclusivity(std::span<const Partition> ensemble, std::size_t reference_index) {
  return run_ensemble(Scheme::scaled, 0.0, ensemble, reference_index);
}

ConsistencyMap consistency_map(std::span<const Partition> ensemble, std::size_t reference_index,
                               Scheme scheme, double threshold) {
  return run_ensemble(scheme, threshold, ensemble, reference_index);
}

}  // namespace scaledinc
