#include "scaledinc/ensemble.hpp"

#include <exception>
#include <string>

#include "contingency.hpp"
#include "scaledinc/errors.hpp"

namespace scaledinc {

namespace {

void require_ensemble(std::span<const Partition> partitions) {
  if (partitions.size() < 2) throw ValidationError("ensemble requires n >= 2 partitions");
  for (const auto& p : partitions) {
    if (p.node_count() != partitions.front().node_count()) {
      throw ValidationError("ensemble partitions cover different node counts");
    }
  }
}

WeightedAverageMap combine(std::span<const Partition> partitions, JaccardMatrix jaccard,
                           std::vector<ConsistencyMap> maps) {
  WeightedAverageMap out;
  out.weights = similarity_weights(jaccard);
  out.jaccard = std::move(jaccard);
  out.scores.assign(partitions.front().node_count(), 0.0);
  for (std::size_t i = 0; i < maps.size(); ++i) {
    for (std::size_t v = 0; v < out.scores.size(); ++v) {
      out.scores[v] += out.weights[i] * maps[i].scores[v];
    }
  }
  out.per_reference_maps = std::move(maps);
  return out;
}

}  // namespace

std::vector<ConsistencyMap> reference_maps(std::span<const Partition> partitions) {
  require_ensemble(partitions);
  std::vector<ConsistencyMap> maps(partitions.size());
  const auto n = static_cast<std::ptrdiff_t>(partitions.size());
  std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    try {
      maps[i] = scaled_inclusivity(partitions, static_cast<std::size_t>(i));
    } catch (...) {
#pragma omp critical(scaledinc_reference_maps_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  return maps;
}

WeightedAverageMap weighted_average_map(std::span<const Partition> partitions) {
  auto maps = reference_maps(partitions);
  return combine(partitions, pairwise_jaccard(partitions), std::move(maps));
}

namespace serial {

std::vector<ConsistencyMap> reference_maps(std::span<const Partition> partitions) {
  require_ensemble(partitions);
  std::vector<ConsistencyMap> maps;
  for (std::size_t i = 0; i < partitions.size(); ++i) {
    maps.push_back(scaled_inclusivity(partitions, i));
  }
  return maps;
}

WeightedAverageMap weighted_average_map(std::span<const Partition> partitions) {
  auto maps = serial::reference_maps(partitions);
  return combine(partitions, serial::pairwise_jaccard(partitions), std::move(maps));
}

}  // namespace serial

ArgmaxReferenceMap argmax_reference_map(std::span<const ConsistencyMap> per_reference_maps) {
  if (per_reference_maps.empty()) throw ValidationError("no reference maps");
  const auto v = per_reference_maps.front().scores.size();
  ArgmaxReferenceMap out;
  out.best_reference.assign(v, 1);
  out.best_score = per_reference_maps.front().scores;
  for (std::size_t i = 1; i < per_reference_maps.size(); ++i) {
    const auto& scores = per_reference_maps[i].scores;
    if (scores.size() != v) throw ValidationError("reference maps differ in length");
    for (std::size_t node = 0; node < v; ++node) {
      if (scores[node] > out.best_score[node]) {
        out.best_score[node] = scores[node];
        out.best_reference[node] = static_cast<std::uint32_t>(i + 1);
      }
    }
  }
  return out;
}

ArgmaxReferenceMap argmax_reference_map(std::span<const Partition> partitions) {
  const auto maps = reference_maps(partitions);
  return argmax_reference_map(std::span<const ConsistencyMap>(maps));
}

namespace {

SignedCommunityMap signed_impl(std::span<const Partition> partitions, const Partition& reference,
                               CommunityId q, std::optional<std::size_t> skip) {
  if (q >= reference.community_count()) {
    throw ValidationError("community " + std::to_string(q) + " not in reference (has " +
                          std::to_string(reference.community_count()) + " communities)");
  }
  SignedCommunityMap out;
  out.community_id = q;
  out.reference_index = skip;
  out.scores.assign(reference.node_count(), 0.0);
  for (std::size_t i = 0; i < partitions.size(); ++i) {
    if (skip && *skip == i) continue;
    const auto& compared = partitions[i];
    const detail::Contingency table(compared, reference);
    // X(p, q) for every compared community p; zero where A_p misses R_q.
    std::vector<double> x_of_row(compared.community_count(), 0.0);
    for (const auto& cell : table.cells) {
      if (cell.col == q) x_of_row[cell.row] = cell.value;
    }
    for (std::size_t v = 0; v < out.scores.size(); ++v) {
      const double x = x_of_row[compared.community_of(static_cast<NodeId>(v))];
      if (x == 0.0) continue;
      if (reference.community_of(static_cast<NodeId>(v)) == q) {
        out.scores[v] += x;
      } else {
        out.scores[v] -= x;
      }
    }
    ++out.comparisons;
  }
  if (out.comparisons == 0) throw ValidationError("need at least one non-reference partition");
  return out;
}

}  // namespace

SignedCommunityMap signed_community_map(std::span<const Partition> others,
                                        const Partition& reference, CommunityId community_id) {
  return signed_impl(others, reference, community_id, std::nullopt);
}

SignedCommunityMap signed_community_map(std::span<const Partition> ensemble,
                                        std::size_t reference_index, CommunityId community_id) {
  if (reference_index >= ensemble.size()) {
    throw ValidationError("reference index " + std::to_string(reference_index + 1) +
                          " out of range 1.." + std::to_string(ensemble.size()));
  }
  return signed_impl(ensemble, ensemble[reference_index], community_id, reference_index);
}

}  // namespace scaledinc
