#include "scaledinc/modularity.hpp"

#include <algorithm>
#include <exception>
#include <numeric>

#include "scaledinc/errors.hpp"
#include "scaledinc/rng.hpp"
#include "scaledinc/similarity.hpp"

namespace scaledinc {

ModularityBreakdown modularity(const Graph& graph, const Partition& partition) {
  if (partition.node_count() != graph.node_count()) {
    throw ValidationError("partition does not cover the graph's node set");
  }
  if (graph.edge_count() == 0) throw ValidationError("modularity undefined on an edgeless graph");

  ModularityBreakdown out;
  out.degree_sum = graph.degree_sum();
  out.per_community.resize(partition.community_count());
  for (const auto& e : graph.edges()) {
    const auto cu = partition.community_of(e.u);
    const auto cv = partition.community_of(e.v);
    ++out.per_community[cu].degree_total;
    ++out.per_community[cv].degree_total;
    if (cu == cv) out.per_community[cu].intra_edge_ends += 2;
  }
  const auto m = static_cast<double>(out.degree_sum);
  for (const auto& t : out.per_community) {
    const double a = static_cast<double>(t.degree_total) / m;
    out.total_q += static_cast<double>(t.intra_edge_ends) / m - a * a;
  }
  return out;
}

namespace {

// Weighted graph used between aggregation levels. self_weight holds the
// edge-end count of collapsed intra-community edges.
struct LevelGraph {
  std::vector<std::vector<std::pair<std::uint32_t, std::int64_t>>> adjacency;
  std::vector<std::int64_t> self_weight;
  std::vector<std::int64_t> strength;
};

LevelGraph from_graph(const Graph& graph) {
  LevelGraph g;
  const auto n = graph.node_count();
  g.adjacency.resize(n);
  g.self_weight.assign(n, 0);
  g.strength.assign(n, 0);
  for (NodeId v = 0; v < n; ++v) {
    for (const auto w : graph.neighbors(v)) g.adjacency[v].emplace_back(w, 1);
    g.strength[v] = static_cast<std::int64_t>(graph.degree(v));
  }
  return g;
}

// One round of local moving. Returns the community of every level node,
// relabeled contiguously, and whether anything moved.
bool local_moving(const LevelGraph& g, double total, double min_gain, Rng& rng,
                  std::vector<std::uint32_t>& community) {
  const auto n = g.adjacency.size();
  community.resize(n);
  std::iota(community.begin(), community.end(), 0u);
  std::vector<double> tot(g.strength.begin(), g.strength.end());

  std::vector<std::uint32_t> order(n);
  std::iota(order.begin(), order.end(), 0u);
  shuffle(std::span<std::uint32_t>(order), rng);

  std::vector<double> link(n, 0.0);
  std::vector<std::uint32_t> touched;
  bool any_move = false;
  bool improved = true;
  while (improved) {
    improved = false;
    for (const auto v : order) {
      const auto own = community[v];
      const double k = static_cast<double>(g.strength[v]);
      touched.clear();
      for (const auto& [w, weight] : g.adjacency[v]) {
        const auto c = community[w];
        if (link[c] == 0.0) touched.push_back(c);
        link[c] += static_cast<double>(weight);
      }
      tot[own] -= k;
      // Gain of inserting v (currently isolated) into c, up to the 2/M factor.
      const auto gain = [&](std::uint32_t c) { return link[c] - tot[c] * k / total; };
      const double stay = gain(own);
      double best_gain = stay;
      auto best = own;
      for (const auto c : touched) {
        const double g_c = gain(c);
        if (g_c > best_gain) {
          best_gain = g_c;
          best = c;
        }
      }
      if (best != own && 2.0 * (best_gain - stay) / total > min_gain) {
        community[v] = best;
        improved = true;
        any_move = true;
      }
      tot[community[v]] += k;
      for (const auto c : touched) link[c] = 0.0;
      link[own] = 0.0;
    }
  }

  std::vector<std::uint32_t> relabel(n, UINT32_MAX);
  std::uint32_t next = 0;
  for (auto& c : community) {
    if (relabel[c] == UINT32_MAX) relabel[c] = next++;
    c = relabel[c];
  }
  return any_move;
}

LevelGraph aggregate(const LevelGraph& g, const std::vector<std::uint32_t>& community) {
  const auto count = *std::max_element(community.begin(), community.end()) + 1;
  LevelGraph next;
  next.adjacency.resize(count);
  next.self_weight.assign(count, 0);
  next.strength.assign(count, 0);
  std::vector<std::vector<std::pair<std::uint32_t, std::int64_t>>> raw(count);
  for (std::size_t v = 0; v < g.adjacency.size(); ++v) {
    const auto cv = community[v];
    next.self_weight[cv] += g.self_weight[v];
    next.strength[cv] += g.strength[v];
    for (const auto& [w, weight] : g.adjacency[v]) {
      const auto cw = community[w];
      if (cw == cv) {
        next.self_weight[cv] += weight;  // counted once from each end
      } else {
        raw[cv].emplace_back(cw, weight);
      }
    }
  }
  for (std::size_t c = 0; c < count; ++c) {
    auto& edges = raw[c];
    std::sort(edges.begin(), edges.end());
    for (const auto& [w, weight] : edges) {
      if (!next.adjacency[c].empty() && next.adjacency[c].back().first == w) {
        next.adjacency[c].back().second += weight;
      } else {
        next.adjacency[c].emplace_back(w, weight);
      }
    }
  }
  return next;
}

}  // namespace

Partition GreedyModularityDetector::detect(const Graph& graph, std::uint64_t seed) const {
  if (graph.edge_count() == 0) throw ValidationError("community detection needs at least one edge");
  Rng rng(seed);
  const double total = static_cast<double>(graph.degree_sum());

  std::vector<std::uint32_t> membership(graph.node_count());
  std::iota(membership.begin(), membership.end(), 0u);
  auto level = from_graph(graph);
  std::vector<std::uint32_t> community;
  while (true) {
    const bool moved = local_moving(level, total, min_gain_, rng, community);
    if (!moved) break;
    for (auto& c : membership) c = community[c];
    level = aggregate(level, community);
    if (level.adjacency.size() == 1) break;
  }
  return Partition(std::move(membership));
}

Partition detect_communities(const Graph& graph, std::uint64_t seed) {
  return GreedyModularityDetector{}.detect(graph, seed);
}

std::size_t argmax_lowest_index(std::span<const double> scores) {
  if (scores.empty()) throw ValidationError("argmax of an empty score list");
  std::size_t best = 0;
  for (std::size_t i = 1; i < scores.size(); ++i) {
    if (scores[i] > scores[best]) best = i;
  }
  return best;
}

namespace {

void select_run(DetectionRuns& runs, SelectionRule rule) {
  if (rule == SelectionRule::highest_q || runs.partitions.size() == 1) {
    runs.best_index = argmax_lowest_index(runs.q_values);
    return;
  }
  const auto j = pairwise_jaccard(runs.partitions);
  std::vector<double> sums(j.size());
  for (std::size_t c = 0; c < j.size(); ++c) sums[c] = j.column_sum(c);
  runs.best_index = argmax_lowest_index(sums);
}

void check_config(const DetectorConfig& config) {
  if (config.runs < 1) throw ValidationError("detector runs must be >= 1");
}

}  // namespace

DetectionRuns detection_runs(const Graph& graph, const DetectorConfig& config,
                             const CommunityDetector& detector) {
  check_config(config);
  if (graph.edge_count() == 0) throw ValidationError("community detection needs at least one edge");
  DetectionRuns runs;
  runs.partitions.resize(config.runs);
  runs.q_values.resize(config.runs);
  const auto count = static_cast<std::ptrdiff_t>(config.runs);
  // Exceptions may not escape an OpenMP region; the first one is rethrown.
  std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t r = 0; r < count; ++r) {
    try {
      auto p = detector.detect(graph, config.rng_seed + static_cast<std::uint64_t>(r));
      runs.q_values[r] = modularity(graph, p).total_q;
      runs.partitions[r] = std::move(p);
    } catch (...) {
#pragma omp critical(scaledinc_detect_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  select_run(runs, config.selection_rule);
  return runs;
}

namespace serial {
DetectionRuns detection_runs(const Graph& graph, const DetectorConfig& config,
                             const CommunityDetector& detector) {
  check_config(config);
  DetectionRuns runs;
  for (std::uint32_t r = 0; r < config.runs; ++r) {
    runs.partitions.push_back(detector.detect(graph, config.rng_seed + r));
    runs.q_values.push_back(modularity(graph, runs.partitions.back()).total_q);
  }
  select_run(runs, config.selection_rule);
  return runs;
}
}  // namespace serial

Partition best_partition(const Graph& graph, const DetectorConfig& config,
                         const CommunityDetector& detector) {
  auto runs = detection_runs(graph, config, detector);
  return std::move(runs.partitions[runs.best_index]);
}

Partition best_partition(const Graph& graph, const DetectorConfig& config) {
  return best_partition(graph, config, GreedyModularityDetector{});
}

}  // namespace scaledinc
