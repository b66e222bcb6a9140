#include "scaledinc/benchmark_gen.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <string>
#include <unordered_set>

#include "scaledinc/rng.hpp"

namespace scaledinc {

void BenchmarkParams::validate() const {
  const auto fail = [](const std::string& what) { throw ValidationError("benchmark: " + what); };
  if (node_count < 2) fail("node_count must be >= 2");
  if (!(mixing >= 0.0 && mixing <= 1.0)) fail("mixing must lie in [0, 1]");
  if (!(avg_degree >= 1.0)) fail("avg_degree must be >= 1");
  if (avg_degree > max_degree) fail("avg_degree must not exceed max_degree");
  if (max_degree >= node_count) fail("max_degree must be < node_count");
  if (min_community < 1) fail("min_community must be >= 1");
  if (min_community > max_community) fail("min_community must not exceed max_community");
  if (max_community > node_count) fail("max_community must not exceed node_count");
  if (!(degree_exponent > 0.0) || !(community_exponent > 0.0)) fail("exponents must be > 0");
  if (min_community < avg_degree) fail("min_community must be >= avg_degree");
}

namespace powerlaw {

double truncated_mean(std::uint32_t lo, std::uint32_t hi, double exponent) {
  double num = 0.0;
  double den = 0.0;
  for (std::uint32_t k = lo; k <= hi; ++k) {
    const double w = std::pow(static_cast<double>(k), -exponent);
    num += k * w;
    den += w;
  }
  return num / den;
}

DiscreteSampler::DiscreteSampler(std::uint32_t lo, std::uint32_t hi, double exponent) : lo_(lo) {
  double total = 0.0;
  for (std::uint32_t k = lo; k <= hi; ++k) {
    total += std::pow(static_cast<double>(k), -exponent);
    cdf_.push_back(total);
  }
  for (auto& c : cdf_) c /= total;
  cdf_.back() = 1.0;
}

std::uint32_t DiscreteSampler::sample(double u) const {
  const auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
  return lo_ + static_cast<std::uint32_t>(std::min<std::ptrdiff_t>(
                   it - cdf_.begin(), static_cast<std::ptrdiff_t>(cdf_.size()) - 1));
}

}  // namespace powerlaw

namespace {

// Degrees from a mixture of the power laws on [lo, k_max] and [lo + 1, k_max]
// chosen so the expected mean equals avg_degree.
std::vector<std::uint32_t> sample_degrees(const BenchmarkParams& p, Rng& rng) {
  using powerlaw::truncated_mean;
  std::uint32_t lo = 1;
  while (lo < p.max_degree &&
         truncated_mean(lo + 1, p.max_degree, p.degree_exponent) <= p.avg_degree) {
    ++lo;
  }
  const double mean_lo = truncated_mean(lo, p.max_degree, p.degree_exponent);
  const std::uint32_t hi_lo = std::min(lo + 1, p.max_degree);
  const double mean_hi = truncated_mean(hi_lo, p.max_degree, p.degree_exponent);
  double weight_lo = 1.0;
  if (mean_hi > mean_lo) weight_lo = std::clamp((mean_hi - p.avg_degree) / (mean_hi - mean_lo), 0.0, 1.0);

  const powerlaw::DiscreteSampler low(lo, p.max_degree, p.degree_exponent);
  const powerlaw::DiscreteSampler high(hi_lo, p.max_degree, p.degree_exponent);
  std::vector<std::uint32_t> degrees(p.node_count);
  for (auto& k : degrees) {
    const bool use_low = uniform_real(rng) < weight_lo;
    k = (use_low ? low : high).sample(uniform_real(rng));
  }
  const auto sum = std::accumulate(degrees.begin(), degrees.end(), std::uint64_t{0});
  if (sum % 2 == 1) {
    for (auto& k : degrees) {
      if (k < p.max_degree) {
        ++k;
        break;
      }
    }
  }
  return degrees;
}

std::optional<std::vector<std::uint32_t>> sample_sizes(const BenchmarkParams& p, Rng& rng) {
  const powerlaw::DiscreteSampler sampler(p.min_community, p.max_community, p.community_exponent);
  std::vector<std::uint32_t> sizes;
  std::int64_t sum = 0;
  while (sum < p.node_count) {
    sizes.push_back(sampler.sample(uniform_real(rng)));
    sum += sizes.back();
  }
  std::vector<std::size_t> order(sizes.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  shuffle(std::span<std::size_t>(order), rng);
  std::int64_t excess = sum - p.node_count;
  for (const auto c : order) {
    const auto cut = std::min<std::int64_t>(excess, sizes[c] - p.min_community);
    sizes[c] -= static_cast<std::uint32_t>(cut);
    excess -= cut;
  }
  if (excess == 0) return sizes;

  // Every community is at the minimum; drop one and grow the rest.
  sizes.pop_back();
  std::int64_t deficit = p.node_count - std::accumulate(sizes.begin(), sizes.end(), std::int64_t{0});
  for (const auto c : order) {
    if (c >= sizes.size()) continue;
    const auto grow = std::min<std::int64_t>(deficit, p.max_community - sizes[c]);
    sizes[c] += static_cast<std::uint32_t>(grow);
    deficit -= grow;
  }
  if (deficit != 0 || sizes.empty()) return std::nullopt;
  return sizes;
}

std::uint32_t intra_degree(std::uint32_t k, double mixing) {
  // Round half up; the epsilon absorbs representation error in (1 - mixing).
  const double target = (1.0 - mixing) * k;
  return static_cast<std::uint32_t>(std::floor(target + 0.5 + 1e-9));
}

std::optional<std::vector<CommunityId>> place_nodes(const std::vector<std::uint32_t>& intra,
                                                    const std::vector<std::uint32_t>& sizes,
                                                    Rng& rng, std::string& failure) {
  const auto n = intra.size();
  std::vector<std::vector<NodeId>> members(sizes.size());
  std::vector<NodeId> homeless(n);
  std::iota(homeless.begin(), homeless.end(), NodeId{0});
  shuffle(std::span<NodeId>(homeless), rng);

  const std::uint64_t budget = 100 * static_cast<std::uint64_t>(n);
  std::uint64_t steps = 0;
  std::vector<std::size_t> fits;
  while (!homeless.empty()) {
    if (++steps > budget) {
      failure = "could not place nodes within 100 x N reassignment steps";
      return std::nullopt;
    }
    const auto v = homeless.back();
    homeless.pop_back();
    fits.clear();
    for (std::size_t c = 0; c < sizes.size(); ++c) {
      if (intra[v] + 1 <= sizes[c]) fits.push_back(c);
    }
    if (fits.empty()) {
      failure = "intra-degree " + std::to_string(intra[v]) +
                " exceeds every community size - 1 (raise max_community or mixing)";
      return std::nullopt;
    }
    const auto c = fits[uniform_index(rng, fits.size())];
    if (members[c].size() < sizes[c]) {
      members[c].push_back(v);
    } else {
      const auto slot = uniform_index(rng, members[c].size());
      homeless.push_back(members[c][slot]);
      members[c][slot] = v;
    }
  }
  std::vector<CommunityId> membership(n);
  for (std::size_t c = 0; c < members.size(); ++c) {
    for (const auto v : members[c]) membership[v] = static_cast<CommunityId>(c);
  }
  return membership;
}

class EdgeSet {
 public:
  explicit EdgeSet(std::uint64_t n) : n_(n) {}
  std::uint64_t key(NodeId a, NodeId b) const {
    return a < b ? a * n_ + b : b * n_ + a;
  }
  bool contains(NodeId a, NodeId b) const { return set_.count(key(a, b)) != 0; }
  void insert(NodeId a, NodeId b) { set_.insert(key(a, b)); }
  void erase(NodeId a, NodeId b) { set_.erase(key(a, b)); }

 private:
  std::uint64_t n_;
  std::unordered_set<std::uint64_t> set_;
};

// Random stub matching followed by degree-preserving swaps that repair
// self-loops, repeated pairs and disallowed pairs. Irreparable pairs are
// dropped.
template <typename Allowed>
void wire(std::vector<NodeId> stubs, const Allowed& allowed, EdgeSet& present,
          std::vector<Edge>& edges, Rng& rng) {
  shuffle(std::span<NodeId>(stubs), rng);
  const auto valid = [&](NodeId a, NodeId b) {
    return a != b && allowed(a, b) && !present.contains(a, b);
  };
  const std::size_t first = edges.size();
  std::vector<Edge> bad;
  for (std::size_t i = 0; i + 1 < stubs.size(); i += 2) {
    const auto a = stubs[i];
    const auto b = stubs[i + 1];
    if (valid(a, b)) {
      present.insert(a, b);
      edges.push_back({a, b});
    } else {
      bad.push_back({a, b});
    }
  }
  constexpr int kAttempts = 200;
  for (const auto& e : bad) {
    for (int attempt = 0; attempt < kAttempts; ++attempt) {
      const auto pool = edges.size() - first;
      if (pool == 0) break;
      auto& other = edges[first + uniform_index(rng, pool)];
      NodeId x = other.u;
      NodeId y = other.v;
      if (uniform_index(rng, 2) == 1) std::swap(x, y);
      // (e.u, e.v) + (x, y) -> (e.u, x) + (e.v, y)
      if (!valid(e.u, x) || !valid(e.v, y)) continue;
      if (std::minmax(e.u, x) == std::minmax(e.v, y)) continue;
      present.erase(other.u, other.v);
      present.insert(e.u, x);
      present.insert(e.v, y);
      other = {e.u, x};
      edges.push_back({e.v, y});
      break;
    }
  }
}

std::optional<PlantedBenchmark> attempt(const BenchmarkParams& p, Rng& rng, std::string& failure) {
  auto degrees = sample_degrees(p, rng);
  const auto sizes = sample_sizes(p, rng);
  if (!sizes) {
    failure = "community sizes in [min_community, max_community] cannot sum to node_count";
    return std::nullopt;
  }
  std::vector<std::uint32_t> intra(p.node_count);
  for (std::size_t v = 0; v < intra.size(); ++v) intra[v] = intra_degree(degrees[v], p.mixing);
  auto membership = place_nodes(intra, *sizes, rng, failure);
  if (!membership) return std::nullopt;

  std::vector<std::vector<NodeId>> members(sizes->size());
  for (NodeId v = 0; v < p.node_count; ++v) members[(*membership)[v]].push_back(v);

  // Intra stub counts must be even per community.
  for (const auto& group : members) {
    std::uint64_t total = 0;
    for (const auto v : group) total += intra[v];
    if (total % 2 == 0) continue;
    bool fixed = false;
    for (const auto v : group) {
      if (intra[v] < degrees[v] && intra[v] + 1 < group.size()) {
        ++intra[v];
        fixed = true;
        break;
      }
    }
    if (!fixed) {
      for (const auto v : group) {
        if (intra[v] > 0) {
          // A fully internal node gives up the edge entirely.
          if (intra[v] == degrees[v]) --degrees[v];
          --intra[v];
          break;
        }
      }
    }
  }

  EdgeSet present(p.node_count);
  std::vector<Edge> edges;
  for (const auto& group : members) {
    std::vector<NodeId> stubs;
    for (const auto v : group) stubs.insert(stubs.end(), intra[v], v);
    wire(std::move(stubs), [](NodeId, NodeId) { return true; }, present, edges, rng);
  }
  std::vector<NodeId> stubs;
  for (NodeId v = 0; v < p.node_count; ++v) stubs.insert(stubs.end(), degrees[v] - intra[v], v);
  const auto& m = *membership;
  wire(std::move(stubs), [&m](NodeId a, NodeId b) { return m[a] != m[b]; }, present, edges, rng);

  PlantedBenchmark out;
  out.graph = Graph(p.node_count, std::move(edges));
  out.planted = Partition(std::move(*membership));
  if (out.graph.edge_count() == 0) {
    failure = "no edges could be wired";
    return std::nullopt;
  }
  out.achieved_mixing = measure_mixing(out.graph, out.planted);
  return out;
}

}  // namespace

PlantedBenchmark generate_benchmark(const BenchmarkParams& params) {
  params.validate();
  Rng rng(params.rng_seed);
  std::string failure;
  constexpr int kRounds = 20;
  for (int round = 0; round < kRounds; ++round) {
    if (auto out = attempt(params, rng, failure)) return std::move(*out);
  }
  throw GenerationError("benchmark generation failed: " + failure);
}

double measure_mixing(const Graph& graph, const Partition& partition) {
  if (partition.node_count() != graph.node_count()) {
    throw ValidationError("partition does not cover the graph's node set");
  }
  if (graph.edge_count() == 0) throw ValidationError("mixing undefined on an edgeless graph");
  std::uint64_t crossing = 0;
  for (const auto& e : graph.edges()) {
    if (partition.community_of(e.u) != partition.community_of(e.v)) ++crossing;
  }
  return static_cast<double>(crossing) / static_cast<double>(graph.edge_count());
}

}  // namespace scaledinc
