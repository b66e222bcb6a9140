#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

namespace scaledinc {

using NodeId = std::uint32_t;
using CommunityId = std::uint32_t;

// Undirected edge stored with u < v.
struct Edge {
  NodeId u;
  NodeId v;

  friend bool operator==(const Edge&, const Edge&) = default;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

// Undirected, unweighted, simple graph over nodes [0, node_count).
//
// Edges are normalized on construction: each pair is stored once with u < v,
// sorted, duplicates (in either orientation) collapsed. Self-loops and
// out-of-range endpoints are rejected. Adjacency is kept in CSR form.
class Graph {
 public:
  Graph() = default;
  Graph(std::size_t node_count, std::vector<Edge> edges);

  std::size_t node_count() const { return node_count_; }
  std::size_t edge_count() const { return edges_.size(); }
  const std::vector<Edge>& edges() const { return edges_; }

  // Twice the edge count; the sum of all degrees.
  std::uint64_t degree_sum() const { return 2 * static_cast<std::uint64_t>(edges_.size()); }

  std::size_t degree(NodeId node) const { return offsets_[node + 1] - offsets_[node]; }
  std::span<const NodeId> neighbors(NodeId node) const {
    return {adjacency_.data() + offsets_[node], degree(node)};
  }
  bool has_edge(NodeId a, NodeId b) const;

  friend bool operator==(const Graph& a, const Graph& b) {
    return a.node_count_ == b.node_count_ && a.edges_ == b.edges_;
  }

 private:
  std::size_t node_count_ = 0;
  std::vector<Edge> edges_;
  std::vector<std::size_t> offsets_{0};
  std::vector<NodeId> adjacency_;
};

// Assignment of every node to exactly one community. Community ids are
// contiguous in [0, community_count) and every id is used.
class Partition {
 public:
  Partition() = default;
  // Arbitrary ids are remapped to contiguous ids in ascending order of the
  // original id, so {2, 9} becomes {0, 1}.
  explicit Partition(std::span<const std::int64_t> raw_ids);
  explicit Partition(std::vector<CommunityId> membership);

  static Partition single_community(std::size_t node_count);
  static Partition singletons(std::size_t node_count);

  std::size_t node_count() const { return membership_.size(); }
  std::size_t community_count() const { return sizes_.size(); }
  CommunityId community_of(NodeId node) const { return membership_[node]; }
  const std::vector<CommunityId>& membership() const { return membership_; }
  const std::vector<std::size_t>& community_sizes() const { return sizes_; }

  friend bool operator==(const Partition& a, const Partition& b) {
    return a.membership_ == b.membership_;
  }

 private:
  std::vector<CommunityId> membership_;
  std::vector<std::size_t> sizes_;
};

// Sorted node indices of one community. Throws ValidationError for an
// out-of-range id.
std::vector<NodeId> community_members(const Partition& partition, CommunityId id);

// All communities' members at once, each sorted ascending.
std::vector<std::vector<NodeId>> all_community_members(const Partition& partition);

// Stable string labels, one per node index.
class NodeUniverse {
 public:
  NodeUniverse() = default;
  explicit NodeUniverse(std::vector<std::string> labels);

  // Appends a label if absent; returns its index either way.
  NodeId intern(const std::string& label);

  std::size_t size() const { return labels_.size(); }
  const std::string& label(NodeId node) const { return labels_[node]; }
  const std::vector<std::string>& labels() const { return labels_; }
  std::optional<NodeId> find(const std::string& label) const;

  friend bool operator==(const NodeUniverse& a, const NodeUniverse& b) {
    return a.labels_ == b.labels_;
  }

 private:
  std::vector<std::string> labels_;
  std::unordered_map<std::string, NodeId> index_;
};

struct LabeledGraph {
  Graph graph;
  NodeUniverse universe;
};

struct LabeledPartition {
  Partition partition;
  NodeUniverse universe;
};

// Edge list: one "labelA<TAB>labelB" per line, '#' comment lines allowed.
// Without a universe, nodes are numbered in order of first appearance. With
// one, every label must belong to it and isolated nodes are kept.
LabeledGraph load_edge_list(const std::filesystem::path& path);
LabeledGraph load_edge_list(const std::filesystem::path& path, const NodeUniverse& universe);
void write_edge_list(const std::filesystem::path& path, const Graph& graph,
                     const NodeUniverse& universe);

// Partition file: "label<TAB>integer_id" per line, every universe label once.
Partition load_partition(const std::filesystem::path& path, const NodeUniverse& universe);
// Infers the universe from the file's label order.
LabeledPartition load_partition(const std::filesystem::path& path);
void write_partition(const std::filesystem::path& path, const Partition& partition,
                     const NodeUniverse& universe);

// Node-universe file: one label per line.
NodeUniverse load_universe(const std::filesystem::path& path);
void write_universe(const std::filesystem::path& path, const NodeUniverse& universe);

}  // namespace scaledinc
