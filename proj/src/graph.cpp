#include "scaledinc/graph.hpp"

#include <algorithm>
#include <map>

#include "scaledinc/errors.hpp"
#include "scaledinc/text_io.hpp"

namespace scaledinc {

Graph::Graph(std::size_t node_count, std::vector<Edge> edges) : node_count_(node_count) {
  for (auto& e : edges) {
    if (e.u >= node_count || e.v >= node_count) {
      throw ValidationError("edge endpoint out of range [0, " + std::to_string(node_count) + ")");
    }
    if (e.u == e.v) throw ValidationError("self-loop on node " + std::to_string(e.u));
    if (e.u > e.v) std::swap(e.u, e.v);
  }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  edges_ = std::move(edges);

  offsets_.assign(node_count_ + 1, 0);
  for (const auto& e : edges_) {
    ++offsets_[e.u + 1];
    ++offsets_[e.v + 1];
  }
  for (std::size_t i = 0; i < node_count_; ++i) offsets_[i + 1] += offsets_[i];
  adjacency_.resize(offsets_.back());
  auto cursor = offsets_;
  for (const auto& e : edges_) {
    adjacency_[cursor[e.u]++] = e.v;
    adjacency_[cursor[e.v]++] = e.u;
  }
  for (std::size_t i = 0; i < node_count_; ++i) {
    std::sort(adjacency_.begin() + static_cast<std::ptrdiff_t>(offsets_[i]),
              adjacency_.begin() + static_cast<std::ptrdiff_t>(offsets_[i + 1]));
  }
}

bool Graph::has_edge(NodeId a, NodeId b) const {
  const auto n = neighbors(a);
  return std::binary_search(n.begin(), n.end(), b);
}

Partition::Partition(std::span<const std::int64_t> raw_ids) {
  std::vector<std::int64_t> distinct(raw_ids.begin(), raw_ids.end());
  std::sort(distinct.begin(), distinct.end());
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
  membership_.reserve(raw_ids.size());
  sizes_.assign(distinct.size(), 0);
  for (const auto id : raw_ids) {
    const auto c = static_cast<CommunityId>(
        std::lower_bound(distinct.begin(), distinct.end(), id) - distinct.begin());
    membership_.push_back(c);
    ++sizes_[c];
  }
}

namespace {
std::vector<std::int64_t> widen(const std::vector<CommunityId>& ids) {
  return {ids.begin(), ids.end()};
}
}  // namespace

Partition::Partition(std::vector<CommunityId> membership)
    : Partition(std::span<const std::int64_t>(widen(membership))) {}

Partition Partition::single_community(std::size_t node_count) {
  return Partition(std::vector<CommunityId>(node_count, 0));
}

Partition Partition::singletons(std::size_t node_count) {
  std::vector<CommunityId> ids(node_count);
  for (std::size_t i = 0; i < node_count; ++i) ids[i] = static_cast<CommunityId>(i);
  return Partition(std::move(ids));
}

std::vector<NodeId> community_members(const Partition& partition, CommunityId id) {
  if (id >= partition.community_count()) {
    throw ValidationError("community id " + std::to_string(id) + " out of range [0, " +
                          std::to_string(partition.community_count()) + ")");
  }
  std::vector<NodeId> out;
  out.reserve(partition.community_sizes()[id]);
  const auto& m = partition.membership();
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (m[i] == id) out.push_back(static_cast<NodeId>(i));
  }
  return out;
}

std::vector<std::vector<NodeId>> all_community_members(const Partition& partition) {
  std::vector<std::vector<NodeId>> out(partition.community_count());
  for (std::size_t c = 0; c < out.size(); ++c) out[c].reserve(partition.community_sizes()[c]);
  const auto& m = partition.membership();
  for (std::size_t i = 0; i < m.size(); ++i) out[m[i]].push_back(static_cast<NodeId>(i));
  return out;
}

NodeUniverse::NodeUniverse(std::vector<std::string> labels) {
  for (auto& label : labels) {
    if (index_.count(label) != 0) throw ValidationError("duplicate node label '" + label + "'");
    intern(label);
  }
}

NodeId NodeUniverse::intern(const std::string& label) {
  const auto [it, inserted] = index_.try_emplace(label, static_cast<NodeId>(labels_.size()));
  if (inserted) labels_.push_back(label);
  return it->second;
}

std::optional<NodeId> NodeUniverse::find(const std::string& label) const {
  const auto it = index_.find(label);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

namespace {

LabeledGraph load_edges_impl(const std::filesystem::path& path, NodeUniverse universe,
                             bool fixed_universe) {
  const auto lines = text::read_lines(path);
  const auto name = path.string();
  std::vector<Edge> edges;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (text::is_skippable(lines[i])) continue;
    const auto fields = text::split_fields(lines[i]);
    if (fields.size() != 2 || fields[0].empty() || fields[1].empty()) {
      throw ParseError(name, i + 1, "expected 'labelA<TAB>labelB'");
    }
    if (fields[0] == fields[1]) throw ParseError(name, i + 1, "self-loop on '" + fields[0] + "'");
    NodeId ends[2];
    for (int k = 0; k < 2; ++k) {
      if (fixed_universe) {
        const auto id = universe.find(fields[k]);
        if (!id) throw ParseError(name, i + 1, "label '" + fields[k] + "' not in node universe");
        ends[k] = *id;
      } else {
        ends[k] = universe.intern(fields[k]);
      }
    }
    edges.push_back({ends[0], ends[1]});
  }
  if (edges.empty()) throw ValidationError(name + ": no edges");
  const auto n = universe.size();
  return {Graph(n, std::move(edges)), std::move(universe)};
}

}  // namespace

LabeledGraph load_edge_list(const std::filesystem::path& path) {
  return load_edges_impl(path, NodeUniverse{}, false);
}

LabeledGraph load_edge_list(const std::filesystem::path& path, const NodeUniverse& universe) {
  return load_edges_impl(path, universe, true);
}

void write_edge_list(const std::filesystem::path& path, const Graph& graph,
                     const NodeUniverse& universe) {
  auto out = text::open_output(path);
  for (const auto& e : graph.edges()) {
    out << universe.label(e.u) << '\t' << universe.label(e.v) << '\n';
  }
  if (!out) throw IoError("write failure on '" + path.string() + "'");
}

namespace {

struct RawAssignment {
  std::string label;
  std::int64_t id;
  std::size_t line;
};

std::vector<RawAssignment> read_assignments(const std::filesystem::path& path) {
  const auto lines = text::read_lines(path);
  const auto name = path.string();
  std::vector<RawAssignment> rows;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (text::is_skippable(lines[i])) continue;
    const auto fields = text::split_fields(lines[i]);
    if (fields.size() != 2 || fields[0].empty()) {
      throw ParseError(name, i + 1, "expected 'label<TAB>community_id'");
    }
    rows.push_back({fields[0], text::parse_integer(fields[1], name, i + 1), i + 1});
  }
  return rows;
}

}  // namespace

Partition load_partition(const std::filesystem::path& path, const NodeUniverse& universe) {
  const auto name = path.string();
  const auto rows = read_assignments(path);
  std::vector<std::int64_t> raw(universe.size());
  std::vector<bool> seen(universe.size(), false);
  for (const auto& row : rows) {
    const auto id = universe.find(row.label);
    if (!id) throw ParseError(name, row.line, "unknown label '" + row.label + "'");
    if (seen[*id]) throw ParseError(name, row.line, "duplicate label '" + row.label + "'");
    seen[*id] = true;
    raw[*id] = row.id;
  }
  for (std::size_t i = 0; i < seen.size(); ++i) {
    if (!seen[i]) throw ValidationError(name + ": missing node '" + universe.label(i) + "'");
  }
  if (raw.empty()) throw ValidationError(name + ": empty partition");
  return Partition(std::span<const std::int64_t>(raw));
}

LabeledPartition load_partition(const std::filesystem::path& path) {
  const auto name = path.string();
  const auto rows = read_assignments(path);
  NodeUniverse universe;
  std::vector<std::int64_t> raw;
  for (const auto& row : rows) {
    if (universe.find(row.label)) {
      throw ParseError(name, row.line, "duplicate label '" + row.label + "'");
    }
    universe.intern(row.label);
    raw.push_back(row.id);
  }
  if (raw.empty()) throw ValidationError(name + ": empty partition");
  return {Partition(std::span<const std::int64_t>(raw)), std::move(universe)};
}

void write_partition(const std::filesystem::path& path, const Partition& partition,
                     const NodeUniverse& universe) {
  if (partition.node_count() != universe.size()) {
    throw ValidationError("partition/universe size mismatch");
  }
  auto out = text::open_output(path);
  for (std::size_t i = 0; i < partition.node_count(); ++i) {
    out << universe.label(static_cast<NodeId>(i)) << '\t' << partition.community_of(i) << '\n';
  }
  if (!out) throw IoError("write failure on '" + path.string() + "'");
}

NodeUniverse load_universe(const std::filesystem::path& path) {
  const auto lines = text::read_lines(path);
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (text::is_skippable(lines[i])) continue;
    labels.emplace_back(text::trim(lines[i]));
  }
  if (labels.empty()) throw ValidationError(path.string() + ": empty node universe");
  return NodeUniverse(std::move(labels));
}

void write_universe(const std::filesystem::path& path, const NodeUniverse& universe) {
  auto out = text::open_output(path);
  for (const auto& label : universe.labels()) out << label << '\n';
  if (!out) throw IoError("write failure on '" + path.string() + "'");
}

}  // namespace scaledinc
