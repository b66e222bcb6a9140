#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "scaledinc/graph.hpp"
#include "scaledinc/similarity.hpp"

namespace scaledinc {

// "label<TAB>value" per node in canonical order, 12 significant digits.
void write_score_file(const std::filesystem::path& path, const NodeUniverse& universe,
                      std::span<const double> values);
std::vector<double> load_score_file(const std::filesystem::path& path, const NodeUniverse& universe);

// Jaccard matrix, column sums and weights with fixed 6-decimal formatting.
std::string similarity_report(const JaccardMatrix& j, std::span<const double> weights,
                              std::span<const std::string> names);

// JSON metadata written next to every map file.
struct MapSidecar {
  std::string kind;  // "consistency", "weighted-map", "argmax-map", "signed-map"
  std::string scheme = "scaled";
  std::size_t n = 0;
  std::vector<double> weights;
  std::optional<std::size_t> reference;  // 1-based
  std::optional<CommunityId> community;
  std::optional<double> threshold;
  std::size_t comparisons = 0;
  std::vector<std::string> inputs;
};

void write_sidecar(const std::filesystem::path& path, const MapSidecar& sidecar);

// Writes text verbatim (creating parent directories).
void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace scaledinc
