#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "scaledinc/benchmark_gen.hpp"
#include "scaledinc/consistency.hpp"
#include "scaledinc/modularity.hpp"

namespace scaledinc {

enum class InputKind { generate, edges, seasons };
enum class PartitionSource { detect, planted };

// Everything one end-to-end run depends on. Stored as "key = value" lines;
// serialize() emits every key in a fixed order so a stored config reproduces
// the run.
//
// Seed derivation from the single top-level seed s (see rng.hpp):
//   benchmark i            derive_seed(s, 1, i)
//   detector runs for i    derive_seed(s, 2, i) + run
//   synthetic site layout  derive_seed(s, 3, 0)
struct PipelineConfig {
  InputKind input = InputKind::generate;
  std::uint32_t count = 30;
  BenchmarkParams generator;
  std::vector<std::filesystem::path> edges;
  std::optional<std::filesystem::path> universe;
  std::optional<std::filesystem::path> games;
  std::optional<std::filesystem::path> membership;
  std::optional<std::pair<int, int>> years;
  bool allow_unknown = false;

  PartitionSource partitions = PartitionSource::detect;
  std::uint32_t runs = 10;
  std::uint64_t seed = 1;
  SelectionRule select = SelectionRule::highest_q;

  Scheme scheme = Scheme::scaled;
  double threshold = 0.0;
  std::optional<std::size_t> reference;  // 1-based; unset means every reference
  std::vector<std::pair<std::size_t, CommunityId>> signed_maps;  // (1-based reference, community)

  bool render = false;
  bool png = false;
  std::optional<std::filesystem::path> sites;
  std::optional<std::filesystem::path> boundary;
  std::uint32_t raster_width = 1200;
  std::uint32_t raster_height = 600;

  std::filesystem::path output;

  // Applies one "key = value" assignment. Relative paths resolve against
  // base_dir. Throws ValidationError for unknown keys or bad values.
  void set(const std::string& key, const std::string& value,
           const std::filesystem::path& base_dir = {});
  std::string serialize() const;
  void validate() const;
};

PipelineConfig parse_config(const std::string& text, const std::filesystem::path& base_dir = {});
PipelineConfig load_config(const std::filesystem::path& path);

struct ManifestEntry {
  std::string path;  // relative to the output directory, '/' separated
  std::string sha256;
  std::uintmax_t bytes = 0;
};

struct Manifest {
  std::vector<ManifestEntry> entries;  // sorted by path
};

// Runs input -> detection -> similarity -> consistency -> maps -> render,
// writes manifest.tsv last and returns it. On failure every file written so
// far is removed and the error is rethrown with the stage name prefixed.
Manifest run_pipeline(const PipelineConfig& config);

std::string sha256_hex(const std::filesystem::path& path);

// Parses "WxH".
std::pair<std::uint32_t, std::uint32_t> parse_raster_size(const std::string& text);
SelectionRule parse_selection_rule(const std::string& text);
Scheme parse_scheme(const std::string& text);

}  // namespace scaledinc
