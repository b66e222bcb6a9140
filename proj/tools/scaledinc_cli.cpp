#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "scaledinc/benchmark_gen.hpp"
#include "scaledinc/consistency.hpp"
#include "scaledinc/ensemble.hpp"
#include "scaledinc/errors.hpp"
#include "scaledinc/geo.hpp"
#include "scaledinc/graph.hpp"
#include "scaledinc/modularity.hpp"
#include "scaledinc/pipeline.hpp"
#include "scaledinc/reports.hpp"
#include "scaledinc/rng.hpp"
#include "scaledinc/seasons.hpp"
#include "scaledinc/similarity.hpp"
#include "scaledinc/text_io.hpp"

namespace fs = std::filesystem;
using namespace scaledinc;

namespace {

std::string padded(std::size_t value, std::size_t total) {
  const auto width = std::max<std::size_t>(2, std::to_string(total).size());
  auto s = std::to_string(value);
  return std::string(width > s.size() ? width - s.size() : 0, '0') + s;
}

std::vector<std::string> stems(const std::vector<std::string>& paths) {
  std::vector<std::string> out;
  for (const auto& p : paths) out.push_back(fs::path(p).stem().string());
  return out;
}

struct Ensemble {
  NodeUniverse universe;
  std::vector<Partition> partitions;
};

// The first file fixes the node order unless a universe file is given.
Ensemble load_ensemble(const std::vector<std::string>& files, const std::string& universe_path) {
  Ensemble e;
  std::size_t start = 0;
  if (!universe_path.empty()) {
    e.universe = load_universe(universe_path);
  } else {
    auto first = load_partition(files.at(0));
    e.universe = std::move(first.universe);
    e.partitions.push_back(std::move(first.partition));
    start = 1;
  }
  for (std::size_t i = start; i < files.size(); ++i) e.partitions.push_back(load_partition(files[i], e.universe));
  if (e.partitions.size() < 2) throw ValidationError("ensemble requires n >= 2 partitions");
  return e;
}

fs::path sidecar_path(const std::string& out) { return fs::path(out).replace_extension(".json"); }

void write_map(const std::string& out, const NodeUniverse& universe, std::span<const double> values,
               const MapSidecar& meta) {
  write_score_file(out, universe, values);
  write_sidecar(sidecar_path(out), meta);
}

std::size_t to_index(std::size_t reference, std::size_t n) {
  if (reference < 1 || reference > n) {
    throw ValidationError("--reference must lie in [1, " + std::to_string(n) + "]");
  }
  return reference - 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Node-level consistency of community structure across network ensembles"};
  app.require_subcommand(1);

  // generate
  auto* gen = app.add_subcommand("generate", "planted-partition benchmark series");
  BenchmarkParams params;
  std::uint32_t gen_count = 1;
  std::uint64_t gen_seed = 1;
  std::string gen_dir;
  gen->add_option("--nodes", params.node_count, "node count")->capture_default_str();
  gen->add_option("--mixing", params.mixing, "mixing parameter")->capture_default_str();
  gen->add_option("--avg-degree", params.avg_degree, "average degree")->capture_default_str();
  gen->add_option("--max-degree", params.max_degree, "maximum degree")->capture_default_str();
  gen->add_option("--min-community", params.min_community, "smallest community")->capture_default_str();
  gen->add_option("--max-community", params.max_community, "largest community")->capture_default_str();
  gen->add_option("--degree-exponent", params.degree_exponent, "degree exponent")->capture_default_str();
  gen->add_option("--community-exponent", params.community_exponent, "community size exponent")
      ->capture_default_str();
  gen->add_option("--count", gen_count, "number of realizations")->capture_default_str();
  gen->add_option("--seed", gen_seed, "top-level seed")->capture_default_str();
  gen->add_option("--out-dir", gen_dir, "output directory")->required();

  // detect
  auto* det = app.add_subcommand("detect", "best-of-g modularity partitions");
  std::vector<std::string> det_inputs;
  DetectorConfig det_config;
  std::uint64_t det_seed = 1;
  std::string det_select = "q", det_universe, det_dir;
  det->add_option("graphs", det_inputs, "edge-list files")->required();
  det->add_option("--runs", det_config.runs, "detector runs per graph")->capture_default_str();
  det->add_option("--seed", det_seed, "top-level seed")->capture_default_str();
  det->add_option("--select", det_select, "q or jaccard")->capture_default_str();
  det->add_option("--universe", det_universe, "node universe file");
  det->add_option("--out-dir", det_dir, "output directory")->required();

  // similarity
  auto* sim = app.add_subcommand("similarity", "pairwise Jaccard matrix and weights");
  std::vector<std::string> sim_inputs;
  std::string sim_universe, sim_out;
  sim->add_option("partitions", sim_inputs, "partition files")->required();
  sim->add_option("--universe", sim_universe, "node universe file");
  sim->add_option("--out", sim_out, "report file (default stdout)");

  // consistency
  auto* con = app.add_subcommand("consistency", "per-node consistency against one reference");
  std::vector<std::string> con_inputs;
  std::size_t con_reference = 1;
  std::string con_scheme = "scaled", con_universe, con_out;
  double con_threshold = 0.0;
  con->add_option("partitions", con_inputs, "partition files")->required();
  con->add_option("--reference", con_reference, "1-based reference index")->capture_default_str();
  con->add_option("--scheme", con_scheme, "exclusive, inclusive or scaled")->capture_default_str();
  con->add_option("--threshold", con_threshold, "inclusivity threshold")->capture_default_str();
  con->add_option("--universe", con_universe, "node universe file");
  con->add_option("--out", con_out, "score file")->required();

  // weighted-map / argmax-map
  auto* wmap = app.add_subcommand("weighted-map", "Jaccard-weighted average of reference maps");
  auto* amap = app.add_subcommand("argmax-map", "best reference per node");
  std::vector<std::string> map_inputs;
  std::string map_universe, map_out;
  for (auto* sub : {wmap, amap}) {
    sub->add_option("partitions", map_inputs, "partition files")->required();
    sub->add_option("--universe", map_universe, "node universe file");
    sub->add_option("--out", map_out, "score file")->required();
  }

  // signed-map
  auto* smap = app.add_subcommand("signed-map", "signed map of one reference community");
  std::size_t smap_reference = 1;
  CommunityId smap_community = 0;
  smap->add_option("partitions", map_inputs, "partition files")->required();
  smap->add_option("--reference", smap_reference, "1-based reference index")->required();
  smap->add_option("--community", smap_community, "community id in the reference")->required();
  smap->add_option("--universe", map_universe, "node universe file");
  smap->add_option("--out", map_out, "score file")->required();

  // ingest-seasons
  auto* ing = app.add_subcommand("ingest-seasons", "season schedules to networks and ground truths");
  std::string ing_games, ing_membership, ing_years, ing_dir;
  bool ing_allow_unknown = false;
  ing->add_option("--games", ing_games, "games CSV")->required();
  ing->add_option("--membership", ing_membership, "membership CSV")->required();
  ing->add_option("--years", ing_years, "first:last");
  ing->add_flag("--allow-unknown", ing_allow_unknown, "drop games with unknown teams");
  ing->add_option("--out-dir", ing_dir, "output directory")->required();

  // render
  auto* ren = app.add_subcommand("render", "choropleth of node values");
  std::string ren_coords, ren_boundary, ren_values, ren_palette = "sequential", ren_raster = "1200x600",
                                                    ren_out, ren_png, ren_title;
  ren->add_option("--coords", ren_coords, "coordinates file")->required();
  ren->add_option("--values", ren_values, "label<TAB>value file")->required();
  ren->add_option("--boundary", ren_boundary, "boundary polygons");
  ren->add_option("--palette", ren_palette, "sequential, diverging or categorical")->capture_default_str();
  ren->add_option("--raster", ren_raster, "WxH")->capture_default_str();
  ren->add_option("--title", ren_title, "legend title");
  ren->add_option("--out", ren_out, "SVG file")->required();
  ren->add_option("--png", ren_png, "also write a PNG");

  // pipeline
  auto* pip = app.add_subcommand("pipeline", "end-to-end run from one config");
  std::string pip_config, pip_out;
  std::vector<std::string> pip_overrides;
  pip->add_option("--config", pip_config, "key = value config file");
  pip->add_option("--set", pip_overrides, "key=value override (repeatable)");
  pip->add_option("--out", pip_out, "output directory (overrides config)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (*gen) {
      if (gen_count < 1) throw ValidationError("--count must be >= 1");
      params.validate();
      NodeUniverse universe;
      for (std::uint32_t i = 0; i < params.node_count; ++i) {
        universe.intern("n" + padded(i + 1, params.node_count));
      }
      const fs::path dir(gen_dir);
      write_universe(dir / "universe.nodes", universe);
      for (std::uint32_t i = 0; i < gen_count; ++i) {
        auto p = params;
        p.rng_seed = derive_seed(gen_seed, 1, i);
        const auto bench = generate_benchmark(p);
        const auto stem = "real_" + padded(i + 1, gen_count);
        write_edge_list(dir / (stem + ".edges"), bench.graph, universe);
        write_partition(dir / (stem + ".truth.part"), bench.planted, universe);
        std::printf("%s\tmixing=%.4f\tcommunities=%zu\n", stem.c_str(), bench.achieved_mixing,
                    bench.planted.community_count());
      }
    } else if (*det) {
      det_config.selection_rule = parse_selection_rule(det_select);
      std::optional<NodeUniverse> fixed;
      if (!det_universe.empty()) fixed = load_universe(det_universe);
      for (std::size_t i = 0; i < det_inputs.size(); ++i) {
        auto lg = fixed ? load_edge_list(det_inputs[i], *fixed)
                        : load_edge_list(det_inputs[i]);
        det_config.rng_seed = derive_seed(det_seed, 2, i);
        const auto runs = detection_runs(lg.graph, det_config, GreedyModularityDetector{});
        const auto out = fs::path(det_dir) / (fs::path(det_inputs[i]).stem().string() + ".part");
        write_partition(out, runs.best(), lg.universe);
        std::printf("%s\tQ=%.6f\tcommunities=%zu\n", out.string().c_str(), runs.q_values[runs.best_index],
                    runs.best().community_count());
      }
    } else if (*sim) {
      const auto e = load_ensemble(sim_inputs, sim_universe);
      const auto j = pairwise_jaccard(e.partitions);
      const auto report = similarity_report(j, similarity_weights(j), stems(sim_inputs));
      if (sim_out.empty()) {
        std::cout << report;
      } else {
        write_text(sim_out, report);
      }
    } else if (*con) {
      const auto e = load_ensemble(con_inputs, con_universe);
      const auto scheme = parse_scheme(con_scheme);
      const auto r = to_index(con_reference, e.partitions.size());
      const auto map = consistency_map(e.partitions, r, scheme, con_threshold);
      MapSidecar meta{"consistency", scheme_name(scheme), e.partitions.size(), {}, con_reference,
                      std::nullopt, std::nullopt, map.comparisons, stems(con_inputs)};
      if (scheme == Scheme::binary_inclusive) meta.threshold = con_threshold;
      write_map(con_out, e.universe, map.scores, meta);
    } else if (*wmap) {
      const auto e = load_ensemble(map_inputs, map_universe);
      const auto map = weighted_average_map(e.partitions);
      write_map(map_out, e.universe, map.scores,
                {"weighted-map", "scaled", e.partitions.size(), map.weights, std::nullopt, std::nullopt,
                 std::nullopt, e.partitions.size() - 1, stems(map_inputs)});
    } else if (*amap) {
      const auto e = load_ensemble(map_inputs, map_universe);
      const auto map = argmax_reference_map(e.partitions);
      const std::vector<double> values(map.best_reference.begin(), map.best_reference.end());
      write_map(map_out, e.universe, values,
                {"argmax-map", "scaled", e.partitions.size(), {}, std::nullopt, std::nullopt, std::nullopt,
                 e.partitions.size() - 1, stems(map_inputs)});
    } else if (*smap) {
      const auto e = load_ensemble(map_inputs, map_universe);
      const auto r = to_index(smap_reference, e.partitions.size());
      const auto map = signed_community_map(e.partitions, r, smap_community);
      write_map(map_out, e.universe, map.scores,
                {"signed-map", "scaled", e.partitions.size(), {}, smap_reference, smap_community,
                 std::nullopt, map.comparisons, stems(map_inputs)});
    } else if (*ing) {
      std::optional<std::pair<int, int>> years;
      if (!ing_years.empty()) years = parse_year_range(ing_years);
      const auto data = load_seasons(ing_games, ing_membership, years);
      const fs::path dir(ing_dir);
      write_universe(dir / "universe.nodes", data.universe);
      for (const auto& season : data.seasons) {
        const auto net = build_season_network(season, data.universe, ing_allow_unknown);
        const auto stem = "season_" + std::to_string(season.year);
        write_edge_list(dir / (stem + ".edges"), net.graph, data.universe);
        write_partition(dir / (stem + ".truth.part"), net.ground_truth, data.universe);
        std::printf("%d\tedges=%zu\tdropped_games=%zu\n", season.year, net.graph.edge_count(),
                    net.dropped_games);
      }
      std::ostringstream table;
      table << "year\tconference\tsize\n";
      for (const auto& row : conference_size_table(data.seasons)) {
        table << row.year << '\t' << row.conference << '\t' << row.size << '\n';
      }
      write_text(dir / "conference_sizes.tsv", table.str());
    } else if (*ren) {
      Palette palette;
      if (ren_palette == "sequential") palette = Palette::sequential;
      else if (ren_palette == "diverging") palette = Palette::diverging;
      else if (ren_palette == "categorical") palette = Palette::categorical;
      else throw ValidationError("--palette must be sequential, diverging or categorical");
      const auto [w, h] = parse_raster_size(ren_raster);
      auto sites = load_sites(ren_coords);
      const auto values = load_score_file(ren_values, sites.universe);
      GeoLayout layout{sites.coordinates, ren_boundary.empty() ? bounding_boundary(sites.coordinates)
                                                               : load_boundary(ren_boundary)};
      const auto raster = voronoi_raster(layout, w, h);
      const auto rendered = render_scalar_map(raster, values, palette, ren_title);
      write_text(ren_out, rendered.svg);
      if (!ren_png.empty()) write_png(ren_png, rendered.image);
    } else if (*pip) {
      PipelineConfig config;
      if (!pip_config.empty()) config = load_config(pip_config);
      for (const auto& item : pip_overrides) {
        const auto eq = item.find('=');
        if (eq == std::string::npos) throw ValidationError("--set expects key=value, got '" + item + "'");
        config.set(std::string(text::trim(std::string_view(item).substr(0, eq))),
                   std::string(text::trim(std::string_view(item).substr(eq + 1))));
      }
      if (!pip_out.empty()) config.output = pip_out;
      const auto manifest = run_pipeline(config);
      std::printf("wrote %zu artifacts to %s\n", manifest.entries.size(), config.output.string().c_str());
    }
  } catch (const IoError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const ValidationError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
