#include "scaledinc/pipeline.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <cstdio>
#include <exception>
#include <fstream>
#include <map>
#include <sstream>

#include "scaledinc/ensemble.hpp"
#include "scaledinc/errors.hpp"
#include "scaledinc/geo.hpp"
#include "scaledinc/reports.hpp"
#include "scaledinc/rng.hpp"
#include "scaledinc/seasons.hpp"
#include "scaledinc/similarity.hpp"
#include "scaledinc/text_io.hpp"

namespace scaledinc {

namespace fs = std::filesystem;

std::pair<std::uint32_t, std::uint32_t> parse_raster_size(const std::string& text) {
  const auto x = text.find('x');
  if (x == std::string::npos) throw ValidationError("raster size must look like 1200x600");
  const auto w = text::parse_integer(text.substr(0, x), "raster", 1);
  const auto h = text::parse_integer(text.substr(x + 1), "raster", 1);
  if (w <= 0 || h <= 0 || w > 20000 || h > 20000) throw ValidationError("raster size out of range");
  return {static_cast<std::uint32_t>(w), static_cast<std::uint32_t>(h)};
}

SelectionRule parse_selection_rule(const std::string& text) {
  if (text == "q") return SelectionRule::highest_q;
  if (text == "jaccard") return SelectionRule::max_summed_jaccard;
  throw ValidationError("selection rule must be 'q' or 'jaccard', got '" + text + "'");
}

Scheme parse_scheme(const std::string& text) {
  if (text == "exclusive") return Scheme::binary_exclusive;
  if (text == "inclusive") return Scheme::binary_inclusive;
  if (text == "scaled") return Scheme::scaled;
  throw ValidationError("scheme must be exclusive, inclusive or scaled, got '" + text + "'");
}

namespace {

bool parse_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ValidationError(key + ": expected true or false, got '" + v + "'");
}

long long parse_int(const std::string& key, const std::string& v) {
  return text::parse_integer(v, key, 1);
}

double parse_double(const std::string& key, const std::string& v) {
  return text::parse_real(v, key, 1);
}

std::uint32_t parse_u32(const std::string& key, const std::string& v) {
  const auto x = parse_int(key, v);
  if (x < 0 || x > static_cast<long long>(UINT32_MAX)) throw ValidationError(key + ": out of range");
  return static_cast<std::uint32_t>(x);
}

fs::path resolve(const fs::path& base, const std::string& v) {
  const fs::path p(v);
  return p.is_absolute() || base.empty() ? p : base / p;
}

std::string real(double v) { return text::format_general(v, 17); }

}  // namespace

void PipelineConfig::set(const std::string& key, const std::string& value, const fs::path& base) {
  const auto& v = value;
  if (key == "input") {
    if (v == "generate") input = InputKind::generate;
    else if (v == "edges") input = InputKind::edges;
    else if (v == "seasons") input = InputKind::seasons;
    else throw ValidationError("input must be generate, edges or seasons");
  } else if (key == "count") {
    count = parse_u32(key, v);
  } else if (key == "generator.node_count") {
    generator.node_count = parse_u32(key, v);
  } else if (key == "generator.mixing") {
    generator.mixing = parse_double(key, v);
  } else if (key == "generator.avg_degree") {
    generator.avg_degree = parse_double(key, v);
  } else if (key == "generator.max_degree") {
    generator.max_degree = parse_u32(key, v);
  } else if (key == "generator.min_community") {
    generator.min_community = parse_u32(key, v);
  } else if (key == "generator.max_community") {
    generator.max_community = parse_u32(key, v);
  } else if (key == "generator.degree_exponent") {
    generator.degree_exponent = parse_double(key, v);
  } else if (key == "generator.community_exponent") {
    generator.community_exponent = parse_double(key, v);
  } else if (key == "edges") {
    edges.clear();
    for (const auto& item : text::split_on(v, ',')) {
      if (!item.empty()) edges.push_back(resolve(base, item));
    }
  } else if (key == "universe") {
    universe = resolve(base, v);
  } else if (key == "games") {
    games = resolve(base, v);
  } else if (key == "membership") {
    membership = resolve(base, v);
  } else if (key == "years") {
    years = parse_year_range(v);
  } else if (key == "allow_unknown") {
    allow_unknown = parse_bool(key, v);
  } else if (key == "partitions") {
    if (v == "detect") partitions = PartitionSource::detect;
    else if (v == "planted") partitions = PartitionSource::planted;
    else throw ValidationError("partitions must be detect or planted");
  } else if (key == "runs") {
    runs = parse_u32(key, v);
  } else if (key == "seed") {
    const auto s = parse_int(key, v);
    if (s < 0) throw ValidationError("seed must be non-negative");
    seed = static_cast<std::uint64_t>(s);
  } else if (key == "select") {
    select = parse_selection_rule(v);
  } else if (key == "scheme") {
    scheme = parse_scheme(v);
  } else if (key == "threshold") {
    threshold = parse_double(key, v);
  } else if (key == "reference") {
    if (v == "all") {
      reference.reset();
    } else {
      const auto r = parse_int(key, v);
      if (r < 1) throw ValidationError("reference is 1-based");
      reference = static_cast<std::size_t>(r);
    }
  } else if (key == "signed") {
    signed_maps.clear();
    for (const auto& item : text::split_on(v, ',')) {
      if (item.empty()) continue;
      const auto parts = text::split_on(item, ':');
      if (parts.size() != 2) throw ValidationError("signed entries look like reference:community");
      const auto r = parse_int(key, parts[0]);
      const auto c = parse_int(key, parts[1]);
      if (r < 1 || c < 0) throw ValidationError("signed: reference is 1-based, community >= 0");
      signed_maps.emplace_back(static_cast<std::size_t>(r), static_cast<CommunityId>(c));
    }
  } else if (key == "render") {
    render = parse_bool(key, v);
  } else if (key == "png") {
    png = parse_bool(key, v);
  } else if (key == "sites") {
    sites = resolve(base, v);
  } else if (key == "boundary") {
    boundary = resolve(base, v);
  } else if (key == "raster") {
    std::tie(raster_width, raster_height) = parse_raster_size(v);
  } else if (key == "output") {
    output = resolve(base, v);
  } else {
    throw ValidationError("unknown config key '" + key + "'");
  }
}

std::string PipelineConfig::serialize() const {
  std::ostringstream out;
  const char* input_name[] = {"generate", "edges", "seasons"};
  out << "input = " << input_name[static_cast<int>(input)] << '\n';
  out << "count = " << count << '\n';
  out << "generator.node_count = " << generator.node_count << '\n';
  out << "generator.mixing = " << real(generator.mixing) << '\n';
  out << "generator.avg_degree = " << real(generator.avg_degree) << '\n';
  out << "generator.max_degree = " << generator.max_degree << '\n';
  out << "generator.min_community = " << generator.min_community << '\n';
  out << "generator.max_community = " << generator.max_community << '\n';
  out << "generator.degree_exponent = " << real(generator.degree_exponent) << '\n';
  out << "generator.community_exponent = " << real(generator.community_exponent) << '\n';
  out << "edges = ";
  for (std::size_t i = 0; i < edges.size(); ++i) out << (i ? "," : "") << edges[i].string();
  out << '\n';
  if (universe) out << "universe = " << universe->string() << '\n';
  if (games) out << "games = " << games->string() << '\n';
  if (membership) out << "membership = " << membership->string() << '\n';
  if (years) out << "years = " << years->first << ':' << years->second << '\n';
  out << "allow_unknown = " << (allow_unknown ? "true" : "false") << '\n';
  out << "partitions = " << (partitions == PartitionSource::detect ? "detect" : "planted") << '\n';
  out << "runs = " << runs << '\n';
  out << "seed = " << seed << '\n';
  out << "select = " << (select == SelectionRule::highest_q ? "q" : "jaccard") << '\n';
  out << "scheme = " << scheme_name(scheme) << '\n';
  out << "threshold = " << real(threshold) << '\n';
  out << "reference = " << (reference ? std::to_string(*reference) : "all") << '\n';
  out << "signed = ";
  for (std::size_t i = 0; i < signed_maps.size(); ++i) {
    out << (i ? "," : "") << signed_maps[i].first << ':' << signed_maps[i].second;
  }
  out << '\n';
  out << "render = " << (render ? "true" : "false") << '\n';
  out << "png = " << (png ? "true" : "false") << '\n';
  if (sites) out << "sites = " << sites->string() << '\n';
  if (boundary) out << "boundary = " << boundary->string() << '\n';
  out << "raster = " << raster_width << 'x' << raster_height << '\n';
  out << "output = " << output.string() << '\n';
  return out.str();
}

void PipelineConfig::validate() const {
  if (output.empty()) throw ValidationError("config: output directory not set");
  if (runs < 1) throw ValidationError("config: runs must be >= 1");
  if (scheme == Scheme::binary_inclusive && !(threshold >= 0.0 && threshold <= 1.0)) {
    throw ValidationError("config: threshold must lie in [0, 1]");
  }
  switch (input) {
    case InputKind::generate:
      if (count < 2) throw ValidationError("ensemble requires n >= 2");
      generator.validate();
      break;
    case InputKind::edges:
      if (edges.size() < 2) throw ValidationError("ensemble requires n >= 2");
      if (partitions == PartitionSource::planted) {
        throw ValidationError("config: planted partitions need generate or seasons input");
      }
      break;
    case InputKind::seasons:
      if (!games || !membership) throw ValidationError("config: seasons input needs games and membership");
      break;
  }
  if (render && input != InputKind::generate && !sites) {
    throw ValidationError("config: rendering edge-list or season input needs a sites file");
  }
}

PipelineConfig parse_config(const std::string& text, const fs::path& base_dir) {
  PipelineConfig config;
  std::istringstream in(text);
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (text::is_skippable(line)) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ParseError("config", number, "expected 'key = value'");
    const std::string key(text::trim(std::string_view(line).substr(0, eq)));
    const std::string value(text::trim(std::string_view(line).substr(eq + 1)));
    try {
      config.set(key, value, base_dir);
    } catch (const ParseError&) {
      throw;
    } catch (const ValidationError& e) {
      throw ParseError("config", number, e.what());
    }
  }
  return config;
}

PipelineConfig load_config(const fs::path& path) {
  std::ostringstream text;
  text << text::open_input(path).rdbuf();
  return parse_config(text.str(), path.parent_path());
}

std::string sha256_hex(const fs::path& path) {
  auto in = text::open_input(path);
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), &EVP_MD_CTX_free);
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1) {
    throw IoError("sha256 initialization failed");
  }
  std::ifstream file(path, std::ios::binary);
  char buf[1 << 15];
  while (file.read(buf, sizeof buf) || file.gcount() > 0) {
    EVP_DigestUpdate(ctx.get(), buf, static_cast<std::size_t>(file.gcount()));
  }
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_DigestFinal_ex(ctx.get(), digest, &len);
  std::string hex;
  for (unsigned int i = 0; i < len; ++i) {
    char b[3];
    std::snprintf(b, sizeof b, "%02x", digest[i]);
    hex += b;
  }
  return hex;
}

namespace {

// Files written by one run, so a failed run can remove them.
class Artifacts {
 public:
  explicit Artifacts(fs::path root) : root_(std::move(root)) {}

  fs::path add(const std::string& relative) {
    written_.push_back(relative);
    return root_ / relative;
  }

  void remove_all() noexcept {
    std::error_code ec;
    for (const auto& rel : written_) fs::remove(root_ / rel, ec);
    for (const auto* dir : {"realizations", "partitions", "consistency", "maps", "render"}) {
      fs::remove(root_ / dir, ec);  // only succeeds when empty
    }
  }

  Manifest manifest() const {
    Manifest m;
    for (const auto& rel : written_) {
      m.entries.push_back({rel, sha256_hex(root_ / rel), fs::file_size(root_ / rel)});
    }
    std::sort(m.entries.begin(), m.entries.end(),
              [](const auto& a, const auto& b) { return a.path < b.path; });
    m.entries.erase(std::unique(m.entries.begin(), m.entries.end(),
                                [](const auto& a, const auto& b) { return a.path == b.path; }),
                    m.entries.end());
    return m;
  }

 private:
  fs::path root_;
  std::vector<std::string> written_;
};

std::string padded(std::size_t value, std::size_t total) {
  const auto width = std::max<std::size_t>(2, std::to_string(total).size());
  auto s = std::to_string(value);
  return std::string(width > s.size() ? width - s.size() : 0, '0') + s;
}

struct Ensemble {
  NodeUniverse universe;
  std::vector<std::string> names;
  std::vector<Graph> graphs;
  std::vector<Partition> truths;  // empty when unknown
  std::vector<GeoPoint> coordinates;  // empty unless a layout exists
};

template <typename Fn>
void stage(const char* name, Fn&& fn) {
  try {
    fn();
  } catch (const IoError& e) {
    throw IoError(std::string("stage '") + name + "': " + e.what());
  } catch (const ValidationError& e) {
    throw ValidationError(std::string("stage '") + name + "': " + e.what());
  }
}

Ensemble generate_input(const PipelineConfig& c, Artifacts& out) {
  Ensemble ens;
  std::vector<PlantedBenchmark> benches(c.count);
  std::exception_ptr failure;
  const auto count = static_cast<std::ptrdiff_t>(c.count);
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t i = 0; i < count; ++i) {
    try {
      auto params = c.generator;
      params.rng_seed = derive_seed(c.seed, 1, static_cast<std::uint64_t>(i));
      benches[i] = generate_benchmark(params);
    } catch (...) {
#pragma omp critical(scaledinc_pipeline_generate)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);

  const auto n = c.generator.node_count;
  const bool geographic = c.render || c.sites.has_value();
  if (geographic) {
    if (c.sites) {
      auto sites = load_sites(*c.sites);
      if (sites.coordinates.size() != n) {
        throw ValidationError("sites file has " + std::to_string(sites.coordinates.size()) +
                              " sites but benchmarks have " + std::to_string(n) + " nodes");
      }
      ens.universe = std::move(sites.universe);
      ens.coordinates = std::move(sites.coordinates);
    } else {
      Rng rng(derive_seed(c.seed, 3, 0));
      for (std::uint32_t i = 0; i < n; ++i) {
        ens.universe.intern("site_" + padded(i + 1, n));
        const double lon = -124.0 + 56.0 * uniform_real(rng);
        const double lat = 25.0 + 24.0 * uniform_real(rng);
        ens.coordinates.push_back({lon, lat});
      }
    }
    write_coordinates(out.add("realizations/sites.tsv"), ens.coordinates, ens.universe);
  } else {
    for (std::uint32_t i = 0; i < n; ++i) ens.universe.intern("n" + padded(i + 1, n));
  }

  for (std::size_t i = 0; i < benches.size(); ++i) {
    auto& b = benches[i];
    Graph graph = std::move(b.graph);
    Partition planted = std::move(b.planted);
    if (geographic) {
      // Nodes move onto sites; the sites inherit the nodes' links.
      const auto site_of = assign_nodes_to_sites(planted, ens.coordinates);
      std::vector<Edge> edges;
      for (const auto& e : graph.edges()) edges.push_back({site_of[e.u], site_of[e.v]});
      std::vector<CommunityId> membership(n);
      for (NodeId v = 0; v < n; ++v) membership[site_of[v]] = planted.community_of(v);
      graph = Graph(n, std::move(edges));
      planted = Partition(std::move(membership));
    }
    ens.names.push_back("real_" + padded(i + 1, benches.size()));
    ens.graphs.push_back(std::move(graph));
    ens.truths.push_back(std::move(planted));
  }
  return ens;
}

Ensemble edges_input(const PipelineConfig& c) {
  Ensemble ens;
  if (c.universe) ens.universe = load_universe(*c.universe);
  for (const auto& path : c.edges) {
    if (ens.universe.size() == 0) {
      auto lg = load_edge_list(path);
      ens.universe = std::move(lg.universe);
      ens.graphs.push_back(std::move(lg.graph));
    } else {
      ens.graphs.push_back(load_edge_list(path, ens.universe).graph);
    }
    ens.names.push_back(path.stem().string());
  }
  return ens;
}

Ensemble seasons_input(const PipelineConfig& c) {
  Ensemble ens;
  auto data = load_seasons(*c.games, *c.membership, c.years);
  if (data.seasons.size() < 2) throw ValidationError("ensemble requires n >= 2");
  ens.universe = std::move(data.universe);
  for (const auto& season : data.seasons) {
    auto net = build_season_network(season, ens.universe, c.allow_unknown);
    ens.names.push_back("season_" + std::to_string(season.year));
    ens.graphs.push_back(std::move(net.graph));
    ens.truths.push_back(std::move(net.ground_truth));
  }
  return ens;
}

}  // namespace

Manifest run_pipeline(const PipelineConfig& config) {
  config.validate();
  Artifacts out(config.output);
  try {
    Ensemble ens;
    stage("input", [&] {
      switch (config.input) {
        case InputKind::generate: ens = generate_input(config, out); break;
        case InputKind::edges: ens = edges_input(config); break;
        case InputKind::seasons: ens = seasons_input(config); break;
      }
      if (ens.graphs.size() < 2) throw ValidationError("ensemble requires n >= 2");
      write_universe(out.add("realizations/universe.nodes"), ens.universe);
      for (std::size_t i = 0; i < ens.graphs.size(); ++i) {
        if (config.input != InputKind::edges && ens.graphs[i].edge_count() > 0) {
          write_edge_list(out.add("realizations/" + ens.names[i] + ".edges"), ens.graphs[i], ens.universe);
        }
        if (!ens.truths.empty()) {
          write_partition(out.add("realizations/" + ens.names[i] + ".truth.part"), ens.truths[i],
                          ens.universe);
        }
      }
      if (config.input != InputKind::generate && config.sites) {
        ens.coordinates = load_coordinates(*config.sites, ens.universe);
      }
    });

    const auto n = ens.graphs.size();
    std::vector<Partition> parts(n);
    stage("detect", [&] {
      if (config.partitions == PartitionSource::planted) {
        parts = ens.truths;
      } else {
        std::exception_ptr failure;
        const auto count = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for schedule(dynamic)
        for (std::ptrdiff_t i = 0; i < count; ++i) {
          try {
            DetectorConfig dc{config.runs, derive_seed(config.seed, 2, static_cast<std::uint64_t>(i)),
                              config.select};
            auto runs = serial::detection_runs(ens.graphs[i], dc, GreedyModularityDetector{});
            parts[i] = std::move(runs.partitions[runs.best_index]);
          } catch (...) {
#pragma omp critical(scaledinc_pipeline_detect)
            if (!failure) failure = std::current_exception();
          }
        }
        if (failure) std::rethrow_exception(failure);
      }
      for (std::size_t i = 0; i < n; ++i) {
        write_partition(out.add("partitions/" + ens.names[i] + ".part"), parts[i], ens.universe);
      }
    });

    WeightedAverageMap weighted;
    stage("similarity", [&] {
      weighted = weighted_average_map(parts);
      write_text(out.add("similarity.txt"), similarity_report(weighted.jaccard, weighted.weights, ens.names));
    });

    std::vector<std::pair<std::string, ConsistencyMap>> consistency;
    stage("consistency", [&] {
      std::vector<std::size_t> refs;
      if (config.reference) {
        if (*config.reference > n) throw ValidationError("reference index exceeds ensemble size");
        refs.push_back(*config.reference - 1);
      } else {
        for (std::size_t r = 0; r < n; ++r) refs.push_back(r);
      }
      for (const auto r : refs) {
        auto map = config.scheme == Scheme::scaled
                       ? weighted.per_reference_maps[r]
                       : consistency_map(parts, r, config.scheme, config.threshold);
        const auto stem = "consistency/" + std::string(scheme_name(config.scheme)) + "_ref" + padded(r + 1, n);
        write_score_file(out.add(stem + ".tsv"), ens.universe, map.scores);
        MapSidecar meta{"consistency", scheme_name(config.scheme), n, {}, r + 1, std::nullopt,
                        std::nullopt, map.comparisons, ens.names};
        if (config.scheme == Scheme::binary_inclusive) meta.threshold = config.threshold;
        write_sidecar(out.add(stem + ".json"), meta);
        consistency.emplace_back(stem, std::move(map));
      }
    });

    ArgmaxReferenceMap argmax;
    std::vector<std::pair<std::string, SignedCommunityMap>> signed_maps;
    stage("maps", [&] {
      write_score_file(out.add("maps/weighted.tsv"), ens.universe, weighted.scores);
      write_sidecar(out.add("maps/weighted.json"),
                    {"weighted-map", "scaled", n, weighted.weights, std::nullopt, std::nullopt,
                     std::nullopt, n - 1, ens.names});
      argmax = argmax_reference_map(std::span<const ConsistencyMap>(weighted.per_reference_maps));
      const std::vector<double> best(argmax.best_reference.begin(), argmax.best_reference.end());
      write_score_file(out.add("maps/argmax.tsv"), ens.universe, best);
      write_score_file(out.add("maps/argmax_score.tsv"), ens.universe, argmax.best_score);
      write_sidecar(out.add("maps/argmax.json"), {"argmax-map", "scaled", n, {}, std::nullopt,
                                                  std::nullopt, std::nullopt, n - 1, ens.names});
      for (const auto& [ref, community] : config.signed_maps) {
        if (ref > n) throw ValidationError("signed map reference exceeds ensemble size");
        auto map = signed_community_map(parts, ref - 1, community);
        const auto stem = "maps/signed_ref" + padded(ref, n) + "_c" + std::to_string(community);
        write_score_file(out.add(stem + ".tsv"), ens.universe, map.scores);
        write_sidecar(out.add(stem + ".json"), {"signed-map", "scaled", n, {}, ref, community,
                                                std::nullopt, map.comparisons, ens.names});
        signed_maps.emplace_back(stem, std::move(map));
      }
    });

    if (config.render) {
      stage("render", [&] {
        GeoLayout layout{ens.coordinates, config.boundary ? load_boundary(*config.boundary)
                                                          : bounding_boundary(ens.coordinates)};
        const auto raster = voronoi_raster(layout, config.raster_width, config.raster_height);
        const auto emit = [&](const std::string& stem, std::span<const double> values, Palette palette) {
          const auto base = "render/" + fs::path(stem).filename().string();
          const auto rendered = render_scalar_map(raster, values, palette, stem);
          write_text(out.add(base + ".svg"), rendered.svg);
          if (config.png) write_png(out.add(base + ".png"), rendered.image);
        };
        emit("weighted", weighted.scores, Palette::sequential);
        const std::vector<double> best(argmax.best_reference.begin(), argmax.best_reference.end());
        emit("argmax", best, Palette::categorical);
        for (const auto& [stem, map] : consistency) emit(stem, map.scores, Palette::sequential);
        for (const auto& [stem, map] : signed_maps) emit(stem, map.scores, Palette::diverging);
      });
    }

    Manifest manifest;
    stage("manifest", [&] {
      write_text(out.add("config.resolved"), config.serialize());
      manifest = out.manifest();
      std::ostringstream text;
      text << "# path\tsha256\tbytes\n";
      for (const auto& e : manifest.entries) text << e.path << '\t' << e.sha256 << '\t' << e.bytes << '\n';
      write_text(out.add("manifest.tsv"), text.str());
    });
    return manifest;
  } catch (...) {
    out.remove_all();
    throw;
  }
}

}  // namespace scaledinc
