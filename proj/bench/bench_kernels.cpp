// Serial vs OpenMP timings for the parallel kernels.
#include <omp.h>

#include <chrono>
#include <cstdio>
#include <functional>
#include <vector>

#include "scaledinc/benchmark_gen.hpp"
#include "scaledinc/ensemble.hpp"
#include "scaledinc/geo.hpp"
#include "scaledinc/modularity.hpp"
#include "scaledinc/rng.hpp"
#include "scaledinc/similarity.hpp"

using namespace scaledinc;

namespace {

double best_ms(const std::function<void()>& fn, int repeats = 3) {
  double best = 1e300;
  for (int r = 0; r < repeats; ++r) {
    const auto t0 = std::chrono::steady_clock::now();
    fn();
    const auto t1 = std::chrono::steady_clock::now();
    best = std::min(best, std::chrono::duration<double, std::milli>(t1 - t0).count());
  }
  return best;
}

void report(const char* name, double serial_ms, double parallel_ms) {
  std::printf("%-22s serial %9.2f ms   parallel %9.2f ms   speedup %5.2fx\n", name, serial_ms, parallel_ms,
              serial_ms / parallel_ms);
}

}  // namespace

int main() {
  std::printf("threads: %d\n", omp_get_max_threads());

  std::vector<Graph> graphs;
  std::vector<Partition> partitions;
  for (std::uint64_t i = 0; i < 30; ++i) {
    BenchmarkParams p;
    p.rng_seed = derive_seed(7, 1, i);
    auto b = generate_benchmark(p);
    graphs.push_back(std::move(b.graph));
    partitions.push_back(std::move(b.planted));
  }

  report("pairwise_jaccard", best_ms([&] { serial::pairwise_jaccard(partitions); }),
         best_ms([&] { pairwise_jaccard(partitions); }));
  report("reference_maps", best_ms([&] { serial::reference_maps(partitions); }),
         best_ms([&] { reference_maps(partitions); }));
  report("weighted_average_map", best_ms([&] { serial::weighted_average_map(partitions); }),
         best_ms([&] { weighted_average_map(partitions); }));

  const DetectorConfig config{10, 11, SelectionRule::highest_q};
  const GreedyModularityDetector detector;
  report("detection_runs", best_ms([&] { serial::detection_runs(graphs[0], config, detector); }),
         best_ms([&] { detection_runs(graphs[0], config, detector); }));

  GeoLayout layout;
  Rng rng(5);
  for (int i = 0; i < 256; ++i) layout.coordinates.push_back({-124.0 + 56.0 * uniform_real(rng), 25.0 + 24.0 * uniform_real(rng)});
  layout.boundary = bounding_boundary(layout.coordinates);
  report("voronoi_raster", best_ms([&] { serial::voronoi_raster(layout); }),
         best_ms([&] { voronoi_raster(layout); }));
  return 0;
}
