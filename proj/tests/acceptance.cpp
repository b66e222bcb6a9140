// Acceptance checks, one PASS/FAIL line per criterion.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numeric>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "scaledinc/benchmark_gen.hpp"
#include "scaledinc/consistency.hpp"
#include "scaledinc/ensemble.hpp"
#include "scaledinc/modularity.hpp"
#include "scaledinc/seasons.hpp"
#include "scaledinc/similarity.hpp"

using namespace scaledinc;

namespace {

constexpr double kTol = 1e-12;

// Signed-map sign checks accumulated across criteria 2-5.
struct SignLedger {
  std::size_t maps = 0;
  std::size_t violations = 0;

  void check(std::span<const Partition> ensemble, std::size_t ref, CommunityId q) {
    const auto map = signed_community_map(ensemble, ref, q);
    const auto& r = ensemble[ref];
    ++maps;
    for (NodeId v = 0; v < map.scores.size(); ++v) {
      if (map.scores[v] > 0 && r.community_of(v) != q) ++violations;
      if (map.scores[v] < 0 && r.community_of(v) == q) ++violations;
    }
  }

  void check_all(std::span<const Partition> ensemble) {
    for (std::size_t ref = 0; ref < ensemble.size(); ++ref) {
      for (CommunityId q = 0; q < ensemble[ref].community_count(); ++q) check(ensemble, ref, q);
    }
  }
};

SignLedger signs;

struct Outcome {
  bool pass = false;
  std::string detail;
};

using Seconds = std::chrono::duration<double>;

Outcome timed(double limit_seconds, const std::function<Outcome()>& body, double& elapsed) {
  const auto t0 = std::chrono::steady_clock::now();
  auto out = body();
  elapsed = Seconds(std::chrono::steady_clock::now() - t0).count();
  if (elapsed >= limit_seconds) {
    out.pass = false;
    out.detail += " [over time limit " + std::to_string(limit_seconds) + " s]";
  }
  return out;
}

std::string fmt(const char* f, double a, double b = 0, double c = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

Outcome fig2() {
  const Partition split(std::vector<CommunityId>{0, 0, 0, 0, 0, 1, 1, 1, 1});
  const auto merged = Partition::single_community(9);
  const std::vector<Partition> others{split};

  // Rational check on the integer counts: X = n^2 / (|A| |R|).
  const auto x = overlap_matrix(split, merged);
  const bool rational = x.intersection(0, 0) * x.intersection(0, 0) * 9 == 5 * 5 * 9 &&
                        x.intersection(1, 0) * x.intersection(1, 0) * 9 == 4 * 4 * 9 &&
                        x.row_sets()[0].size() * x.col_sets()[0].size() * 5 == 25 * 9 &&
                        x.row_sets()[1].size() * x.col_sets()[0].size() * 4 == 16 * 9;

  const auto scaled = scaled_inclusivity(others, merged);
  const auto excl = binary_exclusivity(others, merged);
  const auto incl = binary_inclusivity(others, merged);
  bool ok = rational;
  for (NodeId v = 0; v < 9; ++v) {
    const bool blue = v < 5;
    ok = ok && scaled.scores[v] == (blue ? 5.0 / 9.0 : 4.0 / 9.0);
    ok = ok && excl.scores[v] == (blue ? 1.0 : 0.0);
    ok = ok && incl.scores[v] == 1.0;
  }
  return {ok, "scaled {" + fmt("%.17g, %.17g", scaled.scores[0], scaled.scores[8]) + "} exclusive {" +
                  fmt("%g, %g", excl.scores[0], excl.scores[8]) + "} inclusive {" +
                  fmt("%g, %g", incl.scores[0], incl.scores[8]) + "}"};
}

std::vector<Partition> identical_ensemble() {
  BenchmarkParams p;
  p.rng_seed = 2024;
  const auto planted = generate_benchmark(p).planted;
  return std::vector<Partition>(30, planted);
}

Outcome ceiling(const std::vector<Partition>& ens) {
  const auto w = weighted_average_map(ens);
  bool ok = true;
  for (const auto& m : w.per_reference_maps) {
    for (const auto s : m.scores) ok = ok && s == 29.0;
  }
  for (const auto s : w.scores) ok = ok && std::abs(s - 29.0) <= kTol;
  for (const auto x : w.weights) ok = ok && x == w.weights[0] && std::abs(x - 1.0 / 30.0) <= 1e-15;
  for (std::size_t r = 0; r < 30; ++r) {
    for (std::size_t c = 0; c < 30; ++c) ok = ok && w.jaccard(r, c) == (r == c ? 0.0 : 1.0);
  }
  return {ok, fmt("N = %g, weight %.17g, weighted score %.17g", static_cast<double>(ens[0].node_count()),
                  w.weights[0], w.scores[0])};
}

Outcome oracle_equivalence() {
  Rng rng(20240101);
  const int instances = 1200;
  std::size_t mismatches = 0;
  double worst = 0.0;
  const auto compare = [&](double a, double b) {
    const double d = std::abs(a - b);
    worst = std::max(worst, d);
    if (!(d <= kTol)) ++mismatches;
  };
  for (int t = 0; t < instances; ++t) {
    const auto nodes = 1 + uniform_index(rng, 12);
    const auto n = 2 + uniform_index(rng, 4);
    std::vector<Partition> ens;
    for (std::size_t i = 0; i < n; ++i) ens.push_back(oracle::random_partition(rng, nodes, 4));
    const double threshold = uniform_index(rng, 2) == 0 ? 0.0 : uniform_real(rng);

    for (std::size_t a = 0; a < n; ++a) {
      for (std::size_t b = 0; b < n; ++b) {
        compare(jaccard_similarity(ens[a], ens[b]), oracle::jaccard(ens[a], ens[b]));
        const auto x = overlap_matrix(ens[a], ens[b]);
        for (CommunityId p = 0; p < x.rows(); ++p) {
          for (CommunityId q = 0; q < x.cols(); ++q) {
            compare(x.value(p, q), oracle::overlap(ens[a], p, ens[b], q).value());
          }
        }
      }
    }
    const auto j = pairwise_jaccard(ens);
    for (std::size_t a = 0; a < n; ++a) {
      for (std::size_t b = 0; b < n; ++b) compare(j(a, b), a == b ? 0.0 : oracle::jaccard(ens[a], ens[b]));
    }
    for (std::size_t ref = 0; ref < n; ++ref) {
      const auto s = scaled_inclusivity(ens, ref);
      const auto bi = binary_inclusivity(ens, ref, threshold);
      const auto be = binary_exclusivity(ens, ref);
      const auto os = oracle::scaled(ens, ref);
      const auto oi = oracle::inclusive(ens, ref, threshold);
      const auto oe = oracle::exclusive(ens, ref);
      for (NodeId v = 0; v < nodes; ++v) {
        compare(s.scores[v], os[v]);
        compare(bi.scores[v], oi[v]);
        compare(be.scores[v], oe[v]);
      }
      for (CommunityId q = 0; q < ens[ref].community_count(); ++q) {
        const auto sm = signed_community_map(ens, ref, q);
        const auto om = oracle::signed_map(ens, ref, q);
        for (NodeId v = 0; v < nodes; ++v) compare(sm.scores[v], om[v]);
        signs.check(ens, ref, q);
      }
    }
  }
  return {mismatches == 0,
          fmt("%g instances, %g mismatches, worst difference %.3g", instances, static_cast<double>(mismatches), worst)};
}

// Community counts from the published 30-network size table.
Outcome generator_fidelity(std::vector<Partition>& planted_out) {
  int mixing_ok = 0, sizes_ok = 0, counts_ok = 0;
  double worst_mixing = 0.0;
  std::size_t min_count = 1000, max_count = 0;
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    BenchmarkParams p;
    p.rng_seed = derive_seed(1, 1, seed);
    const auto b = generate_benchmark(p);
    const double dev = std::abs(b.achieved_mixing - 0.35);
    worst_mixing = std::max(worst_mixing, dev);
    mixing_ok += dev <= 0.05;
    const auto& sizes = b.planted.community_sizes();
    sizes_ok += std::all_of(sizes.begin(), sizes.end(), [](std::size_t s) { return s >= 15 && s <= 51; });
    const auto m = b.planted.community_count();
    counts_ok += m >= 8 && m <= 12;
    min_count = std::min(min_count, m);
    max_count = std::max(max_count, m);
    planted_out.push_back(b.planted);
  }
  const bool ok = mixing_ok == 30 && sizes_ok == 30 && counts_ok >= 27;
  return {ok, fmt("mixing within 0.05: %g/30 (worst %.4f); sizes in range: %g/30", mixing_ok, worst_mixing, sizes_ok) +
                  fmt("; counts in [8, 12]: %g/30 (range %g-%g)", counts_ok, static_cast<double>(min_count),
                      static_cast<double>(max_count))};
}

Outcome detection_sanity(std::vector<Partition>& detected_out) {
  int good = 0;
  double worst = 1.0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    BenchmarkParams p;
    p.mixing = 0.10;
    p.rng_seed = derive_seed(2, 1, seed);
    const auto b = generate_benchmark(p);
    const DetectorConfig config{10, derive_seed(2, 2, seed), SelectionRule::highest_q};
    const auto best = best_partition(b.graph, config);
    const double j = jaccard_similarity(best, b.planted);
    worst = std::min(worst, j);
    good += j >= 0.8;
    detected_out.push_back(best);
  }
  return {good >= 18, fmt("Jaccard >= 0.8 on %g/20 seeds (lowest %.4f)", good, worst)};
}

Outcome argmax_tie(const std::vector<Partition>& ens) {
  const auto m = argmax_reference_map(ens);
  const bool ok = std::all_of(m.best_reference.begin(), m.best_reference.end(), [](std::uint32_t r) { return r == 1; });
  return {ok, fmt("%g nodes, %g partitions", static_cast<double>(m.best_reference.size()), static_cast<double>(ens.size()))};
}

Outcome season_rules() {
  NodeUniverse u;
  for (const auto* t : {"S1", "S2", "S3", "S4", "A", "B", "C", "I1", "I2", "I3", "N"}) u.intern(t);
  std::vector<std::string> failures;
  std::vector<Partition> truths;
  for (int k = 0; k < 15; ++k) {
    const int year = 1995 + k;
    SeasonSchedule s;
    s.year = year;
    for (const auto* t : {"S1", "S2", "S3", "S4"}) s.membership[t] = "Stable";
    // A, B, C drift between two conferences; the I teams are independent;
    // N joins in 2002.
    s.membership["A"] = k % 2 ? "East" : "West";
    s.membership["B"] = "East";
    s.membership["C"] = k % 3 ? "West" : "East";
    for (const auto* t : {"I1", "I2", "I3"}) s.membership[t] = kIndependent;
    s.membership["N"] = year < 2002 ? kNotYetMember : "West";
    s.games = {{"S1", "S2"}, {"S2", "S1"}, {"S1", "S2"}, {"S3", "S4"}, {"S1", "A"},
               {"A", "B"},   {"N", "A"},   {"I1", "S3"}, {"I2", "C"},  {"C", "I3"}};
    const auto net = build_season_network(s, u);
    const auto& g = net.graph;
    const auto& t = net.ground_truth;
    const NodeId nid = *u.find("N");
    const bool member = year >= 2002;
    if (g.edge_count() != (member ? 8u : 7u)) failures.push_back("edge count " + std::to_string(year));
    if (!g.has_edge(0, 1)) failures.push_back("repeat games " + std::to_string(year));
    if (g.has_edge(nid, *u.find("A")) != member) failures.push_back("not-yet-member game " + std::to_string(year));
    if (!member && (g.degree(nid) != 0 || t.community_sizes()[t.community_of(nid)] != 1)) {
      failures.push_back("not-yet-member isolation " + std::to_string(year));
    }
    for (const auto* ind : {"I1", "I2", "I3"}) {
      if (t.community_sizes()[t.community_of(*u.find(ind))] != 1) failures.push_back("independent " + std::to_string(year));
    }
    if (t.node_count() != u.size()) failures.push_back("universe " + std::to_string(year));
    truths.push_back(t);
  }
  bool fourteen = true;
  for (std::size_t ref = 0; ref < truths.size(); ++ref) {
    const auto map = scaled_inclusivity(truths, ref);
    for (NodeId v = 0; v < 4; ++v) fourteen = fourteen && map.scores[v] == 14.0;
  }
  if (!fourteen) failures.push_back("stable conference below 14");
  std::string detail = failures.empty() ? "all rules hold; stable conference scores 14 under every reference"
                                        : "failed: " + failures.front();
  return {failures.empty(), detail};
}

}  // namespace

int main() {
  int failed = 0;
  const auto report = [&](int id, const char* name, double limit, const std::function<Outcome()>& body) {
    double elapsed = 0.0;
    const auto out = timed(limit, body, elapsed);
    failed += !out.pass;
    std::printf("[%s] criterion %d: %s (%.3f s, limit %g s) %s\n", out.pass ? "PASS" : "FAIL", id, name, elapsed,
                limit, out.detail.c_str());
    std::fflush(stdout);
  };

  report(1, "two-into-one merge example", 1e-3, fig2);

  const auto identical = identical_ensemble();
  report(2, "optimal-value ceiling", 1.0, [&] { return ceiling(identical); });
  signs.check_all(identical);

  report(3, "brute-force oracle equivalence", 30.0, oracle_equivalence);

  std::vector<Partition> planted;
  report(4, "generator fidelity", 60.0, [&] { return generator_fidelity(planted); });
  signs.check_all(planted);

  std::vector<Partition> detected;
  report(5, "detection on planted structure", 120.0, [&] { return detection_sanity(detected); });
  signs.check_all(detected);

  report(6, "signed-map sign separation", 1e9, [&] {
    return Outcome{signs.maps > 0 && signs.violations == 0,
                   fmt("%g maps checked, %g violations", static_cast<double>(signs.maps),
                       static_cast<double>(signs.violations))};
  });
  report(7, "argmax tie rule", 1e9, [&] { return argmax_tie(identical); });
  report(8, "season ingestion rules", 1.0, season_rules);

  std::printf("%d of 8 criteria passed\n", 8 - failed);
  return failed == 0 ? 0 : 1;
}
