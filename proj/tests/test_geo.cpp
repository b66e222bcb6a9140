#include <doctest.h>

#include <cmath>
#include <set>

#include "oracles.hpp"
#include "scaledinc/errors.hpp"
#include "scaledinc/geo.hpp"
#include "test_util.hpp"

using namespace scaledinc;

namespace {

Polygon rect(double x0, double y0, double x1, double y1) { return {{x0, y0}, {x1, y0}, {x1, y1}, {x0, y1}}; }

std::int32_t nearest_oracle(const std::vector<GeoPoint>& coords, GeoPoint c) {
  std::int32_t best = 0;
  for (std::size_t i = 1; i < coords.size(); ++i) {
    const auto d = [&](std::size_t k) {
      return std::pow(coords[k].lon - c.lon, 2) + std::pow(coords[k].lat - c.lat, 2);
    };
    if (d(i) < d(static_cast<std::size_t>(best))) best = static_cast<std::int32_t>(i);
  }
  return best;
}

GeoLayout random_layout(Rng& rng, std::size_t nodes) {
  GeoLayout layout;
  for (std::size_t i = 0; i < nodes; ++i) {
    layout.coordinates.push_back({-10.0 + 20.0 * uniform_real(rng), -5.0 + 10.0 * uniform_real(rng)});
  }
  // An L-shaped region plus a detached island.
  layout.boundary = {{{-11, -6}, {11, -6}, {11, 0}, {0, 0}, {0, 6}, {-11, 6}}, rect(3, 2, 8, 5)};
  return layout;
}

}  // namespace

TEST_CASE("default raster size") {
  GeoLayout layout{{{0, 0}}, {rect(-1, -1, 1, 1)}};
  const auto r = voronoi_raster(layout);
  CHECK(r.width == 1200);
  CHECK(r.height == 600);
}

TEST_CASE("single node owns every inside pixel") {
  GeoLayout layout{{{0.3, 0.2}}, {{{0, 0}, {4, 0}, {0, 4}}}};
  const auto r = voronoi_raster(layout, 40, 40);
  std::size_t inside = 0;
  for (std::uint32_t y = 0; y < 40; ++y) {
    for (std::uint32_t x = 0; x < 40; ++x) {
      const bool in = point_in_polygon(layout.boundary[0], r.pixel_center(x, y));
      CHECK(r.at(x, y) == (in ? 0 : RasterAssignment::kOutside));
      inside += in;
    }
  }
  CHECK(inside > 0);
  CHECK(inside < 1600);
}

TEST_CASE("equidistant pixel goes to the lower node") {
  // Pixel (1, 0) has center (1.5, 1.5); nodes 2 and 5 sit half a unit either side.
  std::vector<GeoPoint> coords(6, GeoPoint{100, 100});
  coords[2] = {1.0, 1.5};
  coords[5] = {2.0, 1.5};
  GeoLayout layout{coords, {rect(0, 0, 4, 2)}};
  const auto r = voronoi_raster(layout, 4, 2);
  CHECK(r.pixel_center(1, 0).lon == 1.5);
  CHECK(r.pixel_center(1, 0).lat == 1.5);
  CHECK(r.at(1, 0) == 2);
  CHECK(r.at(0, 0) == 2);
  CHECK(r.at(2, 0) == 5);

  std::swap(layout.coordinates[2], layout.coordinates[5]);
  CHECK(voronoi_raster(layout, 4, 2).at(1, 0) == 2);
}

TEST_CASE("raster matches a nearest-node scan and serial version") {
  Rng rng(61);
  for (int trial = 0; trial < 10; ++trial) {
    const auto layout = random_layout(rng, 1 + uniform_index(rng, 30));
    const auto r = voronoi_raster(layout, 90, 45);
    CHECK(r.owner == serial::voronoi_raster(layout, 90, 45).owner);
    for (std::uint32_t y = 0; y < 45; ++y) {
      for (std::uint32_t x = 0; x < 90; ++x) {
        const auto c = r.pixel_center(x, y);
        const bool in = std::any_of(layout.boundary.begin(), layout.boundary.end(),
                                    [&](const Polygon& p) { return point_in_polygon(p, c); });
        CHECK(r.at(x, y) == (in ? nearest_oracle(layout.coordinates, c) : RasterAssignment::kOutside));
      }
    }
  }
}

TEST_CASE("raster equivariance under relabeling") {
  Rng rng(62);
  const auto layout = random_layout(rng, 12);
  std::vector<std::size_t> perm(12);
  std::iota(perm.begin(), perm.end(), 0);
  shuffle(std::span<std::size_t>(perm), rng);
  GeoLayout permuted = layout;
  std::vector<double> values(12), permuted_values(12);
  for (std::size_t i = 0; i < 12; ++i) {
    values[i] = uniform_real(rng);
    permuted.coordinates[perm[i]] = layout.coordinates[i];
    permuted_values[perm[i]] = values[i];
  }
  const auto a = voronoi_raster(layout, 60, 30);
  const auto b = voronoi_raster(permuted, 60, 30);
  for (std::size_t k = 0; k < a.owner.size(); ++k) {
    if (a.owner[k] == RasterAssignment::kOutside) {
      CHECK(b.owner[k] == RasterAssignment::kOutside);
    } else {
      CHECK(b.owner[k] == static_cast<std::int32_t>(perm[a.owner[k]]));
    }
  }
  CHECK(render_scalar_map(a, values, Palette::sequential).image.pixels ==
        render_scalar_map(b, permuted_values, Palette::sequential).image.pixels);
}

TEST_CASE("raster errors") {
  CHECK_THROWS_AS(voronoi_raster(GeoLayout{{}, {rect(0, 0, 1, 1)}}, 10, 10), ValidationError);
  CHECK_THROWS_AS(voronoi_raster(GeoLayout{{{0, 0}}, {{{0, 0}, {1, 1}, {2, 2}}}}, 10, 10), ValidationError);
  CHECK_THROWS_AS(voronoi_raster(GeoLayout{{{0, 0}}, {rect(0, 0, 1, 1)}}, 0, 10), ValidationError);
}

TEST_CASE("palettes") {
  CHECK(palette_color(Palette::diverging, 0.0, -1.0, 1.0) == Rgb{247, 247, 247});
  CHECK(palette_color(Palette::diverging, -1.0, -1.0, 1.0) == Rgb{59, 76, 192});
  CHECK(palette_color(Palette::diverging, 1.0, -1.0, 1.0) == Rgb{192, 76, 59});
  Rng rng(63);
  for (int i = 0; i < 100; ++i) {
    const double v = uniform_real(rng);
    const auto pos = palette_color(Palette::diverging, v, -1.0, 1.0);
    const auto neg = palette_color(Palette::diverging, -v, -1.0, 1.0);
    CHECK(pos.r == neg.b);
    CHECK(pos.b == neg.r);
    CHECK(pos.g == neg.g);
  }
  CHECK(palette_color(Palette::sequential, 3.0, 3.0, 3.0) == palette_color(Palette::sequential, 0.5, 0.0, 1.0));
  CHECK_FALSE(palette_color(Palette::sequential, 0.0, 0.0, 1.0) == palette_color(Palette::sequential, 1.0, 0.0, 1.0));
  CHECK(palette_color(Palette::categorical, 1.0, 1.0, 5.0) == palette_color(Palette::categorical, 21.0, 1.0, 5.0));
  CHECK_FALSE(palette_color(Palette::categorical, 1.0, 1.0, 5.0) == palette_color(Palette::categorical, 2.0, 1.0, 5.0));
}

TEST_CASE("rendering") {
  GeoLayout layout{{{-1, 0}, {1, 0}}, {rect(-2, -1, 2, 1), rect(5, 5, 6, 6)}};
  const auto raster = voronoi_raster(layout, 70, 35);

  SUBCASE("equal values give a uniform map") {
    const std::vector<double> values{2.0, 2.0};
    const auto m = render_scalar_map(raster, values, Palette::sequential, "flat");
    std::set<std::array<std::uint8_t, 4>> colors;
    for (std::uint32_t y = 0; y < raster.height; ++y) {
      for (std::uint32_t x = 0; x < raster.width; ++x) {
        const auto* p = &m.image.pixels[(std::size_t{y} * m.image.width + x) * 4];
        if (raster.at(x, y) == RasterAssignment::kOutside) {
          CHECK(p[3] == 0);
        } else {
          colors.insert({p[0], p[1], p[2], p[3]});
        }
      }
    }
    CHECK(colors.size() == 1);
    CHECK(m.min == 2.0);
    CHECK(m.max == 2.0);
    CHECK(m.image.height > raster.height);
    CHECK(m.svg.find("<title>flat</title>") != std::string::npos);
  }

  SUBCASE("signed values are symmetric") {
    const std::vector<double> values{-1.0, 1.0};
    const auto m = render_scalar_map(raster, values, Palette::diverging);
    CHECK(m.svg.find("data-node=\"0\" fill=\"#3b4cc0\"") != std::string::npos);
    CHECK(m.svg.find("data-node=\"1\" fill=\"#c04c3b\"") != std::string::npos);
  }

  SUBCASE("errors") {
    const std::vector<double> nan{0.0, std::nan("")};
    CHECK_THROWS_AS(render_scalar_map(raster, nan, Palette::sequential), ValidationError);
    const std::vector<double> inf{0.0, INFINITY};
    CHECK_THROWS_AS(render_scalar_map(raster, inf, Palette::sequential), ValidationError);
    const std::vector<double> few{0.0};
    CHECK_THROWS_AS(render_scalar_map(raster, few, Palette::sequential), ValidationError);
  }

  SUBCASE("png output") {
    testutil::TempDir dir;
    const std::vector<double> values{0.0, 1.0};
    write_png(dir / "m.png", render_scalar_map(raster, values, Palette::sequential).image);
    const auto bytes = testutil::read(dir / "m.png");
    REQUIRE(bytes.size() > 8);
    CHECK(bytes.substr(1, 3) == "PNG");
    CHECK_THROWS_AS(write_png(dir / "missing" / "m.png", RgbaImage{1, 1, {0, 0, 0, 0}}), IoError);
  }
}

TEST_CASE("svg paths cover exactly the owned pixels") {
  GeoLayout layout{{{0, 0}, {3, 1}, {1, 3}}, {{{-1, -1}, {4, -1}, {2, 4}}}};
  const auto raster = voronoi_raster(layout, 20, 20);
  const std::vector<double> values{0, 1, 2};
  const auto m = render_scalar_map(raster, values, Palette::categorical);
  std::vector<std::size_t> expected(3, 0);
  for (const auto o : raster.owner) {
    if (o >= 0) ++expected[o];
  }
  for (int node = 0; node < 3; ++node) {
    const auto tag = "data-node=\"" + std::to_string(node) + "\"";
    const auto start = m.svg.find(tag);
    REQUIRE(start != std::string::npos);
    const auto d = m.svg.find(" d=\"", start) + 4;
    const auto end = m.svg.find('"', d);
    const auto path = m.svg.substr(d, end - d);
    std::size_t covered = 0;
    for (std::size_t pos = path.find('h'); pos != std::string::npos; pos = path.find("h", pos + 1)) {
      if (path[pos + 1] != '-') covered += std::stoul(path.substr(pos + 1));
    }
    CHECK(covered == expected[node]);
  }
}

TEST_CASE("site assignment") {
  SUBCASE("one community takes every site") {
    const std::vector<GeoPoint> sites{{3, 0}, {1, 0}, {2, 0}};
    const auto s = assign_nodes_to_sites(Partition::single_community(3), sites);
    CHECK(std::set<std::uint32_t>(s.begin(), s.end()).size() == 3);
  }
  SUBCASE("two communities on collinear sites form contiguous runs") {
    const std::vector<GeoPoint> sites{{0, 0}, {1, 0}, {2, 0}, {3, 0}, {4, 0}};
    const Partition p(std::vector<CommunityId>{1, 0, 0, 1, 0});
    const auto s = assign_nodes_to_sites(p, sites);
    CHECK(s == std::vector<std::uint32_t>{3, 0, 1, 4, 2});
    CHECK(assign_nodes_to_sites(p, sites) == s);
  }
  SUBCASE("sizes are preserved and sites used once") {
    Rng rng(64);
    for (int trial = 0; trial < 20; ++trial) {
      const auto n = 1 + uniform_index(rng, 40);
      const auto p = oracle::random_partition(rng, n, 6);
      std::vector<GeoPoint> sites;
      for (std::size_t i = 0; i < n; ++i) sites.push_back({uniform_real(rng), uniform_real(rng)});
      const auto s = assign_nodes_to_sites(p, sites);
      CHECK(std::set<std::uint32_t>(s.begin(), s.end()).size() == n);
      std::vector<CommunityId> moved(n);
      for (NodeId v = 0; v < n; ++v) moved[s[v]] = p.community_of(v);
      CHECK(Partition(moved).community_sizes().size() == p.community_count());
      auto a = Partition(moved).community_sizes();
      auto b = p.community_sizes();
      std::sort(a.begin(), a.end());
      std::sort(b.begin(), b.end());
      CHECK(a == b);
    }
  }
  CHECK_THROWS_AS(assign_nodes_to_sites(Partition::single_community(2), std::vector<GeoPoint>{{0, 0}}),
                  ValidationError);
}

TEST_CASE("coordinate and boundary files") {
  testutil::TempDir dir;
  const NodeUniverse u({"a", "b"});
  const auto coords = load_coordinates(dir.write("c.tsv", "b\t2.5\t-1\na\t1\t2\n"), u);
  CHECK(coords[0].lon == 1.0);
  CHECK(coords[1].lat == -1.0);
  CHECK_THROWS_AS(load_coordinates(dir.write("m.tsv", "a\t1\t2\n"), u), ValidationError);
  CHECK_THROWS_AS(load_coordinates(dir.write("x.tsv", "a\t1\n"), u), ParseError);
  write_coordinates(dir / "w.tsv", coords, u);
  const auto sites = load_sites(dir / "w.tsv");
  CHECK(sites.universe == u);
  CHECK(sites.coordinates[1].lon == 2.5);

  const auto polys = load_boundary(dir.write("b.txt", "0\t0\n1\t0\n1\t1\n\n\n5\t5\n6\t5\n6\t6\n"));
  CHECK(polys.size() == 2);
  CHECK(polys[1].size() == 3);
  CHECK_THROWS_AS(load_boundary(dir.write("bad.txt", "0\t0\n1\t0\n")), ValidationError);

  const auto box = bounding_boundary(coords);
  REQUIRE(box.size() == 1);
  for (const auto& c : coords) CHECK(point_in_polygon(box[0], c));
}
