#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "scaledinc/graph.hpp"

namespace scaledinc {

struct GeoPoint {
  double lon = 0.0;
  double lat = 0.0;
};

using Polygon = std::vector<GeoPoint>;

// One coordinate per node plus the render region. Distances are plain
// Euclidean distances in (longitude, latitude), i.e. an equirectangular
// projection.
struct GeoLayout {
  std::vector<GeoPoint> coordinates;
  std::vector<Polygon> boundary;
};

// Coordinates file: "label<TAB>longitude<TAB>latitude"; every universe label
// exactly once.
std::vector<GeoPoint> load_coordinates(const std::filesystem::path& path,
                                       const NodeUniverse& universe);
void write_coordinates(const std::filesystem::path& path, std::span<const GeoPoint> coordinates,
                       const NodeUniverse& universe);
struct LabeledCoordinates {
  NodeUniverse universe;
  std::vector<GeoPoint> coordinates;
};
// Same format, universe taken from the file's label order.
LabeledCoordinates load_sites(const std::filesystem::path& path);

// Boundary file: "longitude<TAB>latitude" vertices; blank lines separate
// polygons.
std::vector<Polygon> load_boundary(const std::filesystem::path& path);

// Bounding rectangle of the points, padded by 5% on each side (at least
// 0.5 degrees).
std::vector<Polygon> bounding_boundary(std::span<const GeoPoint> points);

struct RasterBounds {
  double min_lon = 0.0;
  double max_lon = 0.0;
  double min_lat = 0.0;
  double max_lat = 0.0;
};

// Per-pixel nearest node over the bounding box of the boundary, row-major
// with row 0 at the top (north). Pixels outside every boundary polygon have
// owner kOutside.
struct RasterAssignment {
  static constexpr std::int32_t kOutside = -1;

  std::uint32_t width = 0;
  std::uint32_t height = 0;
  RasterBounds bounds;
  std::vector<std::int32_t> owner;

  std::int32_t at(std::uint32_t x, std::uint32_t y) const { return owner[std::size_t{y} * width + x]; }
  GeoPoint pixel_center(std::uint32_t x, std::uint32_t y) const;
};

constexpr std::uint32_t kDefaultRasterWidth = 1200;
constexpr std::uint32_t kDefaultRasterHeight = 600;

// Rows are processed concurrently. Equidistant pixels go to the lowest node
// index. Throws ValidationError for no nodes or a zero-area boundary.
RasterAssignment voronoi_raster(const GeoLayout& layout, std::uint32_t width = kDefaultRasterWidth,
                                std::uint32_t height = kDefaultRasterHeight);

bool point_in_polygon(const Polygon& polygon, GeoPoint point);

enum class Palette { sequential, diverging, categorical };

struct Rgb {
  std::uint8_t r = 0, g = 0, b = 0;
  friend bool operator==(const Rgb&, const Rgb&) = default;
};

// Maps a value to a color. Sequential scales over [min, max]; diverging is
// centered at 0 and scaled by max |value|; categorical rounds to an integer
// id and cycles a fixed table.
Rgb palette_color(Palette palette, double value, double min, double max);

struct RgbaImage {
  std::uint32_t width = 0;
  std::uint32_t height = 0;
  std::vector<std::uint8_t> pixels;  // RGBA, row-major
};

struct RenderedMap {
  std::string svg;
  RgbaImage image;
  double min = 0.0;
  double max = 0.0;
};

// Colors every inside pixel by its owner's value and appends a legend strip
// with the min and max. The SVG draws one path per node made of the row runs
// of its pixels; outside pixels are never drawn. Throws ValidationError for a
// wrong value count or non-finite values.
RenderedMap render_scalar_map(const RasterAssignment& raster, std::span<const double> values,
                              Palette palette, const std::string& title = {});

void write_png(const std::filesystem::path& path, const RgbaImage& image);

// Deterministic geographic placement of planted communities onto sites.
// Communities are taken by size (descending, ties by id). Each one is seeded
// at the unassigned site nearest the previous community's centroid (the
// first at the westernmost, then southernmost, site) and grown by repeatedly
// taking the unassigned site nearest its current centroid. Within a
// community, nodes in ascending order receive sites in the order grown.
// Returns the site index of every node. Throws ValidationError when the
// site count differs from the node count.
std::vector<std::uint32_t> assign_nodes_to_sites(const Partition& planted,
                                                 std::span<const GeoPoint> sites);

namespace serial {
RasterAssignment voronoi_raster(const GeoLayout& layout, std::uint32_t width = kDefaultRasterWidth,
                                std::uint32_t height = kDefaultRasterHeight);
}  // namespace serial

}  // namespace scaledinc
