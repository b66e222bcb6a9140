#include "scaledinc/geo.hpp"

#include <png.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include "scaledinc/errors.hpp"
#include "scaledinc/text_io.hpp"

namespace scaledinc {

std::vector<GeoPoint> load_coordinates(const std::filesystem::path& path,
                                       const NodeUniverse& universe) {
  const auto lines = text::read_lines(path);
  const auto name = path.string();
  std::vector<GeoPoint> coords(universe.size());
  std::vector<bool> seen(universe.size(), false);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (text::is_skippable(lines[i])) continue;
    const auto fields = text::split_fields(lines[i]);
    if (fields.size() != 3) throw ParseError(name, i + 1, "expected 'label<TAB>lon<TAB>lat'");
    const auto id = universe.find(fields[0]);
    if (!id) throw ParseError(name, i + 1, "unknown label '" + fields[0] + "'");
    if (seen[*id]) throw ParseError(name, i + 1, "duplicate label '" + fields[0] + "'");
    seen[*id] = true;
    coords[*id] = {text::parse_real(fields[1], name, i + 1), text::parse_real(fields[2], name, i + 1)};
  }
  for (std::size_t i = 0; i < seen.size(); ++i) {
    if (!seen[i]) throw ValidationError(name + ": missing coordinates for '" + universe.label(i) + "'");
  }
  return coords;
}

LabeledCoordinates load_sites(const std::filesystem::path& path) {
  const auto lines = text::read_lines(path);
  const auto name = path.string();
  LabeledCoordinates out;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (text::is_skippable(lines[i])) continue;
    const auto fields = text::split_fields(lines[i]);
    if (fields.size() != 3) throw ParseError(name, i + 1, "expected 'label<TAB>lon<TAB>lat'");
    if (out.universe.find(fields[0])) throw ParseError(name, i + 1, "duplicate label '" + fields[0] + "'");
    out.universe.intern(fields[0]);
    out.coordinates.push_back(
        {text::parse_real(fields[1], name, i + 1), text::parse_real(fields[2], name, i + 1)});
  }
  if (out.coordinates.empty()) throw ValidationError(name + ": no sites");
  return out;
}

void write_coordinates(const std::filesystem::path& path, std::span<const GeoPoint> coordinates,
                       const NodeUniverse& universe) {
  auto out = text::open_output(path);
  for (std::size_t i = 0; i < coordinates.size(); ++i) {
    out << universe.label(static_cast<NodeId>(i)) << '\t' << text::format_general(coordinates[i].lon, 10)
        << '\t' << text::format_general(coordinates[i].lat, 10) << '\n';
  }
  if (!out) throw IoError("write failure on '" + path.string() + "'");
}

std::vector<Polygon> load_boundary(const std::filesystem::path& path) {
  const auto lines = text::read_lines(path);
  const auto name = path.string();
  std::vector<Polygon> polygons(1);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const auto t = text::trim(lines[i]);
    if (t.empty()) {
      if (!polygons.back().empty()) polygons.emplace_back();
      continue;
    }
    if (t.front() == '#') continue;
    const auto fields = text::split_fields(t);
    if (fields.size() != 2) throw ParseError(name, i + 1, "expected 'lon<TAB>lat'");
    polygons.back().push_back(
        {text::parse_real(fields[0], name, i + 1), text::parse_real(fields[1], name, i + 1)});
  }
  if (polygons.back().empty()) polygons.pop_back();
  for (const auto& poly : polygons) {
    if (poly.size() < 3) throw ValidationError(name + ": polygon with fewer than 3 vertices");
  }
  if (polygons.empty()) throw ValidationError(name + ": no boundary polygons");
  return polygons;
}

std::vector<Polygon> bounding_boundary(std::span<const GeoPoint> points) {
  if (points.empty()) throw ValidationError("no coordinates");
  RasterBounds b{points[0].lon, points[0].lon, points[0].lat, points[0].lat};
  for (const auto& p : points) {
    b.min_lon = std::min(b.min_lon, p.lon);
    b.max_lon = std::max(b.max_lon, p.lon);
    b.min_lat = std::min(b.min_lat, p.lat);
    b.max_lat = std::max(b.max_lat, p.lat);
  }
  const double pad_lon = std::max(0.05 * (b.max_lon - b.min_lon), 0.5);
  const double pad_lat = std::max(0.05 * (b.max_lat - b.min_lat), 0.5);
  b.min_lon -= pad_lon;
  b.max_lon += pad_lon;
  b.min_lat -= pad_lat;
  b.max_lat += pad_lat;
  return {Polygon{{b.min_lon, b.min_lat}, {b.max_lon, b.min_lat}, {b.max_lon, b.max_lat},
                  {b.min_lon, b.max_lat}}};
}

bool point_in_polygon(const Polygon& polygon, GeoPoint point) {
  bool inside = false;
  for (std::size_t i = 0, j = polygon.size() - 1; i < polygon.size(); j = i++) {
    const auto& a = polygon[i];
    const auto& b = polygon[j];
    if ((a.lat > point.lat) != (b.lat > point.lat)) {
      const double cross = (b.lon - a.lon) * (point.lat - a.lat) / (b.lat - a.lat) + a.lon;
      if (point.lon < cross) inside = !inside;
    }
  }
  return inside;
}

GeoPoint RasterAssignment::pixel_center(std::uint32_t x, std::uint32_t y) const {
  return {bounds.min_lon + (x + 0.5) * (bounds.max_lon - bounds.min_lon) / width,
          bounds.max_lat - (y + 0.5) * (bounds.max_lat - bounds.min_lat) / height};
}

namespace {

double shoelace_area(const Polygon& poly) {
  double twice = 0.0;
  for (std::size_t i = 0, j = poly.size() - 1; i < poly.size(); j = i++) {
    twice += poly[j].lon * poly[i].lat - poly[i].lon * poly[j].lat;
  }
  return std::abs(twice) / 2.0;
}

RasterAssignment prepare(const GeoLayout& layout, std::uint32_t width, std::uint32_t height) {
  if (layout.coordinates.empty()) throw ValidationError("raster needs at least one node");
  if (width == 0 || height == 0) throw ValidationError("raster dimensions must be positive");
  double area = 0.0;
  RasterAssignment r;
  r.width = width;
  r.height = height;
  r.bounds = {std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity(),
              std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
  for (const auto& poly : layout.boundary) {
    area += poly.size() >= 3 ? shoelace_area(poly) : 0.0;
    for (const auto& p : poly) {
      r.bounds.min_lon = std::min(r.bounds.min_lon, p.lon);
      r.bounds.max_lon = std::max(r.bounds.max_lon, p.lon);
      r.bounds.min_lat = std::min(r.bounds.min_lat, p.lat);
      r.bounds.max_lat = std::max(r.bounds.max_lat, p.lat);
    }
  }
  if (!(area > 0.0)) throw ValidationError("boundary has zero area");
  r.owner.assign(std::size_t{width} * height, RasterAssignment::kOutside);
  return r;
}

void fill_row(const GeoLayout& layout, RasterAssignment& r, std::uint32_t y) {
  const auto& coords = layout.coordinates;
  for (std::uint32_t x = 0; x < r.width; ++x) {
    const auto c = r.pixel_center(x, y);
    bool inside = false;
    for (const auto& poly : layout.boundary) {
      if (point_in_polygon(poly, c)) {
        inside = true;
        break;
      }
    }
    if (!inside) continue;
    std::int32_t best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < coords.size(); ++i) {
      const double dx = coords[i].lon - c.lon;
      const double dy = coords[i].lat - c.lat;
      const double d = dx * dx + dy * dy;
      if (d < best_d) {
        best_d = d;
        best = static_cast<std::int32_t>(i);
      }
    }
    r.owner[std::size_t{y} * r.width + x] = best;
  }
}

}  // namespace

RasterAssignment voronoi_raster(const GeoLayout& layout, std::uint32_t width, std::uint32_t height) {
  auto r = prepare(layout, width, height);
  const auto rows = static_cast<std::ptrdiff_t>(height);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t y = 0; y < rows; ++y) fill_row(layout, r, static_cast<std::uint32_t>(y));
  return r;
}

namespace serial {
RasterAssignment voronoi_raster(const GeoLayout& layout, std::uint32_t width, std::uint32_t height) {
  auto r = prepare(layout, width, height);
  for (std::uint32_t y = 0; y < height; ++y) fill_row(layout, r, y);
  return r;
}
}  // namespace serial

namespace {

Rgb lerp(Rgb a, Rgb b, double t) {
  const auto mix = [t](std::uint8_t x, std::uint8_t y) {
    return static_cast<std::uint8_t>(std::lround(x + (static_cast<double>(y) - x) * t));
  };
  return {mix(a.r, b.r), mix(a.g, b.g), mix(a.b, b.b)};
}

Rgb ramp(std::span<const Rgb> stops, double t) {
  t = std::clamp(t, 0.0, 1.0);
  const double scaled = t * static_cast<double>(stops.size() - 1);
  const auto i = std::min(static_cast<std::size_t>(scaled), stops.size() - 2);
  return lerp(stops[i], stops[i + 1], scaled - static_cast<double>(i));
}

// Viridis anchor points.
constexpr std::array<Rgb, 5> kSequential{{{68, 1, 84}, {59, 82, 139}, {33, 145, 140},
                                          {94, 201, 98}, {253, 231, 37}}};
// Blue / white / red; the red end is the blue end with r and b swapped.
constexpr std::array<Rgb, 3> kDiverging{{{59, 76, 192}, {247, 247, 247}, {192, 76, 59}}};
constexpr std::array<Rgb, 20> kCategorical{{
    {31, 119, 180}, {255, 127, 14}, {44, 160, 44},   {214, 39, 40},   {148, 103, 189},
    {140, 86, 75},  {227, 119, 194}, {127, 127, 127}, {188, 189, 34},  {23, 190, 207},
    {174, 199, 232}, {255, 187, 120}, {152, 223, 138}, {255, 152, 150}, {197, 176, 213},
    {196, 156, 148}, {247, 182, 210}, {199, 199, 199}, {219, 219, 141}, {158, 218, 229}}};

}  // namespace

Rgb palette_color(Palette palette, double value, double min, double max) {
  switch (palette) {
    case Palette::sequential: {
      const double t = max > min ? (value - min) / (max - min) : 0.5;
      return ramp(kSequential, t);
    }
    case Palette::diverging: {
      const double extent = std::max(std::abs(min), std::abs(max));
      const double t = extent > 0.0 ? 0.5 + 0.5 * value / extent : 0.5;
      return ramp(kDiverging, t);
    }
    case Palette::categorical: {
      const auto id = static_cast<long long>(std::llround(value));
      const auto n = static_cast<long long>(kCategorical.size());
      return kCategorical[static_cast<std::size_t>(((id % n) + n) % n)];
    }
  }
  return {};
}

namespace {

constexpr std::uint32_t kLegendHeight = 40;

std::string hex(Rgb c) {
  char buf[8];
  std::snprintf(buf, sizeof buf, "#%02x%02x%02x", c.r, c.g, c.b);
  return buf;
}

void put(RgbaImage& img, std::uint32_t x, std::uint32_t y, Rgb c) {
  auto* p = &img.pixels[(std::size_t{y} * img.width + x) * 4];
  p[0] = c.r;
  p[1] = c.g;
  p[2] = c.b;
  p[3] = 255;
}

std::string escape_xml(const std::string& s) {
  std::string out;
  for (const char ch : s) {
    switch (ch) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += ch;
    }
  }
  return out;
}

}  // namespace

RenderedMap render_scalar_map(const RasterAssignment& raster, std::span<const double> values,
                              Palette palette, const std::string& title) {
  for (const auto o : raster.owner) {
    if (o != RasterAssignment::kOutside && static_cast<std::size_t>(o) >= values.size()) {
      throw ValidationError("raster references node " + std::to_string(o) + " but only " +
                            std::to_string(values.size()) + " values were given");
    }
  }
  if (values.empty()) throw ValidationError("no values to render");
  for (const double v : values) {
    if (!std::isfinite(v)) throw ValidationError("non-finite value in map");
  }
  RenderedMap out;
  out.min = *std::min_element(values.begin(), values.end());
  out.max = *std::max_element(values.begin(), values.end());

  std::vector<Rgb> colors(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    colors[i] = palette_color(palette, values[i], out.min, out.max);
  }

  const auto w = raster.width;
  const auto h = raster.height;
  out.image.width = w;
  out.image.height = h + kLegendHeight;
  out.image.pixels.assign(std::size_t{w} * out.image.height * 4, 0);

  // Row runs per owner.
  std::vector<std::string> paths(values.size());
  for (std::uint32_t y = 0; y < h; ++y) {
    std::uint32_t x = 0;
    while (x < w) {
      const auto o = raster.at(x, y);
      std::uint32_t end = x + 1;
      while (end < w && raster.at(end, y) == o) ++end;
      if (o != RasterAssignment::kOutside) {
        for (std::uint32_t i = x; i < end; ++i) put(out.image, i, y, colors[o]);
        paths[o] += "M" + std::to_string(x) + " " + std::to_string(y) + "h" +
                    std::to_string(end - x) + "v1h-" + std::to_string(end - x) + "z";
      }
      x = end;
    }
  }

  // Legend: a horizontal bar across the middle 60% of the width.
  const std::uint32_t bar_x0 = w / 5;
  const std::uint32_t bar_x1 = w - w / 5;
  const std::uint32_t bar_y0 = h + 8;
  const std::uint32_t bar_y1 = h + 24;
  std::vector<Rgb> legend(std::max<std::uint32_t>(bar_x1 - bar_x0, 1));
  for (std::size_t i = 0; i < legend.size(); ++i) {
    const double t = legend.size() > 1 ? static_cast<double>(i) / static_cast<double>(legend.size() - 1) : 0.5;
    legend[i] = palette_color(palette, out.min + t * (out.max - out.min), out.min, out.max);
  }
  for (std::uint32_t y = bar_y0; y < bar_y1 && y < out.image.height; ++y) {
    for (std::uint32_t x = bar_x0; x < bar_x1; ++x) put(out.image, x, y, legend[x - bar_x0]);
  }

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\""
      << out.image.height << "\" viewBox=\"0 0 " << w << ' ' << out.image.height
      << "\" shape-rendering=\"crispEdges\">\n";
  if (!title.empty()) svg << "<title>" << escape_xml(title) << "</title>\n";
  svg << "<g id=\"regions\">\n";
  for (std::size_t node = 0; node < paths.size(); ++node) {
    if (paths[node].empty()) continue;
    svg << "<path data-node=\"" << node << "\" fill=\"" << hex(colors[node]) << "\" d=\""
        << paths[node] << "\"/>\n";
  }
  svg << "</g>\n<g id=\"legend\">\n<defs><linearGradient id=\"ramp\">\n";
  constexpr int kStops = 11;
  for (int s = 0; s < kStops; ++s) {
    const double t = s / static_cast<double>(kStops - 1);
    svg << "<stop offset=\"" << text::format_fixed(t, 2) << "\" stop-color=\""
        << hex(palette_color(palette, out.min + t * (out.max - out.min), out.min, out.max))
        << "\"/>\n";
  }
  svg << "</linearGradient></defs>\n";
  svg << "<rect x=\"" << bar_x0 << "\" y=\"" << bar_y0 << "\" width=\"" << bar_x1 - bar_x0
      << "\" height=\"" << bar_y1 - bar_y0 << "\" fill=\"url(#ramp)\"/>\n";
  svg << "<text x=\"" << bar_x0 << "\" y=\"" << h + 37 << "\" font-size=\"12\">"
      << text::format_general(out.min, 6) << "</text>\n";
  svg << "<text x=\"" << bar_x1 << "\" y=\"" << h + 37
      << "\" font-size=\"12\" text-anchor=\"end\">" << text::format_general(out.max, 6)
      << "</text>\n</g>\n</svg>\n";
  out.svg = svg.str();
  return out;
}

void write_png(const std::filesystem::path& path, const RgbaImage& image) {
  std::FILE* fp = std::fopen(path.string().c_str(), "wb");
  if (fp == nullptr) throw IoError("cannot open '" + path.string() + "' for writing");
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  png_infop info = png != nullptr ? png_create_info_struct(png) : nullptr;
  if (png == nullptr || info == nullptr || setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    std::fclose(fp);
    throw IoError("PNG encoding failed for '" + path.string() + "'");
  }
  png_init_io(png, fp);
  png_set_IHDR(png, info, image.width, image.height, 8, PNG_COLOR_TYPE_RGBA, PNG_INTERLACE_NONE,
               PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  for (std::uint32_t y = 0; y < image.height; ++y) {
    png_write_row(png, const_cast<png_bytep>(&image.pixels[std::size_t{y} * image.width * 4]));
  }
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
  if (std::fclose(fp) != 0) throw IoError("write failure on '" + path.string() + "'");
}

std::vector<std::uint32_t> assign_nodes_to_sites(const Partition& planted,
                                                 std::span<const GeoPoint> sites) {
  const auto n = planted.node_count();
  if (sites.size() != n) {
    throw ValidationError("site count " + std::to_string(sites.size()) + " differs from node count " +
                          std::to_string(n));
  }
  const auto members = all_community_members(planted);
  std::vector<std::size_t> order(members.size());
  for (std::size_t c = 0; c < order.size(); ++c) order[c] = c;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return members[a].size() > members[b].size();
  });

  std::vector<bool> taken(n, false);
  const auto nearest = [&](GeoPoint target) {
    std::size_t best = n;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t s = 0; s < n; ++s) {
      if (taken[s]) continue;
      const double dx = sites[s].lon - target.lon;
      const double dy = sites[s].lat - target.lat;
      const double d = dx * dx + dy * dy;
      if (d < best_d) {
        best_d = d;
        best = s;
      }
    }
    return best;
  };

  std::vector<std::uint32_t> site_of(n);
  std::size_t seed_site = 0;
  for (std::size_t s = 1; s < n; ++s) {
    if (sites[s].lon < sites[seed_site].lon ||
        (sites[s].lon == sites[seed_site].lon && sites[s].lat < sites[seed_site].lat)) {
      seed_site = s;
    }
  }
  bool first = true;
  GeoPoint previous_centroid{};
  for (const auto c : order) {
    const auto& group = members[c];
    std::size_t site = first ? seed_site : nearest(previous_centroid);
    first = false;
    double sum_lon = 0.0;
    double sum_lat = 0.0;
    for (std::size_t k = 0; k < group.size(); ++k) {
      if (k > 0) {
        const auto count = static_cast<double>(k);
        site = nearest({sum_lon / count, sum_lat / count});
      }
      taken[site] = true;
      site_of[group[k]] = static_cast<std::uint32_t>(site);
      sum_lon += sites[site].lon;
      sum_lat += sites[site].lat;
    }
    const auto count = static_cast<double>(group.size());
    previous_centroid = {sum_lon / count, sum_lat / count};
  }
  return site_of;
}

}  // namespace scaledinc
