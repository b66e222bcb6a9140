#include "scaledinc/reports.hpp"

#include <sstream>

#include "json.hpp"
#include "scaledinc/errors.hpp"
#include "scaledinc/text_io.hpp"

namespace scaledinc {

void write_score_file(const std::filesystem::path& path, const NodeUniverse& universe,
                      std::span<const double> values) {
  if (values.size() != universe.size()) throw ValidationError("score count differs from node count");
  auto out = text::open_output(path);
  for (std::size_t i = 0; i < values.size(); ++i) {
    out << universe.label(static_cast<NodeId>(i)) << '\t' << text::format_general(values[i], 12)
        << '\n';
  }
  if (!out) throw IoError("write failure on '" + path.string() + "'");
}

std::vector<double> load_score_file(const std::filesystem::path& path, const NodeUniverse& universe) {
  const auto lines = text::read_lines(path);
  const auto name = path.string();
  std::vector<double> values(universe.size());
  std::vector<bool> seen(universe.size(), false);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (text::is_skippable(lines[i])) continue;
    const auto fields = text::split_fields(lines[i]);
    if (fields.size() != 2) throw ParseError(name, i + 1, "expected 'label<TAB>value'");
    const auto id = universe.find(fields[0]);
    if (!id) throw ParseError(name, i + 1, "unknown label '" + fields[0] + "'");
    if (seen[*id]) throw ParseError(name, i + 1, "duplicate label '" + fields[0] + "'");
    seen[*id] = true;
    values[*id] = text::parse_real(fields[1], name, i + 1);
  }
  for (std::size_t i = 0; i < seen.size(); ++i) {
    if (!seen[i]) throw ValidationError(name + ": missing value for '" + universe.label(i) + "'");
  }
  return values;
}

std::string similarity_report(const JaccardMatrix& j, std::span<const double> weights,
                              std::span<const std::string> names) {
  std::ostringstream out;
  out << "# pairwise Jaccard similarity of co-membership pairs\n";
  out << "n\t" << j.size() << '\n';
  for (std::size_t i = 0; i < names.size(); ++i) out << "partition\t" << i + 1 << '\t' << names[i] << '\n';
  for (std::size_t r = 0; r < j.size(); ++r) {
    out << "matrix\t" << r + 1;
    for (std::size_t c = 0; c < j.size(); ++c) out << '\t' << text::format_fixed(j(r, c), 6);
    out << '\n';
  }
  for (std::size_t c = 0; c < j.size(); ++c) {
    out << "column_sum\t" << c + 1 << '\t' << text::format_fixed(j.column_sum(c), 6) << '\n';
  }
  for (std::size_t c = 0; c < weights.size(); ++c) {
    out << "weight\t" << c + 1 << '\t' << text::format_fixed(weights[c], 6) << '\n';
  }
  return out.str();
}

void write_sidecar(const std::filesystem::path& path, const MapSidecar& sidecar) {
  nlohmann::ordered_json doc;
  doc["kind"] = sidecar.kind;
  doc["scheme"] = sidecar.scheme;
  doc["n"] = sidecar.n;
  doc["comparisons"] = sidecar.comparisons;
  if (sidecar.reference) doc["reference"] = *sidecar.reference;
  if (sidecar.community) doc["community"] = *sidecar.community;
  if (sidecar.threshold) doc["threshold"] = *sidecar.threshold;
  doc["weights"] = sidecar.weights;
  doc["inputs"] = sidecar.inputs;
  write_text(path, doc.dump(2) + "\n");
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  auto out = text::open_output(path);
  out << text;
  if (!out) throw IoError("write failure on '" + path.string() + "'");
}

}  // namespace scaledinc
