#include "scaledinc/seasons.hpp"

#include <set>

#include "scaledinc/errors.hpp"
#include "scaledinc/text_io.hpp"

namespace scaledinc {

SeasonNetwork build_season_network(const SeasonSchedule& schedule, const NodeUniverse& universe,
                                   bool allow_unknown) {
  const auto year = std::to_string(schedule.year);
  if (schedule.games.empty()) throw ValidationError("season " + year + ": empty game list");

  // Status per node: conference index, or -1 for a singleton, -2 for not yet a member.
  constexpr int kSingleton = -1;
  constexpr int kOutside = -2;
  std::vector<int> status(universe.size(), kOutside);
  std::map<std::string, int> conference_index;
  for (const auto& [team, conference] : schedule.membership) {
    const auto id = universe.find(team);
    if (!id) throw ValidationError("season " + year + ": unknown team '" + team + "' in membership");
    if (conference == kNotYetMember) {
      status[*id] = kOutside;
    } else if (conference == kIndependent) {
      status[*id] = kSingleton;
    } else {
      const auto [it, inserted] =
          conference_index.try_emplace(conference, static_cast<int>(conference_index.size()));
      status[*id] = it->second;
    }
  }

  SeasonNetwork out;
  out.year = schedule.year;
  std::vector<Edge> edges;
  for (const auto& [a, b] : schedule.games) {
    const auto ia = universe.find(a);
    const auto ib = universe.find(b);
    if (!ia || !ib) {
      if (allow_unknown) {
        ++out.dropped_games;
        continue;
      }
      throw ValidationError("season " + year + ": unknown team '" + (!ia ? a : b) + "'");
    }
    if (*ia == *ib) throw ValidationError("season " + year + ": team '" + a + "' plays itself");
    if (status[*ia] == kOutside || status[*ib] == kOutside) {
      ++out.dropped_games;
      continue;
    }
    edges.push_back({*ia, *ib});
  }
  out.graph = Graph(universe.size(), std::move(edges));

  std::vector<std::int64_t> raw(universe.size());
  std::int64_t next_singleton = static_cast<std::int64_t>(conference_index.size());
  for (std::size_t i = 0; i < raw.size(); ++i) {
    raw[i] = status[i] >= 0 ? status[i] : next_singleton++;
  }
  out.ground_truth = Partition(std::span<const std::int64_t>(raw));
  return out;
}

std::vector<ConferenceSize> conference_size_table(const std::vector<SeasonSchedule>& seasons) {
  std::set<std::string> conferences;
  for (const auto& s : seasons) {
    for (const auto& [team, conference] : s.membership) {
      if (conference != kIndependent && conference != kNotYetMember) conferences.insert(conference);
    }
  }
  std::vector<ConferenceSize> rows;
  for (const auto& s : seasons) {
    std::map<std::string, std::size_t> counts;
    std::size_t independents = 0;
    for (const auto& [team, conference] : s.membership) {
      if (conference == kIndependent) {
        ++independents;
      } else if (conference != kNotYetMember) {
        ++counts[conference];
      }
    }
    for (const auto& c : conferences) rows.push_back({s.year, c, counts[c]});
    rows.push_back({s.year, kIndependentColumn, independents});
  }
  return rows;
}

std::pair<int, int> parse_year_range(const std::string& text) {
  const auto parts = text::split_on(text, ':');
  if (parts.size() != 2) throw ValidationError("year range must look like 1995:2009");
  const auto first = static_cast<int>(text::parse_integer(parts[0], "--years", 1));
  const auto last = static_cast<int>(text::parse_integer(parts[1], "--years", 1));
  if (first > last) throw ValidationError("year range is empty");
  return {first, last};
}

namespace {

std::vector<std::pair<std::size_t, std::vector<std::string>>> read_csv(
    const std::filesystem::path& path, std::size_t columns) {
  const auto lines = text::read_lines(path);
  std::vector<std::pair<std::size_t, std::vector<std::string>>> rows;
  bool first = true;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (text::is_skippable(lines[i])) continue;
    auto fields = text::split_on(lines[i], ',');
    if (first && !fields.empty() && fields[0] == "year") {
      first = false;
      continue;
    }
    first = false;
    if (fields.size() != columns) {
      throw ParseError(path.string(), i + 1,
                       "expected " + std::to_string(columns) + " comma-separated fields");
    }
    for (const auto& f : fields) {
      if (f.empty()) throw ParseError(path.string(), i + 1, "empty field");
    }
    rows.emplace_back(i + 1, std::move(fields));
  }
  return rows;
}

}  // namespace

SeasonData load_seasons(const std::filesystem::path& games, const std::filesystem::path& membership,
                        std::optional<std::pair<int, int>> years) {
  const auto in_range = [&](int y) { return !years || (y >= years->first && y <= years->second); };
  SeasonData data;
  std::map<int, SeasonSchedule> by_year;
  for (const auto& [line, f] : read_csv(membership, 3)) {
    const auto year = static_cast<int>(text::parse_integer(f[0], membership.string(), line));
    data.universe.intern(f[1]);
    if (!in_range(year)) continue;
    auto& season = by_year[year];
    season.year = year;
    if (!season.membership.emplace(f[1], f[2]).second) {
      throw ParseError(membership.string(), line, "duplicate membership for '" + f[1] + "'");
    }
  }
  if (data.universe.size() == 0) throw ValidationError(membership.string() + ": no teams");
  for (const auto& [line, f] : read_csv(games, 3)) {
    const auto year = static_cast<int>(text::parse_integer(f[0], games.string(), line));
    if (!in_range(year)) continue;
    auto& season = by_year[year];
    season.year = year;
    season.games.emplace_back(f[1], f[2]);
  }
  for (auto& [year, season] : by_year) data.seasons.push_back(std::move(season));
  if (data.seasons.empty()) throw ValidationError("no seasons in the requested year range");
  return data;
}

}  // namespace scaledinc
