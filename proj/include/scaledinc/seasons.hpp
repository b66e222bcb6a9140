#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "scaledinc/graph.hpp"

namespace scaledinc {

// Membership status values besides a conference name.
inline constexpr const char* kIndependent = "independent";
inline constexpr const char* kNotYetMember = "none";
inline constexpr const char* kIndependentColumn = "Ind.";

struct SeasonSchedule {
  int year = 0;
  std::vector<std::pair<std::string, std::string>> games;
  // team -> conference, kIndependent or kNotYetMember. Universe teams without
  // an entry count as not yet members.
  std::map<std::string, std::string> membership;
};

struct SeasonNetwork {
  int year = 0;
  Graph graph;
  // One community per conference; independents and not-yet-members are
  // singletons.
  Partition ground_truth;
  std::size_t dropped_games = 0;
};

// One edge per distinct pair of member teams that met at least once. Games
// involving a not-yet-member are dropped and that team stays isolated.
// Unknown labels are an error unless allow_unknown, in which case those games
// are dropped. Throws ValidationError for an empty game list.
SeasonNetwork build_season_network(const SeasonSchedule& schedule, const NodeUniverse& universe,
                                   bool allow_unknown = false);

struct ConferenceSize {
  int year = 0;
  std::string conference;
  std::size_t size = 0;

  friend bool operator==(const ConferenceSize&, const ConferenceSize&) = default;
};

// One row per (season, conference) over every conference seen in any season
// (alphabetical, independents last as "Ind."), zero where absent.
// Not-yet-members are not counted.
std::vector<ConferenceSize> conference_size_table(const std::vector<SeasonSchedule>& seasons);

struct SeasonData {
  NodeUniverse universe;  // teams in order of first appearance in the membership file
  std::vector<SeasonSchedule> seasons;  // ascending year
};

// games: "year,team_a,team_b"; membership: "year,team,conference|independent|none".
// An optional header row starting with "year" is skipped. When years is set,
// only seasons in [first, last] are kept.
SeasonData load_seasons(const std::filesystem::path& games, const std::filesystem::path& membership,
                        std::optional<std::pair<int, int>> years = std::nullopt);

// Parses "first:last".
std::pair<int, int> parse_year_range(const std::string& text);

}  // namespace scaledinc
