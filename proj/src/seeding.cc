#include "btrank/seeding.h"

#include <algorithm>
#include <set>

#include "btrank/errors.h"
#include "fmt/format.h"
#include "json.hpp"

namespace btrank {
namespace {

struct Candidate {
  std::string team;
  std::string division;
  double key;
};

bool Better(const Candidate& a, const Candidate& b) {
  if (a.key != b.key) return a.key > b.key;
  return a.team < b.team;
}

}  // namespace

LeagueStructure ParseLeagueStructure(std::string_view bytes) {
  using nlohmann::json;
  json doc;
  try {
    doc = json::parse(bytes);
  } catch (const json::parse_error& e) {
    throw ParseError(fmt::format("invalid league JSON: {}", e.what()));
  }
  LeagueStructure league;
  try {
    for (const auto& c : doc.at("conferences")) {
      Conference conference{c.at("name").get<std::string>(), {}};
      for (const auto& d : c.at("divisions")) {
        conference.divisions.push_back(
            {d.at("name").get<std::string>(),
             d.at("teams").get<std::vector<std::string>>()});
      }
      league.conferences.push_back(std::move(conference));
    }
  } catch (const json::exception& e) {
    throw ConfigError(fmt::format("malformed league structure: {}", e.what()));
  }
  return league;
}

std::vector<ConferenceSeeds> SelectSeeds(
    const std::map<std::string, double>& keys, const LeagueStructure& league,
    int seeds_per_conference, int division_winners) {
  if (league.conferences.empty()) throw ConfigError("league has no conferences");
  if (division_winners < 1 || seeds_per_conference < division_winners) {
    throw ConfigError(fmt::format(
        "need 1 <= division winners ({}) <= seeds per conference ({})",
        division_winners, seeds_per_conference));
  }
  std::set<std::string> listed;
  std::vector<ConferenceSeeds> out;
  for (const auto& conference : league.conferences) {
    if (static_cast<int>(conference.divisions.size()) != division_winners) {
      throw ConfigError(fmt::format(
          "conference {} has {} divisions, expected {}", conference.name,
          conference.divisions.size(), division_winners));
    }
    std::vector<Candidate> winners, others;
    for (const auto& division : conference.divisions) {
      if (division.teams.empty()) {
        throw ConfigError(fmt::format("division {} of {} is empty",
                                      division.name, conference.name));
      }
      std::vector<Candidate> members;
      for (const auto& team : division.teams) {
        if (!listed.insert(team).second) {
          throw ConfigError(
              fmt::format("team {} is listed in more than one division", team));
        }
        const auto it = keys.find(team);
        if (it == keys.end()) {
          throw ConfigError(fmt::format("team {} has no rating", team));
        }
        members.push_back({team, division.name, it->second});
      }
      std::sort(members.begin(), members.end(), Better);
      winners.push_back(members.front());
      others.insert(others.end(), members.begin() + 1, members.end());
    }
    if (static_cast<int>(winners.size() + others.size()) <
        seeds_per_conference) {
      throw ConfigError(fmt::format("conference {} has fewer than {} teams",
                                    conference.name, seeds_per_conference));
    }
    std::sort(winners.begin(), winners.end(), Better);
    std::sort(others.begin(), others.end(), Better);
    ConferenceSeeds seeds{conference.name, {}};
    for (const auto& w : winners) {
      seeds.seeds.push_back({static_cast<int>(seeds.seeds.size()) + 1, w.team,
                             w.division, w.key, true});
    }
    for (const auto& o : others) {
      if (static_cast<int>(seeds.seeds.size()) == seeds_per_conference) break;
      seeds.seeds.push_back({static_cast<int>(seeds.seeds.size()) + 1, o.team,
                             o.division, o.key, false});
    }
    out.push_back(std::move(seeds));
  }
  return out;
}

std::map<std::string, double> MeritKeys(const FitResult& fit) {
  if (fit.teams.size() != fit.merits.size()) {
    throw DimensionError("fit result has no team ids for its merits");
  }
  std::map<std::string, double> keys;
  for (size_t i = 0; i < fit.teams.size(); ++i) {
    keys[fit.teams[i]] = fit.merits[i];
  }
  return keys;
}

std::map<std::string, double> WinningPercentages(const Dataset& dataset) {
  const auto& totals = dataset.totals();
  const int t = dataset.num_teams();
  std::map<std::string, double> pct;
  for (int i = 0; i < t; ++i) {
    double wins = 0.0, ties = 0.0, games = 0.0;
    for (int j = 0; j < t; ++j) {
      wins += totals.wins(i, j);
      ties += totals.ties(i, j);
      games += totals.games(i, j);
    }
    pct[dataset.teams()[i]] = games > 0 ? (wins + 0.5 * ties) / games : 0.0;
  }
  return pct;
}

}  // namespace btrank
