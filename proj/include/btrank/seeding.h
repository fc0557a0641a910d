#ifndef BTRANK_SEEDING_H_
#define BTRANK_SEEDING_H_

// Playoff seeding: per conference, each division's best team is a division
// winner; winners take seeds 1..W ordered by key, and the best remaining
// teams take the wild-card seeds. The key is pluggable (fitted merit or
// winning percentage). Equal keys are broken by team id, ascending.

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "btrank/types.h"

namespace btrank {

struct Division {
  std::string name;
  std::vector<std::string> teams;
};

struct Conference {
  std::string name;
  std::vector<Division> divisions;
};

struct LeagueStructure {
  std::vector<Conference> conferences;
};

// {"conferences": [{"name": "AFC", "divisions":
//     [{"name": "East", "teams": ["New England Patriots", ...]}, ...]}]}
LeagueStructure ParseLeagueStructure(std::string_view bytes);

struct Seed {
  int seed = 0;
  std::string team;
  std::string division;
  double key = 0.0;
  bool division_winner = false;
};

struct ConferenceSeeds {
  std::string conference;
  std::vector<Seed> seeds;
};

// Throws ConfigError on a malformed structure (a team listed twice, an
// empty division, a division count different from `division_winners`, a
// team without a key, too few teams for the seed count).
std::vector<ConferenceSeeds> SelectSeeds(
    const std::map<std::string, double>& keys, const LeagueStructure& league,
    int seeds_per_conference = 6, int division_winners = 4);

// Team -> fitted merit.
std::map<std::string, double> MeritKeys(const FitResult& fit);

// Team -> (wins + ties / 2) / games.
std::map<std::string, double> WinningPercentages(const Dataset& dataset);

}  // namespace btrank

#endif  // BTRANK_SEEDING_H_
