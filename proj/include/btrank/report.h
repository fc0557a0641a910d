#ifndef BTRANK_REPORT_H_
#define BTRANK_REPORT_H_

// JSON (full precision) and aligned text (3 decimals) renderings of the
// library's results.

#include <string>
#include <vector>

#include "btrank/connectivity.h"
#include "btrank/ranking.h"
#include "btrank/seeding.h"
#include "btrank/sim.h"
#include "btrank/types.h"
#include "json.hpp"

namespace btrank {

using Json = nlohmann::ordered_json;

// Pretty-printed with a trailing newline.
std::string DumpJson(const Json& json);

Json FitResultToJson(const FitResult& fit);
// Inverse of FitResultToJson; throws ParseError on schema violations.
FitResult FitResultFromJson(const Json& json);

Json RankingToJson(const Ranking& ranking, const std::vector<std::string>& teams);
Json SweepToJson(const SweepResult& sweep, const std::vector<std::string>& teams);
Json MonotoneRatioToJson(const MonotoneRatioReport& report,
                         const std::vector<std::string>& teams);
Json SeedsToJson(const std::vector<ConferenceSeeds>& seeds);
Json ConsistencyToJson(const ConsistencyReport& report);
Json WitnessToJson(const PartitionWitness& witness,
                   const std::vector<std::string>& teams);
// `results` may omit condition C (venueless data); it is then reported as
// "not applicable".
Json ChecksToJson(const std::vector<ConditionResult>& results,
                  const std::vector<std::string>& teams);

// 3 decimals; values below 1e-3 in magnitude use "%.1e".
std::string FormatNumber(double x);

std::string FitTable(const FitResult& fit);
std::string SweepTable(const SweepResult& sweep,
                       const std::vector<std::string>& teams);
std::string MonotoneRatioTable(const MonotoneRatioReport& report,
                               const std::vector<std::string>& teams);
std::string SeedsTable(const std::vector<ConferenceSeeds>& seeds);
std::string ConsistencyTable(const ConsistencyReport& report);
std::string ChecksTable(const std::vector<ConditionResult>& results,
                        const std::vector<std::string>& teams);

}  // namespace btrank

#endif  // BTRANK_REPORT_H_
