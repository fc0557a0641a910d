#ifndef BTRANK_INGESTION_H_
#define BTRANK_INGESTION_H_

// Reading game records and count matrices.
//
// CSV records:     header `home,away,outcome[,repeat]` (any column order,
//                  unknown columns ignored); outcome is one of home_win,
//                  away_win, tie (case-insensitive).
// JSON records:    [{"home": "A", "away": "B", "outcome": "tie", "repeat": 3}]
// JSON matrix:     {"teams": [...], "a": [[...]]}  (venue-free; optional
//                  symmetric tie matrix "t"), or
//                  {"teams": [...], "a_home": [[...]], "a_away": [[...]],
//                   "t_home": [[...]]}

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "btrank/types.h"

namespace btrank {

enum class Outcome { kHomeWin, kAwayWin, kTie };

struct GameRecord {
  std::string home;
  std::string away;
  Outcome outcome = Outcome::kHomeWin;
  std::int64_t repeat = 1;

  bool operator==(const GameRecord&) const = default;
};

enum class RecordFormat { kCsv, kJson };
enum class DataFormat { kCsv, kRecordsJson, kMatrixJson };

std::vector<GameRecord> ParseRecords(std::string_view bytes,
                                     RecordFormat format);
std::string SerializeRecords(std::span<const GameRecord> records,
                             RecordFormat format);

// Teams are indexed by first appearance (home before away within a record).
Dataset Aggregate(std::span<const GameRecord> records);

Dataset ParseMatrix(std::string_view bytes);

// By extension (.csv) or JSON shape (array -> records, object -> matrix).
DataFormat DetectFormat(std::string_view path, std::string_view bytes);

// Reads a file; `format` defaults by extension (.csv) or JSON shape
// (array -> records, object -> matrix).
Dataset LoadDataset(const std::string& path,
                    std::optional<DataFormat> format = std::nullopt);
Dataset ParseDataset(std::string_view bytes, DataFormat format);

// Reads a JSON t x t real matrix (for matrix perturbation priors).
RealMatrix ParseRealMatrix(std::string_view bytes);

std::string ReadFile(const std::string& path);

}  // namespace btrank

#endif  // BTRANK_INGESTION_H_
