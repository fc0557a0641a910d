#include "btrank/ingestion.h"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <unordered_map>

#include "btrank/errors.h"
#include "fmt/format.h"
#include "json.hpp"

namespace btrank {
namespace {

using nlohmann::json;

bool IsValidUtf8(std::string_view s) {
  size_t i = 0;
  while (i < s.size()) {
    const auto c = static_cast<unsigned char>(s[i]);
    int extra = 0;
    if (c < 0x80) {
      extra = 0;
    } else if ((c >> 5) == 0x6) {
      extra = 1;
    } else if ((c >> 4) == 0xE) {
      extra = 2;
    } else if ((c >> 3) == 0x1E) {
      extra = 3;
    } else {
      return false;
    }
    if (i + extra >= s.size()) return false;
    for (int k = 1; k <= extra; ++k) {
      const auto cont = static_cast<unsigned char>(s[i + k]);
      if ((cont >> 6) != 0x2) return false;
    }
    i += extra + 1;
  }
  return true;
}

std::string Trim(std::string_view s) {
  size_t begin = 0;
  size_t end = s.size();
  while (begin < end && std::isspace(static_cast<unsigned char>(s[begin]))) {
    ++begin;
  }
  while (end > begin && std::isspace(static_cast<unsigned char>(s[end - 1]))) {
    --end;
  }
  return std::string(s.substr(begin, end - begin));
}

std::string Lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return s;
}

// Splits one CSV line; supports double-quoted fields with "" escapes.
std::optional<std::vector<std::string>> SplitCsvLine(std::string_view line) {
  std::vector<std::string> fields;
  std::string field;
  bool quoted = false;
  bool was_quoted = false;
  for (size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field += c;
      }
    } else if (c == '"') {
      quoted = true;
      was_quoted = true;
    } else if (c == ',') {
      fields.push_back(was_quoted ? field : Trim(field));
      field.clear();
      was_quoted = false;
    } else {
      field += c;
    }
  }
  if (quoted) return std::nullopt;
  fields.push_back(was_quoted ? field : Trim(field));
  return fields;
}

std::optional<Outcome> ParseOutcome(std::string_view token) {
  const std::string lower = Lower(Trim(token));
  if (lower == "home_win") return Outcome::kHomeWin;
  if (lower == "away_win") return Outcome::kAwayWin;
  if (lower == "tie") return Outcome::kTie;
  return std::nullopt;
}

std::string_view OutcomeToken(Outcome outcome) {
  switch (outcome) {
    case Outcome::kHomeWin:
      return "home_win";
    case Outcome::kAwayWin:
      return "away_win";
    case Outcome::kTie:
      return "tie";
  }
  return "";
}

std::optional<std::int64_t> ParsePositiveInt(std::string_view token) {
  const std::string s = Trim(token);
  if (s.empty()) return std::nullopt;
  std::int64_t value = 0;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return std::nullopt;
    value = value * 10 + (c - '0');
    if (value > (std::int64_t{1} << 40)) return std::nullopt;
  }
  if (value < 1) return std::nullopt;
  return value;
}

std::vector<GameRecord> ParseCsvRecords(std::string_view bytes) {
  std::vector<std::string> lines;
  {
    std::string current;
    for (char c : bytes) {
      if (c == '\n') {
        lines.push_back(current);
        current.clear();
      } else if (c != '\r') {
        current += c;
      }
    }
    if (!current.empty()) lines.push_back(current);
  }
  size_t header_line = 0;
  while (header_line < lines.size() && Trim(lines[header_line]).empty()) {
    ++header_line;
  }
  if (header_line == lines.size()) {
    throw ParseError("line 1: CSV input has no header row", 1);
  }
  const auto header = SplitCsvLine(lines[header_line]);
  if (!header) {
    throw ParseError(
        fmt::format("line {}: unterminated quote in header", header_line + 1),
        static_cast<int>(header_line) + 1);
  }
  std::map<std::string, int> columns;
  for (int k = 0; k < static_cast<int>(header->size()); ++k) {
    columns.emplace(Lower((*header)[k]), k);
  }
  for (const char* required : {"home", "away", "outcome"}) {
    if (!columns.contains(required)) {
      throw ParseError(
          fmt::format("line {}: CSV header lacks required column '{}'",
                      header_line + 1, required),
          static_cast<int>(header_line) + 1);
    }
  }
  const int home_col = columns["home"];
  const int away_col = columns["away"];
  const int outcome_col = columns["outcome"];
  const int repeat_col = columns.contains("repeat") ? columns["repeat"] : -1;

  std::vector<GameRecord> records;
  for (size_t k = header_line + 1; k < lines.size(); ++k) {
    const int line_no = static_cast<int>(k) + 1;
    if (Trim(lines[k]).empty()) continue;
    const auto fields = SplitCsvLine(lines[k]);
    if (!fields) {
      throw ParseError(fmt::format("line {}: unterminated quote", line_no),
                       line_no);
    }
    const int needed =
        std::max({home_col, away_col, outcome_col, repeat_col}) + 1;
    if (static_cast<int>(fields->size()) < needed) {
      throw ParseError(fmt::format("line {}: expected at least {} fields, got {}",
                                   line_no, needed, fields->size()),
                       line_no);
    }
    GameRecord record;
    record.home = (*fields)[home_col];
    record.away = (*fields)[away_col];
    if (record.home.empty() || record.away.empty()) {
      throw ParseError(fmt::format("line {}: empty team id", line_no), line_no);
    }
    const auto outcome = ParseOutcome((*fields)[outcome_col]);
    if (!outcome) {
      throw ParseError(fmt::format("line {}: unknown outcome '{}'", line_no,
                                   (*fields)[outcome_col]),
                       line_no);
    }
    record.outcome = *outcome;
    if (repeat_col >= 0 && !Trim((*fields)[repeat_col]).empty()) {
      const auto repeat = ParsePositiveInt((*fields)[repeat_col]);
      if (!repeat) {
        throw ParseError(fmt::format("line {}: repeat must be a positive "
                                     "integer, got '{}'",
                                     line_no, (*fields)[repeat_col]),
                         line_no);
      }
      record.repeat = *repeat;
    }
    if (record.home == record.away) {
      throw SelfPlayError(
          fmt::format("line {}: team '{}' cannot play itself", line_no,
                      record.home),
          line_no);
    }
    records.push_back(std::move(record));
  }
  return records;
}

json ParseJson(std::string_view bytes) {
  try {
    return json::parse(bytes);
  } catch (const json::parse_error& e) {
    throw ParseError(fmt::format("invalid JSON: {}", e.what()));
  }
}

std::vector<GameRecord> ParseJsonRecords(std::string_view bytes) {
  const json doc = ParseJson(bytes);
  if (!doc.is_array()) throw ParseError("JSON records must be an array");
  std::vector<GameRecord> records;
  for (int k = 0; k < static_cast<int>(doc.size()); ++k) {
    const json& element = doc[k];
    auto fail = [k](const std::string& what) -> ParseError {
      return ParseError(fmt::format("element {}: {}", k, what), k);
    };
    if (!element.is_object()) throw fail("expected an object");
    for (const char* key : {"home", "away", "outcome"}) {
      if (!element.contains(key) || !element[key].is_string()) {
        throw fail(fmt::format("missing string field '{}'", key));
      }
    }
    GameRecord record;
    record.home = element["home"].get<std::string>();
    record.away = element["away"].get<std::string>();
    if (record.home.empty() || record.away.empty()) throw fail("empty team id");
    const auto outcome = ParseOutcome(element["outcome"].get<std::string>());
    if (!outcome) throw fail("unknown outcome");
    record.outcome = *outcome;
    if (element.contains("repeat")) {
      const json& repeat = element["repeat"];
      if (!repeat.is_number_integer() || repeat.get<std::int64_t>() < 1) {
        throw fail("repeat must be a positive integer");
      }
      record.repeat = repeat.get<std::int64_t>();
    }
    if (record.home == record.away) {
      throw SelfPlayError(
          fmt::format("element {}: team '{}' cannot play itself", k,
                      record.home),
          k);
    }
    records.push_back(std::move(record));
  }
  return records;
}

CountMatrix ReadCountMatrix(const json& doc, const char* key, int t) {
  const json& rows = doc[key];
  if (!rows.is_array() || static_cast<int>(rows.size()) != t) {
    throw ShapeError(fmt::format("'{}' must have {} rows", key, t));
  }
  CountMatrix m(t);
  for (int i = 0; i < t; ++i) {
    if (!rows[i].is_array() || static_cast<int>(rows[i].size()) != t) {
      throw ShapeError(fmt::format("'{}' row {} must have {} entries", key, i, t));
    }
    for (int j = 0; j < t; ++j) {
      const json& cell = rows[i][j];
      if (!cell.is_number()) {
        throw ParseError(fmt::format("'{}'[{}][{}] is not a number", key, i, j));
      }
      const double value = cell.get<double>();
      if (value < 0) {
        throw NegativeCountError(
            fmt::format("'{}'[{}][{}] = {} is negative", key, i, j, value));
      }
      if (value != std::floor(value)) {
        throw ParseError(
            fmt::format("'{}'[{}][{}] = {} is not an integer", key, i, j, value));
      }
      m(i, j) = static_cast<std::int64_t>(value);
    }
  }
  return m;
}

}  // namespace

std::vector<GameRecord> ParseRecords(std::string_view bytes,
                                     RecordFormat format) {
  if (!IsValidUtf8(bytes)) throw ParseError("input is not valid UTF-8");
  return format == RecordFormat::kCsv ? ParseCsvRecords(bytes)
                                      : ParseJsonRecords(bytes);
}

std::string SerializeRecords(std::span<const GameRecord> records,
                             RecordFormat format) {
  if (format == RecordFormat::kJson) {
    json doc = json::array();
    for (const auto& r : records) {
      doc.push_back({{"home", r.home},
                     {"away", r.away},
                     {"outcome", OutcomeToken(r.outcome)},
                     {"repeat", r.repeat}});
    }
    return doc.dump();
  }
  auto quote = [](const std::string& s) {
    if (s.find_first_of(",\"") == std::string::npos && s == Trim(s)) return s;
    std::string out = "\"";
    for (char c : s) {
      if (c == '"') out += '"';
      out += c;
    }
    return out + "\"";
  };
  std::string out = "home,away,outcome,repeat\n";
  for (const auto& r : records) {
    out += fmt::format("{},{},{},{}\n", quote(r.home), quote(r.away),
                       OutcomeToken(r.outcome), r.repeat);
  }
  return out;
}

Dataset Aggregate(std::span<const GameRecord> records) {
  if (records.empty()) throw EmptyInputError("no game records");
  std::vector<std::string> teams;
  std::unordered_map<std::string, int> index;
  auto intern = [&](const std::string& team) {
    auto [it, inserted] = index.emplace(team, static_cast<int>(teams.size()));
    if (inserted) teams.push_back(team);
    return it->second;
  };
  struct Indexed {
    int home, away;
    Outcome outcome;
    std::int64_t repeat;
  };
  std::vector<Indexed> indexed;
  indexed.reserve(records.size());
  for (size_t k = 0; k < records.size(); ++k) {
    const auto& r = records[k];
    if (r.home == r.away) {
      throw SelfPlayError(
          fmt::format("record {}: team '{}' cannot play itself", k, r.home),
          static_cast<int>(k));
    }
    if (r.repeat < 1) {
      throw ParseError(fmt::format("record {}: repeat must be >= 1", k),
                       static_cast<int>(k));
    }
    const int home = intern(r.home);
    const int away = intern(r.away);
    indexed.push_back({home, away, r.outcome, r.repeat});
  }
  const int t = static_cast<int>(teams.size());
  CountMatrices counts(t);
  for (const auto& g : indexed) {
    switch (g.outcome) {
      case Outcome::kHomeWin:
        counts.a_home(g.home, g.away) += g.repeat;
        break;
      case Outcome::kAwayWin:
        // The visitor beat the host at the host's venue: a_{v h . h}.
        counts.a_away(g.away, g.home) += g.repeat;
        break;
      case Outcome::kTie:
        counts.t_home(g.home, g.away) += g.repeat;
        break;
    }
  }
  return Dataset(std::move(teams), std::move(counts));
}

Dataset ParseMatrix(std::string_view bytes) {
  if (!IsValidUtf8(bytes)) throw ParseError("input is not valid UTF-8");
  const json doc = ParseJson(bytes);
  if (!doc.is_object()) throw ParseError("matrix JSON must be an object");
  if (!doc.contains("teams") || !doc["teams"].is_array()) {
    throw ParseError("matrix JSON lacks a 'teams' array");
  }
  std::vector<std::string> teams;
  for (const auto& team : doc["teams"]) {
    if (!team.is_string()) throw ParseError("team ids must be strings");
    teams.push_back(team.get<std::string>());
  }
  const int t = static_cast<int>(teams.size());
  if (t < 2) throw ShapeError(fmt::format("need at least 2 teams, got {}", t));

  const bool venue_free = doc.contains("a");
  const bool venue_split = doc.contains("a_home") || doc.contains("a_away") ||
                           doc.contains("t_home");
  if (venue_free == venue_split) {
    throw ParseError(
        "matrix JSON needs either 'a' or all of 'a_home', 'a_away', 't_home'");
  }
  CountMatrices counts(t);
  if (venue_free) {
    counts.a_home = ReadCountMatrix(doc, "a", t);
    if (doc.contains("t")) {
      const CountMatrix ties = ReadCountMatrix(doc, "t", t);
      for (int i = 0; i < t; ++i) {
        for (int j = 0; j < t; ++j) {
          if (ties(i, j) != ties(j, i)) {
            throw ShapeError("tie matrix 't' must be symmetric");
          }
          if (i < j) counts.t_home(i, j) = ties(i, j);
        }
      }
    }
    return Dataset(std::move(teams), std::move(counts), /*venueless=*/true);
  }
  for (const char* key : {"a_home", "a_away", "t_home"}) {
    if (!doc.contains(key)) {
      throw ParseError(fmt::format("venue-split matrix JSON lacks '{}'", key));
    }
  }
  counts.a_home = ReadCountMatrix(doc, "a_home", t);
  counts.a_away = ReadCountMatrix(doc, "a_away", t);
  counts.t_home = ReadCountMatrix(doc, "t_home", t);
  return Dataset(std::move(teams), std::move(counts), /*venueless=*/false);
}

Dataset ParseDataset(std::string_view bytes, DataFormat format) {
  switch (format) {
    case DataFormat::kCsv: {
      const auto records = ParseRecords(bytes, RecordFormat::kCsv);
      return Aggregate(records);
    }
    case DataFormat::kRecordsJson: {
      const auto records = ParseRecords(bytes, RecordFormat::kJson);
      return Aggregate(records);
    }
    case DataFormat::kMatrixJson:
      return ParseMatrix(bytes);
  }
  throw ConfigError("unknown data format");
}

std::string ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(fmt::format("cannot open '{}'", path));
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

DataFormat DetectFormat(std::string_view path, std::string_view bytes) {
  if (path.size() >= 4 && Lower(std::string(path.substr(path.size() - 4))) == ".csv") {
    return DataFormat::kCsv;
  }
  const auto first = bytes.find_first_not_of(" \t\r\n");
  if (first != std::string_view::npos && bytes[first] == '[') {
    return DataFormat::kRecordsJson;
  }
  if (first != std::string_view::npos && bytes[first] == '{') {
    return DataFormat::kMatrixJson;
  }
  return DataFormat::kCsv;
}

Dataset LoadDataset(const std::string& path, std::optional<DataFormat> format) {
  const std::string bytes = ReadFile(path);
  return ParseDataset(bytes, format ? *format : DetectFormat(path, bytes));
}

RealMatrix ParseRealMatrix(std::string_view bytes) {
  const json doc = ParseJson(bytes);
  const json& rows = doc.is_object() && doc.contains("a0") ? doc["a0"] : doc;
  if (!rows.is_array()) throw ShapeError("matrix must be an array of rows");
  const int t = static_cast<int>(rows.size());
  RealMatrix m(t);
  for (int i = 0; i < t; ++i) {
    if (!rows[i].is_array() || static_cast<int>(rows[i].size()) != t) {
      throw ShapeError(fmt::format("matrix row {} must have {} entries", i, t));
    }
    for (int j = 0; j < t; ++j) {
      if (!rows[i][j].is_number()) {
        throw ParseError(fmt::format("matrix[{}][{}] is not a number", i, j));
      }
      m(i, j) = rows[i][j].get<double>();
    }
  }
  return m;
}

}  // namespace btrank
