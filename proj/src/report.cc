#include "btrank/report.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "btrank/errors.h"
#include "fmt/format.h"

namespace btrank {
namespace {

// The first `left` columns are left-aligned, the rest right-aligned.
class TextTable {
 public:
  explicit TextTable(size_t left = 1) : left_(left) {}

  void AddRow(std::vector<std::string> row) { rows_.push_back(std::move(row)); }

  std::string Render() const {
    std::vector<size_t> width;
    for (const auto& row : rows_) {
      if (width.size() < row.size()) width.resize(row.size(), 0);
      for (size_t c = 0; c < row.size(); ++c) {
        width[c] = std::max(width[c], row[c].size());
      }
    }
    std::string out;
    for (const auto& row : rows_) {
      std::string line;
      for (size_t c = 0; c < row.size(); ++c) {
        if (c > 0) line += "  ";
        line += c < left_ ? fmt::format("{:<{}}", row[c], width[c])
                       : fmt::format("{:>{}}", row[c], width[c]);
      }
      while (!line.empty() && line.back() == ' ') line.pop_back();
      out += line + "\n";
    }
    return out;
  }

 private:
  size_t left_;
  std::vector<std::vector<std::string>> rows_;
};

Json OptionalNumber(const std::optional<double>& x) {
  return x ? Json(*x) : Json(nullptr);
}

std::optional<double> ReadOptional(const Json& json, const char* key) {
  const Json& value = json.at(key);
  if (value.is_null()) return std::nullopt;
  return value.get<double>();
}

// nlohmann writes non-finite doubles as null.
double ReadDouble(const Json& value) {
  if (value.is_null()) return std::numeric_limits<double>::quiet_NaN();
  return value.get<double>();
}

std::string NormalizationLabel(const Normalization& n,
                               const std::vector<std::string>& teams) {
  if (n.kind == Normalization::Kind::kSimplex) return "simplex";
  const std::string team = n.reference < static_cast<int>(teams.size())
                               ? teams[n.reference]
                               : fmt::format("#{}", n.reference);
  return fmt::format("reference ({} = 1)", team);
}

Json Names(const std::vector<int>& ids, const std::vector<std::string>& teams) {
  Json out = Json::array();
  for (int id : ids) out.push_back(teams.at(id));
  return out;
}

std::string JoinNames(const std::vector<int>& ids,
                      const std::vector<std::string>& teams) {
  std::string out = "{";
  for (size_t k = 0; k < ids.size(); ++k) {
    if (k > 0) out += ", ";
    out += teams.at(ids[k]);
  }
  return out + "}";
}

std::string OrderString(const Ranking& ranking,
                        const std::vector<std::string>& teams) {
  std::string out;
  for (size_t g = 0; g < ranking.groups.size(); ++g) {
    if (g > 0) out += " > ";
    for (size_t k = 0; k < ranking.groups[g].size(); ++k) {
      if (k > 0) out += " = ";
      out += teams.at(ranking.groups[g][k]);
    }
  }
  return out;
}

}  // namespace

std::string DumpJson(const Json& json) { return json.dump(2) + "\n"; }

Json FitResultToJson(const FitResult& fit) {
  Json json;
  json["model"] = std::string(ModelName(fit.model));
  json["teams"] = fit.teams;
  json["merits"] = fit.merits;
  json["beta"] = fit.beta;
  Json norm;
  if (fit.normalization.kind == Normalization::Kind::kSimplex) {
    norm["kind"] = "simplex";
  } else {
    norm["kind"] = "reference";
    norm["reference"] = fit.normalization.reference;
  }
  json["normalization"] = norm;
  json["theta"] = OptionalNumber(fit.theta);
  json["gamma"] = OptionalNumber(fit.gamma);
  json["epsilon"] = OptionalNumber(fit.epsilon);
  json["log_likelihood"] = fit.log_likelihood;
  json["iterations"] = fit.iterations;
  json["converged"] = fit.converged;
  json["gradient_sup_norm"] = fit.gradient_sup_norm;
  json["restart_spread"] = OptionalNumber(fit.restart_spread);
  json["trace"] = fit.trace;
  return json;
}

FitResult FitResultFromJson(const Json& json) {
  FitResult fit;
  try {
    const auto model = ParseModelName(json.at("model").get<std::string>());
    if (!model) throw ParseError("unknown model in fit JSON");
    fit.model = *model;
    fit.teams = json.at("teams").get<std::vector<std::string>>();
    for (const auto& x : json.at("merits")) fit.merits.push_back(ReadDouble(x));
    for (const auto& x : json.at("beta")) fit.beta.push_back(ReadDouble(x));
    const Json& norm = json.at("normalization");
    const std::string kind = norm.at("kind").get<std::string>();
    if (kind == "simplex") {
      fit.normalization = Normalization::Simplex();
    } else if (kind == "reference") {
      fit.normalization = Normalization::Reference(norm.at("reference").get<int>());
    } else {
      throw ParseError(fmt::format("unknown normalization '{}'", kind));
    }
    fit.theta = ReadOptional(json, "theta");
    fit.gamma = ReadOptional(json, "gamma");
    fit.epsilon = ReadOptional(json, "epsilon");
    fit.log_likelihood = ReadDouble(json.at("log_likelihood"));
    fit.iterations = json.at("iterations").get<int>();
    fit.converged = json.at("converged").get<bool>();
    fit.gradient_sup_norm = ReadDouble(json.at("gradient_sup_norm"));
    fit.restart_spread = ReadOptional(json, "restart_spread");
    for (const auto& x : json.at("trace")) fit.trace.push_back(ReadDouble(x));
  } catch (const Json::exception& e) {
    throw ParseError(fmt::format("malformed fit JSON: {}", e.what()));
  }
  if (fit.teams.size() != fit.merits.size() || fit.beta.size() != fit.merits.size()) {
    throw ParseError("fit JSON arrays differ in length");
  }
  return fit;
}

Json RankingToJson(const Ranking& ranking, const std::vector<std::string>& teams) {
  Json json;
  json["order"] = Names(ranking.order, teams);
  Json groups = Json::array();
  for (const auto& g : ranking.groups) groups.push_back(Names(g, teams));
  json["groups"] = groups;
  Json rank;
  const std::vector<int> rank_of = ranking.RankOf();
  for (size_t i = 0; i < rank_of.size(); ++i) rank[teams.at(i)] = rank_of[i];
  json["rank"] = rank;
  return json;
}

Json SweepToJson(const SweepResult& sweep, const std::vector<std::string>& teams) {
  Json json;
  Json entries = Json::array();
  for (const auto& entry : sweep.entries) {
    Json e;
    e["epsilon"] = entry.epsilon;
    e["fit"] = FitResultToJson(entry.fit);
    e["ranking"] = RankingToJson(entry.ranking, teams);
    entries.push_back(e);
  }
  json["entries"] = entries;
  json["stable"] = sweep.stable;
  json["kendall"] = sweep.kendall;
  return json;
}

Json MonotoneRatioToJson(const MonotoneRatioReport& report,
                         const std::vector<std::string>& teams) {
  Json json;
  json["epsilons"] = report.epsilons;
  Json pairs = Json::array();
  for (const auto& trend : report.pairs) {
    Json p;
    p["better"] = teams.at(trend.better);
    p["worse"] = teams.at(trend.worse);
    p["ratios"] = trend.ratios;
    p["non_increasing"] = trend.non_increasing;
    pairs.push_back(p);
  }
  json["pairs"] = pairs;
  json["all_monotone"] = report.all_monotone;
  return json;
}

Json SeedsToJson(const std::vector<ConferenceSeeds>& seeds) {
  Json json = Json::array();
  for (const auto& conference : seeds) {
    Json c;
    c["conference"] = conference.conference;
    Json list = Json::array();
    for (const auto& s : conference.seeds) {
      Json e;
      e["seed"] = s.seed;
      e["team"] = s.team;
      e["division"] = s.division;
      e["key"] = s.key;
      e["division_winner"] = s.division_winner;
      list.push_back(e);
    }
    c["seeds"] = list;
    json.push_back(c);
  }
  return json;
}

Json ConsistencyToJson(const ConsistencyReport& report) {
  Json json;
  Json config;
  config["t_grid"] = report.config.t_grid;
  config["merit_low"] = report.config.merit_low;
  config["merit_high"] = report.config.merit_high;
  config["games_per_pair"] = report.config.games_per_pair;
  config["replicas"] = report.config.replicas;
  config["seed"] = report.config.seed;
  json["config"] = config;
  Json cells = Json::array();
  for (const auto& cell : report.cells) {
    Json c;
    c["t"] = cell.t;
    c["epsilon"] = cell.epsilon;
    c["median"] = cell.median;
    c["p90"] = cell.p90;
    c["errors"] = cell.errors;
    cells.push_back(c);
  }
  json["results"] = cells;
  return json;
}

Json WitnessToJson(const PartitionWitness& witness,
                   const std::vector<std::string>& teams) {
  Json json;
  json["condition"] = std::string(ConditionName(witness.violated));
  json["q1"] = Names(witness.q1, teams);
  json["q2"] = Names(witness.q2, teams);
  json["detail"] = witness.detail;
  return json;
}

Json ChecksToJson(const std::vector<ConditionResult>& results,
                  const std::vector<std::string>& teams) {
  Json json;
  for (Condition c : {Condition::kA, Condition::kB, Condition::kC}) {
    Json entry;
    const auto it = std::find_if(results.begin(), results.end(),
                                 [c](const auto& r) { return r.condition == c; });
    if (it == results.end()) {
      entry["status"] = "not applicable";
    } else if (it->passed()) {
      entry["status"] = "pass";
    } else {
      entry["status"] = "fail";
      entry["witness"] = WitnessToJson(*it->witness, teams);
    }
    json[std::string(ConditionName(c))] = entry;
  }
  return json;
}

std::string FormatNumber(double x) {
  if (!std::isfinite(x)) return fmt::format("{}", x);
  if (x != 0.0 && std::abs(x) < 1e-3) return fmt::format("{:.1e}", x);
  return fmt::format("{:.3f}", x);
}

std::string FitTable(const FitResult& fit) {
  TextTable head(2);
  head.AddRow({"model", std::string(ModelName(fit.model))});
  if (fit.epsilon) head.AddRow({"epsilon", FormatNumber(*fit.epsilon)});
  head.AddRow({"normalization", NormalizationLabel(fit.normalization, fit.teams)});
  if (fit.theta) head.AddRow({"theta", FormatNumber(*fit.theta)});
  if (fit.gamma) head.AddRow({"gamma", FormatNumber(*fit.gamma)});
  head.AddRow({"log-likelihood", FormatNumber(fit.log_likelihood)});
  head.AddRow({"iterations", std::to_string(fit.iterations)});
  head.AddRow({"converged", fit.converged ? "yes" : "no"});
  head.AddRow({"gradient", fmt::format("{:.1e}", fit.gradient_sup_norm)});
  TextTable body;
  body.AddRow({"team", "merit"});
  for (size_t i = 0; i < fit.teams.size(); ++i) {
    body.AddRow({fit.teams[i], FormatNumber(fit.merits[i])});
  }
  return head.Render() + "\n" + body.Render();
}

std::string SweepTable(const SweepResult& sweep,
                       const std::vector<std::string>& teams) {
  TextTable table;
  std::vector<std::string> header{"team"};
  for (const auto& entry : sweep.entries) {
    header.push_back("eps=" + FormatNumber(entry.epsilon));
  }
  table.AddRow(header);
  for (size_t i = 0; i < teams.size(); ++i) {
    std::vector<std::string> row{teams[i]};
    for (const auto& entry : sweep.entries) {
      row.push_back(FormatNumber(entry.fit.merits[i]));
    }
    table.AddRow(row);
  }
  std::string out = table.Render();
  out += "\n";
  for (const auto& entry : sweep.entries) {
    out += fmt::format("eps={}: {}\n", FormatNumber(entry.epsilon),
                       OrderString(entry.ranking, teams));
  }
  out += fmt::format("stable: {}\n", sweep.stable ? "yes" : "no");
  if (!sweep.stable) {
    TextTable kendall;
    std::vector<std::string> head{"kendall"};
    for (const auto& entry : sweep.entries) head.push_back(FormatNumber(entry.epsilon));
    kendall.AddRow(head);
    for (size_t a = 0; a < sweep.entries.size(); ++a) {
      std::vector<std::string> row{FormatNumber(sweep.entries[a].epsilon)};
      for (double d : sweep.kendall[a]) row.push_back(fmt::format("{:g}", d));
      kendall.AddRow(row);
    }
    out += kendall.Render();
  }
  return out;
}

std::string MonotoneRatioTable(const MonotoneRatioReport& report,
                               const std::vector<std::string>& teams) {
  TextTable table;
  std::vector<std::string> header{"ratio"};
  for (double e : report.epsilons) header.push_back("eps=" + FormatNumber(e));
  header.push_back("non-increasing");
  table.AddRow(header);
  for (const auto& trend : report.pairs) {
    std::vector<std::string> row{teams.at(trend.better) + "/" + teams.at(trend.worse)};
    for (double r : trend.ratios) row.push_back(FormatNumber(r));
    row.push_back(trend.non_increasing ? "yes" : "no");
    table.AddRow(row);
  }
  return table.Render();
}

std::string SeedsTable(const std::vector<ConferenceSeeds>& seeds) {
  std::string out;
  for (const auto& conference : seeds) {
    TextTable table(3);
    table.AddRow({conference.conference, "team", "division", "key", ""});
    for (const auto& s : conference.seeds) {
      table.AddRow({std::to_string(s.seed), s.team, s.division,
                    FormatNumber(s.key), s.division_winner ? "division" : "wild card"});
    }
    if (!out.empty()) out += "\n";
    out += table.Render();
  }
  return out;
}

std::string ConsistencyTable(const ConsistencyReport& report) {
  TextTable table;
  table.AddRow({"t", "epsilon", "replicas", "median", "p90"});
  for (const auto& cell : report.cells) {
    table.AddRow({std::to_string(cell.t), FormatNumber(cell.epsilon),
                  std::to_string(cell.errors.size()), FormatNumber(cell.median),
                  FormatNumber(cell.p90)});
  }
  return table.Render();
}

std::string ChecksTable(const std::vector<ConditionResult>& results,
                        const std::vector<std::string>& teams) {
  TextTable table(2);
  for (Condition c : {Condition::kA, Condition::kB, Condition::kC}) {
    const auto it = std::find_if(results.begin(), results.end(),
                                 [c](const auto& r) { return r.condition == c; });
    const std::string name = fmt::format("condition {}", ConditionName(c));
    if (it == results.end()) {
      table.AddRow({name, "not applicable"});
    } else if (it->passed()) {
      table.AddRow({name, "pass"});
    } else {
      const PartitionWitness& w = *it->witness;
      table.AddRow({name, fmt::format("fail (witness {} | {})", JoinNames(w.q1, teams),
                                      JoinNames(w.q2, teams))});
    }
  }
  return table.Render();
}

}  // namespace btrank
