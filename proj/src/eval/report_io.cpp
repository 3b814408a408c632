#include <fstream>

#include "cfgfolio/csv.hpp"
#include "cfgfolio/eval.hpp"

namespace cfgfolio {
namespace {

std::ofstream OpenForWrite(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::kIo, "cannot write " + path.string());
  return out;
}

[[noreturn]] void Schema(const std::string& what) {
  throw Error(ErrorKind::kSchemaViolation, "report: " + what);
}

Json StatsToJson(const Stats& s) {
  Json j;
  j["n"] = s.n;
  j["mean"] = s.mean;
  j["std"] = s.std;
  j["min"] = s.min;
  j["p25"] = s.p25;
  j["p50"] = s.p50;
  j["p75"] = s.p75;
  j["p95"] = s.p95;
  j["p99"] = s.p99;
  j["max"] = s.max;
  return j;
}

double Number(const Json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_number()) {
    Schema(std::string("'") + key + "' must be a number");
  }
  return j[key].get<double>();
}

Stats StatsFromJson(const Json& j) {
  if (!j.is_object()) Schema("stats must be an object");
  Stats s;
  if (!j.contains("n") || !j["n"].is_number_unsigned()) Schema("stats.n");
  s.n = j["n"].get<std::size_t>();
  s.mean = Number(j, "mean");
  s.std = Number(j, "std");
  s.min = Number(j, "min");
  s.p25 = Number(j, "p25");
  s.p50 = Number(j, "p50");
  s.p75 = Number(j, "p75");
  s.p95 = Number(j, "p95");
  s.p99 = Number(j, "p99");
  s.max = Number(j, "max");
  return s;
}

}  // namespace

Json ReportToJson(const RegretReport& report) {
  Json doc;
  doc["strategy"] = report.strategy;
  doc["epsilon"] = report.epsilon;
  doc["stats"] = StatsToJson(report.stats);
  if (report.kshot) {
    doc["kshot"] = *report.kshot;
    if (report.kshot_stats) doc["kshot_stats"] = StatsToJson(*report.kshot_stats);
  }
  doc["per_task"] = Json::array();
  for (const auto& t : report.per_task) {
    Json e;
    e["task_id"] = t.task_id;
    e["train_ser_at_stop"] = t.train_ser_at_stop;
    e["train_estimate"] = t.train_estimate;
    e["test_regret"] = t.test_regret;
    e["config_id"] = t.config_id;
    e["portfolio_size"] = t.portfolio_size;
    if (t.kshot_regret) e["kshot_regret"] = *t.kshot_regret;
    doc["per_task"].push_back(std::move(e));
  }
  return doc;
}

RegretReport ReportFromJson(const Json& doc) {
  if (!doc.is_object()) Schema("expected an object");
  RegretReport r;
  if (!doc.contains("strategy") || !doc["strategy"].is_string()) Schema("strategy");
  r.strategy = doc["strategy"].get<std::string>();
  r.epsilon = Number(doc, "epsilon");
  if (!doc.contains("stats")) Schema("missing stats");
  r.stats = StatsFromJson(doc["stats"]);
  if (doc.contains("kshot")) {
    if (!doc["kshot"].is_number_unsigned()) Schema("kshot");
    r.kshot = doc["kshot"].get<std::size_t>();
  }
  if (doc.contains("kshot_stats")) r.kshot_stats = StatsFromJson(doc["kshot_stats"]);
  if (!doc.contains("per_task") || !doc["per_task"].is_array()) Schema("per_task");
  for (const auto& e : doc["per_task"]) {
    if (!e.is_object()) Schema("per_task entry");
    TaskOutcome t;
    if (!e.contains("task_id") || !e["task_id"].is_string()) Schema("task_id");
    t.task_id = e["task_id"].get<std::string>();
    t.train_ser_at_stop = Number(e, "train_ser_at_stop");
    t.train_estimate = Number(e, "train_estimate");
    t.test_regret = Number(e, "test_regret");
    if (!e.contains("config_id") || !e["config_id"].is_string()) Schema("config_id");
    t.config_id = e["config_id"].get<std::string>();
    if (!e.contains("portfolio_size") || !e["portfolio_size"].is_number_unsigned()) {
      Schema("portfolio_size");
    }
    t.portfolio_size = e["portfolio_size"].get<std::size_t>();
    if (e.contains("kshot_regret")) t.kshot_regret = Number(e, "kshot_regret");
    r.per_task.push_back(std::move(t));
  }
  return r;
}

void WriteReport(const RegretReport& report, const std::filesystem::path& path) {
  auto out = OpenForWrite(path);
  out << ReportToJson(report).dump(2) << '\n';
}

RegretReport ReadReport(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::kMissingFile, "cannot open " + path.string());
  try {
    return ReportFromJson(Json::parse(in));
  } catch (const Json::parse_error& e) {
    Schema(std::string("invalid JSON: ") + e.what());
  }
}

void WriteCurve(const std::filesystem::path& path, std::span<const CurvePoint> curve) {
  auto out = OpenForWrite(path);
  csv::WriteRow(out, {"n_tasks", "portfolio_size"});
  for (const auto& p : curve) {
    csv::WriteRow(out, {std::to_string(p.n_tasks), std::to_string(p.portfolio_size)});
  }
}

std::vector<CurvePoint> ReadCurve(const std::filesystem::path& path) {
  std::vector<CurvePoint> curve;
  for (const auto& row : csv::ReadFile(path, {"n_tasks", "portfolio_size"})) {
    curve.push_back({csv::ParseCount(row.fields[0], row.line),
                     csv::ParseCount(row.fields[1], row.line)});
  }
  return curve;
}

void WriteDecisionMap(const std::filesystem::path& path, std::span<const MapRow> rows) {
  auto out = OpenForWrite(path);
  csv::WriteRow(out, {"task_id", "pc1", "pc2", "member_index"});
  for (const auto& r : rows) {
    csv::WriteRow(out, {r.task_id, FormatDouble(r.pc1), FormatDouble(r.pc2),
                        std::to_string(r.member_index)});
  }
}

std::vector<MapRow> ReadDecisionMap(const std::filesystem::path& path) {
  std::vector<MapRow> rows;
  for (auto& row : csv::ReadFile(path, {"task_id", "pc1", "pc2", "member_index"})) {
    rows.push_back({std::move(row.fields[0]), csv::ParseDouble(row.fields[1], row.line),
                    csv::ParseDouble(row.fields[2], row.line),
                    csv::ParseCount(row.fields[3], row.line)});
  }
  return rows;
}

void WriteCorrelation(const std::filesystem::path& path,
                      std::span<const CorrelationRow> rows) {
  auto out = OpenForWrite(path);
  csv::WriteRow(out, {"task_id", "rho"});
  for (const auto& r : rows) csv::WriteRow(out, {r.task_id, FormatDouble(r.rho)});
}

std::vector<CorrelationRow> ReadCorrelation(const std::filesystem::path& path) {
  std::vector<CorrelationRow> rows;
  for (auto& row : csv::ReadFile(path, {"task_id", "rho"})) {
    rows.push_back({std::move(row.fields[0]), csv::ParseDouble(row.fields[1], row.line)});
  }
  return rows;
}

}  // namespace cfgfolio
