#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <tuple>
#include <unordered_set>

#include "cfgfolio/core.hpp"
#include "cfgfolio/csv.hpp"

namespace cfgfolio {
namespace {

const std::vector<std::string> kEvaluationHeader = {"task_id", "config_id",
                                                    "fold", "loss"};
const std::vector<std::string> kMetafeatureHeader = {
    "task_id", "n_instances", "n_features", "n_classes", "pct_numeric"};

bool IsFailedLoss(std::string_view text) {
  if (text.empty()) return true;
  std::string lower(text);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return lower == "nan" || lower == "-nan" || lower == "+nan";
}

std::ofstream OpenForWrite(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::kIo, "cannot write " + path.string());
  return out;
}

std::uint64_t ParseCountField(std::string_view text, std::size_t line,
                              const char* name) {
  if (!text.empty() && text.front() == '-') {
    // Reject negatives as a range problem, not a syntax problem, when the
    // field is otherwise a valid integer.
    csv::ParseInteger(text, line);
    throw Error(ErrorKind::kRangeViolation, "line " + std::to_string(line) +
                                                ": " + name + " is negative");
  }
  return csv::ParseCount(text, line);
}

}  // namespace

std::string FormatDouble(double value) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, ptr);
}

std::vector<EvaluationRecord> ReadEvaluations(const std::filesystem::path& path) {
  std::vector<EvaluationRecord> records;
  std::set<std::tuple<std::string, std::string, std::uint64_t>> seen;
  for (auto& row : csv::ReadFile(path, kEvaluationHeader)) {
    EvaluationRecord rec;
    rec.task_id = std::move(row.fields[0]);
    rec.config_id = std::move(row.fields[1]);
    if (rec.task_id.empty() || rec.config_id.empty()) {
      throw Error(ErrorKind::kMalformedRow,
                  "line " + std::to_string(row.line) + ": empty id");
    }
    rec.fold = csv::ParseCount(row.fields[2], row.line);
    const std::string& loss = row.fields[3];
    if (IsFailedLoss(loss)) {
      rec.failed = true;
      rec.loss = std::nan("");
    } else {
      rec.loss = csv::ParseDouble(loss, row.line);
      if (!std::isfinite(rec.loss)) {
        rec.failed = true;
        rec.loss = std::nan("");
      }
    }
    if (!seen.emplace(rec.task_id, rec.config_id, rec.fold).second) {
      throw Error(ErrorKind::kDuplicateKey,
                  "line " + std::to_string(row.line) + ": (" + rec.task_id +
                      ", " + rec.config_id + ", " + std::to_string(rec.fold) +
                      ") repeated");
    }
    records.push_back(std::move(rec));
  }
  return records;
}

void WriteEvaluations(const std::filesystem::path& path,
                      std::span<const EvaluationRecord> records) {
  auto out = OpenForWrite(path);
  csv::WriteRow(out, kEvaluationHeader);
  for (const auto& r : records) {
    csv::WriteRow(out, {r.task_id, r.config_id, std::to_string(r.fold),
                        r.failed ? std::string() : FormatDouble(r.loss)});
  }
}

void ValidateTask(const TaskRecord& task) {
  if (!std::isfinite(task.pct_numeric) || task.pct_numeric < 0.0 ||
      task.pct_numeric > 1.0) {
    throw Error(ErrorKind::kRangeViolation,
                "task " + task.task_id + ": pct_numeric " +
                    FormatDouble(task.pct_numeric) + " outside [0, 1]");
  }
}

TaskTable ReadMetafeatures(const std::filesystem::path& path) {
  TaskTable tasks;
  std::unordered_set<std::string> seen;
  for (auto& row : csv::ReadFile(path, kMetafeatureHeader)) {
    TaskRecord t;
    t.task_id = std::move(row.fields[0]);
    if (t.task_id.empty()) {
      throw Error(ErrorKind::kMalformedRow,
                  "line " + std::to_string(row.line) + ": empty task_id");
    }
    t.n_instances = ParseCountField(row.fields[1], row.line, "n_instances");
    t.n_features = ParseCountField(row.fields[2], row.line, "n_features");
    t.n_classes = ParseCountField(row.fields[3], row.line, "n_classes");
    t.pct_numeric = csv::ParseDouble(row.fields[4], row.line);
    ValidateTask(t);
    if (!seen.insert(t.task_id).second) {
      throw Error(ErrorKind::kDuplicateTaskId,
                  "line " + std::to_string(row.line) + ": " + t.task_id);
    }
    tasks.push_back(std::move(t));
  }
  return tasks;
}

void WriteMetafeatures(const std::filesystem::path& path, const TaskTable& tasks) {
  auto out = OpenForWrite(path);
  csv::WriteRow(out, kMetafeatureHeader);
  for (const auto& t : tasks) {
    csv::WriteRow(out, {t.task_id, std::to_string(t.n_instances),
                        std::to_string(t.n_features), std::to_string(t.n_classes),
                        FormatDouble(t.pct_numeric)});
  }
}

Json ConfigToJson(const ConfigRecord& config) {
  Json j;
  j["config_id"] = config.config_id;
  j["learner"] = config.learner;
  j["payload"] = config.payload;
  if (config.source_task_id) j["source_task_id"] = *config.source_task_id;
  if (config.is_library_default) j["is_library_default"] = true;
  return j;
}

ConfigRecord ConfigFromJson(const Json& j) {
  auto fail = [](const std::string& what) -> ConfigRecord {
    throw Error(ErrorKind::kSchemaViolation, "config entry: " + what);
  };
  if (!j.is_object()) return fail("not an object");
  for (const auto& [key, _] : j.items()) {
    if (key != "config_id" && key != "learner" && key != "payload" &&
        key != "source_task_id" && key != "is_library_default") {
      return fail("unknown field '" + key + "'");
    }
  }
  ConfigRecord c;
  if (!j.contains("config_id") || !j["config_id"].is_string()) {
    return fail("config_id must be a string");
  }
  c.config_id = j["config_id"].get<std::string>();
  if (c.config_id.empty()) return fail("empty config_id");
  if (!j.contains("learner") || !j["learner"].is_string()) {
    return fail(c.config_id + ": learner must be a string");
  }
  c.learner = j["learner"].get<std::string>();
  if (!j.contains("payload") || !j["payload"].is_object()) {
    return fail(c.config_id + ": payload must be an object");
  }
  c.payload = j["payload"];
  if (j.contains("source_task_id") && !j["source_task_id"].is_null()) {
    if (!j["source_task_id"].is_string()) {
      return fail(c.config_id + ": source_task_id must be a string");
    }
    c.source_task_id = j["source_task_id"].get<std::string>();
  }
  if (j.contains("is_library_default")) {
    if (!j["is_library_default"].is_boolean()) {
      return fail(c.config_id + ": is_library_default must be a boolean");
    }
    c.is_library_default = j["is_library_default"].get<bool>();
  }
  return c;
}

ConfigTable ReadConfigs(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::kMissingFile, "cannot open " + path.string());
  Json doc;
  try {
    doc = Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw Error(ErrorKind::kSchemaViolation,
                path.string() + ": invalid JSON: " + e.what());
  }
  if (!doc.is_array()) {
    throw Error(ErrorKind::kSchemaViolation, path.string() + ": expected array");
  }
  ConfigTable configs;
  std::unordered_set<std::string> seen;
  for (const auto& entry : doc) {
    auto c = ConfigFromJson(entry);
    if (!seen.insert(c.config_id).second) {
      throw Error(ErrorKind::kDuplicateConfigId, c.config_id);
    }
    configs.push_back(std::move(c));
  }
  return configs;
}

void WriteConfigs(const std::filesystem::path& path, const ConfigTable& configs) {
  Json doc = Json::array();
  for (const auto& c : configs) doc.push_back(ConfigToJson(c));
  auto out = OpenForWrite(path);
  out << doc.dump(2) << '\n';
}

}  // namespace cfgfolio
