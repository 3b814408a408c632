#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "cfgfolio/decision.hpp"

namespace cfgfolio {
namespace {

[[noreturn]] void Schema(const std::string& what) {
  throw Error(ErrorKind::kSchemaViolation, what);
}

void RequireKeys(const Json& obj, std::initializer_list<const char*> required,
                 std::initializer_list<const char*> optional,
                 const std::string& where) {
  if (!obj.is_object()) Schema(where + ": expected an object");
  for (const char* key : required) {
    if (!obj.contains(key)) Schema(where + ": missing '" + key + "'");
  }
  for (const auto& [key, _] : obj.items()) {
    bool known = false;
    for (const char* k : required) known = known || key == k;
    for (const char* k : optional) known = known || key == k;
    if (!known) Schema(where + ": unknown field '" + key + "'");
  }
}

MetafeatureVector ReadVector(const Json& j, const std::string& where) {
  if (!j.is_array() || j.size() != kNumMetafeatures) {
    Schema(where + ": expected an array of 4 numbers");
  }
  MetafeatureVector v{};
  for (std::size_t i = 0; i < kNumMetafeatures; ++i) {
    if (!j[i].is_number()) Schema(where + ": non-numeric entry");
    v[i] = j[i].get<double>();
  }
  return v;
}

std::uint64_t ReadCount(const Json& j, const std::string& where) {
  if (!j.is_number_unsigned()) {
    if (j.is_number_integer()) {
      Schema(where + ": must be non-negative");
    }
    Schema(where + ": expected an integer");
  }
  return j.get<std::uint64_t>();
}

}  // namespace

void ValidateModel(const DecisionModel& model) {
  if (model.format_version != kModelFormatVersion) {
    throw Error(ErrorKind::kVersionMismatch,
                "format_version " + std::to_string(model.format_version));
  }
  if (!std::isfinite(model.epsilon) || model.epsilon < 0.0) {
    Schema("epsilon must be finite and >= 0");
  }
  for (std::size_t d = 0; d < kNumMetafeatures; ++d) {
    if (!std::isfinite(model.standardizer.means[d])) Schema("non-finite mean");
    if (!std::isfinite(model.standardizer.stds[d]) ||
        !(model.standardizer.stds[d] > 0.0)) {
      Schema("standardizer stds must be positive");
    }
  }
  std::set<std::string> config_ids;
  for (const auto& c : model.portfolio) {
    if (!config_ids.insert(c.config_id).second) {
      Schema("duplicate portfolio config " + c.config_id);
    }
  }
  std::vector<bool> used(model.portfolio.size(), false);
  std::set<std::string> task_ids;
  for (const auto& a : model.anchors) {
    if (a.member_index >= model.portfolio.size()) {
      Schema("anchor " + a.task.task_id + " member_index " +
             std::to_string(a.member_index) + " out of range");
    }
    if (!task_ids.insert(a.task.task_id).second) {
      Schema("duplicate anchor " + a.task.task_id);
    }
    try {
      ValidateTask(a.task);
    } catch (const Error& e) {
      Schema(e.what());
    }
    used[a.member_index] = true;
  }
  for (std::size_t m = 0; m < used.size(); ++m) {
    if (!used[m]) Schema("portfolio member " + std::to_string(m) + " has no anchor");
  }
}

Json ModelToJson(const DecisionModel& model) {
  Json doc;
  doc["format_version"] = model.format_version;
  doc["epsilon"] = model.epsilon;
  doc["metric"] = std::string(MetricName(model.metric));
  doc["standardizer"]["means"] = model.standardizer.means;
  doc["standardizer"]["stds"] = model.standardizer.stds;
  doc["portfolio"] = Json::array();
  for (const auto& c : model.portfolio) doc["portfolio"].push_back(ConfigToJson(c));
  doc["anchors"] = Json::array();
  for (const auto& a : model.anchors) {
    Json anchor;
    anchor["task_id"] = a.task.task_id;
    anchor["metafeatures"]["n_instances"] = a.task.n_instances;
    anchor["metafeatures"]["n_features"] = a.task.n_features;
    anchor["metafeatures"]["n_classes"] = a.task.n_classes;
    anchor["metafeatures"]["pct_numeric"] = a.task.pct_numeric;
    anchor["member_index"] = a.member_index;
    doc["anchors"].push_back(std::move(anchor));
  }
  return doc;
}

DecisionModel ModelFromJson(const Json& doc) {
  if (!doc.is_object()) Schema("model document must be an object");
  if (!doc.contains("format_version")) Schema("missing 'format_version'");
  if (!doc["format_version"].is_number_integer()) {
    Schema("format_version must be an integer");
  }
  const auto version = doc["format_version"].get<std::int64_t>();
  if (version != kModelFormatVersion) {
    throw Error(ErrorKind::kVersionMismatch,
                "unsupported format_version " + std::to_string(version));
  }
  RequireKeys(doc,
              {"format_version", "epsilon", "metric", "standardizer", "portfolio",
               "anchors"},
              {}, "model");

  DecisionModel model;
  model.format_version = static_cast<int>(version);
  if (!doc["epsilon"].is_number()) Schema("epsilon must be a number");
  model.epsilon = doc["epsilon"].get<double>();
  if (!doc["metric"].is_string()) Schema("metric must be a string");
  try {
    model.metric = ParseMetric(doc["metric"].get<std::string>());
  } catch (const Error& e) {
    Schema(e.what());
  }

  const Json& s = doc["standardizer"];
  RequireKeys(s, {"means", "stds"}, {}, "standardizer");
  model.standardizer.means = ReadVector(s["means"], "standardizer.means");
  model.standardizer.stds = ReadVector(s["stds"], "standardizer.stds");

  if (!doc["portfolio"].is_array()) Schema("portfolio must be an array");
  for (const auto& entry : doc["portfolio"]) {
    model.portfolio.push_back(ConfigFromJson(entry));
  }

  if (!doc["anchors"].is_array()) Schema("anchors must be an array");
  for (const auto& entry : doc["anchors"]) {
    RequireKeys(entry, {"task_id", "metafeatures", "member_index"}, {}, "anchor");
    if (!entry["task_id"].is_string()) Schema("anchor task_id must be a string");
    Anchor a;
    a.task.task_id = entry["task_id"].get<std::string>();
    const std::string where = "anchor " + a.task.task_id;
    const Json& mf = entry["metafeatures"];
    RequireKeys(mf, {"n_instances", "n_features", "n_classes", "pct_numeric"}, {},
                where + " metafeatures");
    a.task.n_instances = ReadCount(mf["n_instances"], where + " n_instances");
    a.task.n_features = ReadCount(mf["n_features"], where + " n_features");
    a.task.n_classes = ReadCount(mf["n_classes"], where + " n_classes");
    if (!mf["pct_numeric"].is_number()) Schema(where + ": pct_numeric must be a number");
    a.task.pct_numeric = mf["pct_numeric"].get<double>();
    a.member_index = static_cast<std::size_t>(
        ReadCount(entry["member_index"], where + " member_index"));
    model.anchors.push_back(std::move(a));
  }
  ValidateModel(model);
  for (auto& a : model.anchors) a.standardized = model.standardizer.Apply(a.task);
  return model;
}

std::string SerializeModel(const DecisionModel& model) {
  return ModelToJson(model).dump(2) + "\n";
}

void WriteModel(const DecisionModel& model, const std::filesystem::path& path) {
  ValidateModel(model);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::kIo, "cannot write " + path.string());
  out << SerializeModel(model);
  if (!out) throw Error(ErrorKind::kIo, "write failed: " + path.string());
}

DecisionModel ReadModel(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::kMissingFile, "cannot open " + path.string());
  Json doc;
  try {
    doc = Json::parse(in);
  } catch (const Json::parse_error& e) {
    Schema(path.string() + ": invalid JSON: " + e.what());
  }
  return ModelFromJson(doc);
}

std::string RecommendationBody(const Recommendation& rec) {
  Json body;
  body["config_id"] = rec.config.config_id;
  body["learner"] = rec.config.learner;
  body["payload"] = rec.config.payload;
  body["neighbor_task_id"] = rec.neighbor_task_id;
  body["distance"] = rec.distance;
  return body.dump() + "\n";
}

}  // namespace cfgfolio
