#pragma once

// Domain records, file ingestion, and the performance / baseline / regret
// matrices. Matrices are oriented rows = configurations, columns = tasks.

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "cfgfolio/error.hpp"
#include "json.hpp"

namespace cfgfolio {

using Json = nlohmann::ordered_json;
using Matrix = Eigen::MatrixXd;
using Mask = Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic>;

// The four raw metafeatures in a fixed order: instances, features, classes,
// fraction of numeric features.
inline constexpr std::size_t kNumMetafeatures = 4;
using MetafeatureVector = std::array<double, kNumMetafeatures>;

struct TaskRecord {
  std::string task_id;
  std::uint64_t n_instances = 0;
  std::uint64_t n_features = 0;
  std::uint64_t n_classes = 0;  // 0 for regression
  double pct_numeric = 0.0;

  MetafeatureVector metafeatures() const {
    return {static_cast<double>(n_instances), static_cast<double>(n_features),
            static_cast<double>(n_classes), pct_numeric};
  }

  bool operator==(const TaskRecord&) const = default;
};

struct ConfigRecord {
  std::string config_id;
  std::string learner;
  Json payload = Json::object();  // carried verbatim, never interpreted
  std::optional<std::string> source_task_id;
  bool is_library_default = false;

  bool operator==(const ConfigRecord&) const = default;
};

struct EvaluationRecord {
  std::string task_id;
  std::string config_id;
  std::uint64_t fold = 0;
  double loss = 0.0;    // lower is better
  bool failed = false;  // empty / NaN / infinite loss field

  bool operator==(const EvaluationRecord& o) const {
    if (task_id != o.task_id || config_id != o.config_id || fold != o.fold ||
        failed != o.failed) {
      return false;
    }
    return failed || loss == o.loss;
  }
};

using TaskTable = std::vector<TaskRecord>;
using ConfigTable = std::vector<ConfigRecord>;

enum class MissingPolicy { kWorstInColumn, kReject };

struct PerformanceMatrix {
  ConfigTable configs;
  TaskTable tasks;
  Matrix values;      // mean loss over successful folds, or imputed
  Mask observed_mask;  // false where the cell was imputed
};

struct BaselineVector {
  std::vector<std::string> tasks;
  std::vector<double> values;
};

struct RegretMatrix {
  ConfigTable configs;
  TaskTable tasks;
  Matrix values;

  std::size_t num_configs() const { return configs.size(); }
  std::size_t num_tasks() const { return tasks.size(); }
  double operator()(std::size_t config, std::size_t task) const {
    return values(static_cast<Eigen::Index>(config),
                  static_cast<Eigen::Index>(task));
  }
  std::optional<std::size_t> task_index(const std::string& task_id) const;
  std::optional<std::size_t> config_index(const std::string& config_id) const;
};

// ---- ingestion / serialization -------------------------------------------

std::vector<EvaluationRecord> ReadEvaluations(const std::filesystem::path& path);
void WriteEvaluations(const std::filesystem::path& path,
                      std::span<const EvaluationRecord> records);

TaskTable ReadMetafeatures(const std::filesystem::path& path);
void WriteMetafeatures(const std::filesystem::path& path, const TaskTable& tasks);

ConfigTable ReadConfigs(const std::filesystem::path& path);
void WriteConfigs(const std::filesystem::path& path, const ConfigTable& configs);
Json ConfigToJson(const ConfigRecord& config);
ConfigRecord ConfigFromJson(const Json& j);

// Throws kRangeViolation when pct_numeric is outside [0, 1] or not finite.
void ValidateTask(const TaskRecord& task);

// ---- matrices -------------------------------------------------------------

PerformanceMatrix BuildPerformanceMatrix(
    std::span<const EvaluationRecord> records, const ConfigTable& configs,
    const TaskTable& tasks,
    MissingPolicy missing_policy = MissingPolicy::kWorstInColumn);

BaselineVector ComputeBaseline(
    const PerformanceMatrix& perf,
    const std::optional<BaselineVector>& explicit_baseline = std::nullopt);

RegretMatrix ComputeRegret(const PerformanceMatrix& perf,
                           const BaselineVector& baseline);

// Extends `perf` with new configuration rows and task columns. The result is
// bit-identical to BuildPerformanceMatrix over the union of all records, with
// new configs appended after the existing rows and new tasks after the
// existing columns. Records may only address cells that involve a new config
// or a new task.
PerformanceMatrix UpdateIncremental(const PerformanceMatrix& perf,
                                    std::span<const EvaluationRecord> new_records,
                                    const ConfigTable& new_configs,
                                    const TaskTable& new_tasks,
                                    MissingPolicy missing_policy =
                                        MissingPolicy::kWorstInColumn);

// Subset of columns, in the given order.
RegretMatrix SelectTasks(const RegretMatrix& regret,
                         std::span<const std::size_t> task_indices);
RegretMatrix DropTask(const RegretMatrix& regret, std::size_t task_index);

// Convenience: ingest three files and derive the regret matrix with the
// column-min baseline.
RegretMatrix LoadRegretMatrix(const std::filesystem::path& evaluations,
                              const std::filesystem::path& metafeatures,
                              const std::filesystem::path& configs,
                              MissingPolicy missing_policy =
                                  MissingPolicy::kWorstInColumn);

// Shortest decimal text that parses back to the same double.
std::string FormatDouble(double value);

}  // namespace cfgfolio
