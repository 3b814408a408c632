#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <tuple>
#include <unordered_map>
#include <utility>

#include "cfgfolio/core.hpp"

namespace cfgfolio {
namespace {

using IdIndex = std::unordered_map<std::string, std::size_t>;

template <typename Table, typename GetId>
IdIndex IndexIds(const Table& table, GetId get_id, ErrorKind duplicate_kind) {
  IdIndex index;
  for (std::size_t i = 0; i < table.size(); ++i) {
    if (!index.emplace(get_id(table[i]), i).second) {
      throw Error(duplicate_kind, get_id(table[i]));
    }
  }
  return index;
}

IdIndex IndexConfigs(const ConfigTable& configs) {
  return IndexIds(configs, [](const ConfigRecord& c) { return c.config_id; },
                  ErrorKind::kDuplicateConfigId);
}

IdIndex IndexTasks(const TaskTable& tasks) {
  return IndexIds(tasks, [](const TaskRecord& t) { return t.task_id; },
                  ErrorKind::kDuplicateTaskId);
}

// Successful fold losses per cell, folded into a mean in fold order so the
// result does not depend on record order.
class CellAccumulator {
 public:
  CellAccumulator(std::size_t rows, std::size_t cols)
      : cols_(cols), cells_(rows * cols) {}

  void Add(std::size_t row, std::size_t col, std::uint64_t fold, double loss) {
    cells_[row * cols_ + col].emplace_back(fold, loss);
  }

  bool Empty(std::size_t row, std::size_t col) const {
    return cells_[row * cols_ + col].empty();
  }

  double Mean(std::size_t row, std::size_t col) {
    auto& folds = cells_[row * cols_ + col];
    std::sort(folds.begin(), folds.end());
    double sum = 0.0;
    for (const auto& [fold, loss] : folds) sum += loss;
    return sum / static_cast<double>(folds.size());
  }

 private:
  std::size_t cols_;
  std::vector<std::vector<std::pair<std::uint64_t, double>>> cells_;
};

void ImputeMissing(PerformanceMatrix& perf, MissingPolicy policy) {
  const auto rows = perf.values.rows();
  const auto cols = perf.values.cols();
  for (Eigen::Index t = 0; t < cols; ++t) {
    bool any = false;
    double worst = -std::numeric_limits<double>::infinity();
    for (Eigen::Index c = 0; c < rows; ++c) {
      if (perf.observed_mask(c, t)) {
        any = true;
        worst = std::max(worst, perf.values(c, t));
      }
    }
    if (!any) {
      throw Error(ErrorKind::kEmptyColumn,
                  perf.tasks[static_cast<std::size_t>(t)].task_id);
    }
    for (Eigen::Index c = 0; c < rows; ++c) {
      if (perf.observed_mask(c, t)) continue;
      if (policy == MissingPolicy::kReject) {
        throw Error(ErrorKind::kMissingEvaluation,
                    "no successful evaluation of config " +
                        perf.configs[static_cast<std::size_t>(c)].config_id +
                        " on task " +
                        perf.tasks[static_cast<std::size_t>(t)].task_id);
      }
      perf.values(c, t) = worst;
    }
  }
}

std::size_t Lookup(const IdIndex& index, const std::string& id,
                   const char* what) {
  auto it = index.find(id);
  if (it == index.end()) {
    throw Error(ErrorKind::kUnknownId, std::string(what) + " '" + id + "'");
  }
  return it->second;
}

}  // namespace

std::optional<std::size_t> RegretMatrix::task_index(
    const std::string& task_id) const {
  for (std::size_t i = 0; i < tasks.size(); ++i) {
    if (tasks[i].task_id == task_id) return i;
  }
  return std::nullopt;
}

std::optional<std::size_t> RegretMatrix::config_index(
    const std::string& config_id) const {
  for (std::size_t i = 0; i < configs.size(); ++i) {
    if (configs[i].config_id == config_id) return i;
  }
  return std::nullopt;
}

PerformanceMatrix BuildPerformanceMatrix(
    std::span<const EvaluationRecord> records, const ConfigTable& configs,
    const TaskTable& tasks, MissingPolicy missing_policy) {
  if (records.empty() || configs.empty() || tasks.empty()) {
    throw Error(ErrorKind::kEmptyInput,
                "need at least one record, config and task");
  }
  const IdIndex config_index = IndexConfigs(configs);
  const IdIndex task_index = IndexTasks(tasks);

  const std::size_t rows = configs.size();
  const std::size_t cols = tasks.size();
  CellAccumulator acc(rows, cols);
  std::set<std::tuple<std::string_view, std::string_view, std::uint64_t>> keys;
  for (const auto& r : records) {
    const std::size_t c = Lookup(config_index, r.config_id, "config");
    const std::size_t t = Lookup(task_index, r.task_id, "task");
    if (!keys.emplace(r.task_id, r.config_id, r.fold).second) {
      throw Error(ErrorKind::kDuplicateKey, "(" + r.task_id + ", " +
                                                r.config_id + ", " +
                                                std::to_string(r.fold) + ")");
    }
    if (!r.failed) acc.Add(c, t, r.fold, r.loss);
  }

  PerformanceMatrix perf;
  perf.configs = configs;
  perf.tasks = tasks;
  perf.values = Matrix::Zero(static_cast<Eigen::Index>(rows),
                             static_cast<Eigen::Index>(cols));
  perf.observed_mask = Mask::Constant(static_cast<Eigen::Index>(rows),
                                      static_cast<Eigen::Index>(cols), false);
  for (std::size_t c = 0; c < rows; ++c) {
    for (std::size_t t = 0; t < cols; ++t) {
      if (acc.Empty(c, t)) continue;
      perf.values(static_cast<Eigen::Index>(c), static_cast<Eigen::Index>(t)) =
          acc.Mean(c, t);
      perf.observed_mask(static_cast<Eigen::Index>(c),
                         static_cast<Eigen::Index>(t)) = true;
    }
  }
  ImputeMissing(perf, missing_policy);
  return perf;
}

BaselineVector ComputeBaseline(const PerformanceMatrix& perf,
                               const std::optional<BaselineVector>& explicit_baseline) {
  BaselineVector out;
  out.tasks.reserve(perf.tasks.size());
  for (const auto& t : perf.tasks) out.tasks.push_back(t.task_id);

  if (explicit_baseline) {
    if (explicit_baseline->tasks.size() != explicit_baseline->values.size()) {
      throw Error(ErrorKind::kDimensionMismatch,
                  "baseline ids and values differ in length");
    }
    std::unordered_map<std::string, double> given;
    for (std::size_t i = 0; i < explicit_baseline->tasks.size(); ++i) {
      given[explicit_baseline->tasks[i]] = explicit_baseline->values[i];
    }
    for (const auto& id : out.tasks) {
      auto it = given.find(id);
      if (it == given.end()) throw Error(ErrorKind::kCoverageGap, id);
      if (!std::isfinite(it->second)) {
        throw Error(ErrorKind::kNonFinite, "baseline for " + id);
      }
      out.values.push_back(it->second);
    }
    return out;
  }

  for (Eigen::Index t = 0; t < perf.values.cols(); ++t) {
    double best = std::numeric_limits<double>::infinity();
    for (Eigen::Index c = 0; c < perf.values.rows(); ++c) {
      if (perf.observed_mask(c, t)) best = std::min(best, perf.values(c, t));
    }
    if (!std::isfinite(best)) {
      throw Error(ErrorKind::kEmptyColumn,
                  perf.tasks[static_cast<std::size_t>(t)].task_id);
    }
    out.values.push_back(best);
  }
  return out;
}

RegretMatrix ComputeRegret(const PerformanceMatrix& perf,
                           const BaselineVector& baseline) {
  const auto cols = perf.values.cols();
  if (static_cast<Eigen::Index>(baseline.values.size()) != cols ||
      baseline.tasks.size() != baseline.values.size()) {
    throw Error(ErrorKind::kDimensionMismatch,
                "baseline length does not match task count");
  }
  for (std::size_t t = 0; t < perf.tasks.size(); ++t) {
    if (baseline.tasks[t] != perf.tasks[t].task_id) {
      throw Error(ErrorKind::kDimensionMismatch,
                  "baseline task order differs at column " + std::to_string(t));
    }
  }
  RegretMatrix regret;
  regret.configs = perf.configs;
  regret.tasks = perf.tasks;
  regret.values = perf.values;
  for (Eigen::Index t = 0; t < cols; ++t) {
    regret.values.col(t).array() -= baseline.values[static_cast<std::size_t>(t)];
  }
  return regret;
}

PerformanceMatrix UpdateIncremental(const PerformanceMatrix& perf,
                                    std::span<const EvaluationRecord> new_records,
                                    const ConfigTable& new_configs,
                                    const TaskTable& new_tasks,
                                    MissingPolicy missing_policy) {
  PerformanceMatrix out;
  out.configs = perf.configs;
  out.configs.insert(out.configs.end(), new_configs.begin(), new_configs.end());
  out.tasks = perf.tasks;
  out.tasks.insert(out.tasks.end(), new_tasks.begin(), new_tasks.end());

  IdIndex config_index;
  IdIndex task_index;
  try {
    config_index = IndexConfigs(out.configs);
    task_index = IndexTasks(out.tasks);
  } catch (const Error& e) {
    throw Error(ErrorKind::kDuplicateKey, std::string("id reused: ") + e.what());
  }

  const auto old_rows = perf.values.rows();
  const auto old_cols = perf.values.cols();
  const std::size_t rows = out.configs.size();
  const std::size_t cols = out.tasks.size();

  CellAccumulator acc(rows, cols);
  std::set<std::tuple<std::string_view, std::string_view, std::uint64_t>> keys;
  for (const auto& r : new_records) {
    const std::size_t c = Lookup(config_index, r.config_id, "config");
    const std::size_t t = Lookup(task_index, r.task_id, "task");
    if (static_cast<Eigen::Index>(c) < old_rows &&
        static_cast<Eigen::Index>(t) < old_cols) {
      throw Error(ErrorKind::kDuplicateKey,
                  "cell (" + r.task_id + ", " + r.config_id +
                      ") already aggregated in the existing matrix");
    }
    if (!keys.emplace(r.task_id, r.config_id, r.fold).second) {
      throw Error(ErrorKind::kDuplicateKey, "(" + r.task_id + ", " +
                                                r.config_id + ", " +
                                                std::to_string(r.fold) + ")");
    }
    if (!r.failed) acc.Add(c, t, r.fold, r.loss);
  }

  out.values = Matrix::Zero(static_cast<Eigen::Index>(rows),
                            static_cast<Eigen::Index>(cols));
  out.observed_mask = Mask::Constant(static_cast<Eigen::Index>(rows),
                                     static_cast<Eigen::Index>(cols), false);
  for (Eigen::Index c = 0; c < old_rows; ++c) {
    for (Eigen::Index t = 0; t < old_cols; ++t) {
      if (perf.observed_mask(c, t)) {
        out.values(c, t) = perf.values(c, t);
        out.observed_mask(c, t) = true;
      }
    }
  }
  for (std::size_t c = 0; c < rows; ++c) {
    for (std::size_t t = 0; t < cols; ++t) {
      if (acc.Empty(c, t)) continue;
      out.values(static_cast<Eigen::Index>(c), static_cast<Eigen::Index>(t)) =
          acc.Mean(c, t);
      out.observed_mask(static_cast<Eigen::Index>(c),
                        static_cast<Eigen::Index>(t)) = true;
    }
  }
  ImputeMissing(out, missing_policy);
  return out;
}

RegretMatrix SelectTasks(const RegretMatrix& regret,
                         std::span<const std::size_t> task_indices) {
  RegretMatrix out;
  out.configs = regret.configs;
  out.values.resize(regret.values.rows(),
                    static_cast<Eigen::Index>(task_indices.size()));
  for (std::size_t j = 0; j < task_indices.size(); ++j) {
    const std::size_t t = task_indices[j];
    if (t >= regret.num_tasks()) {
      throw Error(ErrorKind::kIndexOutOfRange,
                  "task index " + std::to_string(t));
    }
    out.tasks.push_back(regret.tasks[t]);
    out.values.col(static_cast<Eigen::Index>(j)) =
        regret.values.col(static_cast<Eigen::Index>(t));
  }
  return out;
}

RegretMatrix DropTask(const RegretMatrix& regret, std::size_t task_index) {
  if (task_index >= regret.num_tasks()) {
    throw Error(ErrorKind::kIndexOutOfRange,
                "task index " + std::to_string(task_index));
  }
  std::vector<std::size_t> keep;
  keep.reserve(regret.num_tasks() - 1);
  for (std::size_t t = 0; t < regret.num_tasks(); ++t) {
    if (t != task_index) keep.push_back(t);
  }
  return SelectTasks(regret, keep);
}

RegretMatrix LoadRegretMatrix(const std::filesystem::path& evaluations,
                              const std::filesystem::path& metafeatures,
                              const std::filesystem::path& configs,
                              MissingPolicy missing_policy) {
  const auto records = ReadEvaluations(evaluations);
  const auto tasks = ReadMetafeatures(metafeatures);
  const auto config_table = ReadConfigs(configs);
  const auto perf =
      BuildPerformanceMatrix(records, config_table, tasks, missing_policy);
  return ComputeRegret(perf, ComputeBaseline(perf));
}

}  // namespace cfgfolio
