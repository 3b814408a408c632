#pragma once

// Zero-shot decision function: a 1-nearest-neighbour classifier over
// standardized task metafeatures whose labels are portfolio members.

#include <filesystem>
#include <string>
#include <vector>

#include "cfgfolio/core.hpp"
#include "cfgfolio/mining.hpp"

namespace cfgfolio {

inline constexpr int kModelFormatVersion = 1;

struct Standardizer {
  MetafeatureVector means{};
  MetafeatureVector stds{1.0, 1.0, 1.0, 1.0};  // population std, 0 -> 1

  MetafeatureVector Apply(const MetafeatureVector& raw) const;
  MetafeatureVector Apply(const TaskRecord& task) const {
    return Apply(task.metafeatures());
  }

  bool operator==(const Standardizer&) const = default;
};

struct Anchor {
  TaskRecord task;  // id plus raw metafeatures
  MetafeatureVector standardized{};
  std::size_t member_index = 0;  // into DecisionModel::portfolio

  bool operator==(const Anchor&) const = default;
};

struct DecisionModel {
  int format_version = kModelFormatVersion;
  double epsilon = 0.0;
  PortfolioMetric metric = PortfolioMetric::kSer;
  Standardizer standardizer;
  ConfigTable portfolio;  // ordered member configs
  std::vector<Anchor> anchors;

  bool operator==(const DecisionModel&) const = default;
};

struct Recommendation {
  ConfigRecord config;
  std::size_t member_index = 0;
  std::string neighbor_task_id;
  double distance = 0.0;  // Euclidean, standardized space

  bool operator==(const Recommendation&) const = default;
};

Standardizer FitStandardizer(const TaskTable& tasks);
MetafeatureVector Standardize(const Standardizer& s, const TaskRecord& task);

// Portfolio position (not config index) of the lowest-regret member for each
// task column of `regret`; ties go to the earlier member.
std::vector<std::size_t> AssignConfigs(const RegretMatrix& regret,
                                       const Portfolio& portfolio);

// `tasks` must match the task columns of `regret` by id and order. Members
// that end up with no anchors are pruned.
DecisionModel FitDecision(const Portfolio& portfolio, const RegretMatrix& regret,
                          const TaskTable& tasks);
DecisionModel FitDecision(const Portfolio& portfolio, const RegretMatrix& regret);

Recommendation Recommend(const DecisionModel& model, const TaskRecord& query);
Recommendation Recommend(const DecisionModel& model,
                         const MetafeatureVector& raw_query);

// Members ordered by distance from the query to their nearest anchor. Ties
// are resolved like Recommend (anchor task id), then by member order, so the
// first entry always equals Recommend().
std::vector<Recommendation> RecommendRanked(const DecisionModel& model,
                                            const MetafeatureVector& raw_query,
                                            std::size_t k);
std::vector<Recommendation> RecommendRanked(const DecisionModel& model,
                                            const TaskRecord& query,
                                            std::size_t k);

// Structural checks shared by fitting and loading. Throws kSchemaViolation.
void ValidateModel(const DecisionModel& model);

Json ModelToJson(const DecisionModel& model);
DecisionModel ModelFromJson(const Json& doc);
std::string SerializeModel(const DecisionModel& model);
void WriteModel(const DecisionModel& model, const std::filesystem::path& path);
DecisionModel ReadModel(const std::filesystem::path& path);

// The JSON object served for a recommendation, with a trailing newline. The
// CLI and the HTTP service both emit exactly these bytes.
std::string RecommendationBody(const Recommendation& rec);

}  // namespace cfgfolio
