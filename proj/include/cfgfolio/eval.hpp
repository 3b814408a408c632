#pragma once

// Evaluation harness over an ingested regret matrix (the "bundle": regret
// values plus aligned task and config tables): leave-one-out regret reports,
// summary statistics, k-shot simulation, overfit gaps, scalability curves,
// metafeature rank correlation and the 2-D decision map.

#include <array>
#include <filesystem>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cfgfolio/core.hpp"
#include "cfgfolio/decision.hpp"
#include "cfgfolio/mining.hpp"

namespace cfgfolio {

using Bundle = RegretMatrix;

struct Stats {
  std::size_t n = 0;
  double mean = 0.0;
  double std = 0.0;  // population
  double min = 0.0;
  double p25 = 0.0;
  double p50 = 0.0;
  double p75 = 0.0;
  double p95 = 0.0;
  double p99 = 0.0;
  double max = 0.0;

  bool operator==(const Stats&) const = default;
};

// Percentiles interpolate linearly between sorted values at rank q * (n - 1).
Stats RegretStats(std::span<const double> values);

enum class Strategy { kOurs, kPerTaskBest, kGreedyMean, kSingleBest };

std::string_view StrategyName(Strategy strategy);
Strategy ParseStrategy(std::string_view name);

struct EvalOptions {
  MiningOptions mining;
  std::size_t greedy_mean_size = 5;   // clipped to the config count
  std::optional<std::size_t> kshot;   // adds a k-shot regret per held-out task
};

// Mines a portfolio with the given strategy. `ours` runs GreedyBuild with
// options.mining (including the metric / early-stopping ablation switches).
Portfolio MinePortfolio(const RegretMatrix& regret, Strategy strategy,
                        const EvalOptions& options);

struct TaskOutcome {
  std::string task_id;
  double train_ser_at_stop = 0.0;
  double train_estimate = 0.0;  // mean training regret of the assignments
  double test_regret = 0.0;
  std::string config_id;        // recommended configuration
  std::size_t portfolio_size = 0;
  std::optional<double> kshot_regret;

  bool operator==(const TaskOutcome&) const = default;
};

struct RegretReport {
  std::string strategy;
  double epsilon = 0.0;
  std::vector<TaskOutcome> per_task;
  Stats stats;
  std::optional<std::size_t> kshot;
  std::optional<Stats> kshot_stats;

  bool operator==(const RegretReport&) const = default;
};

// Called with every matrix handed to mining ("mine") and decision fitting
// ("fit") during a leave-one-out fold, together with the held-out task id.
using LooObserver = std::function<void(std::string_view stage,
                                       const RegretMatrix& training,
                                       const std::string& held_out)>;

RegretReport LooCv(const Bundle& bundle, Strategy strategy,
                   const EvalOptions& options,
                   const LooObserver& observer = nullptr);

// Best regret on `task` among the first min(k, |members|) members.
double SimulateKShot(const RegretMatrix& regret, const Portfolio& ordered,
                     std::size_t k, std::size_t task);

struct GapEntry {
  std::string task_id;
  double gap = 0.0;  // test regret minus training estimate
};
std::vector<GapEntry> OverfitGap(const RegretReport& report);

struct CurvePoint {
  std::size_t n_tasks = 0;
  std::size_t portfolio_size = 0;
  bool operator==(const CurvePoint&) const = default;
};
std::vector<CurvePoint> ScalabilityCurve(const Bundle& bundle,
                                         std::span<const std::string> order,
                                         Strategy strategy,
                                         const EvalOptions& options);

// Spearman correlation with average ranks for ties; 0 when either side is
// constant.
double SpearmanRho(std::span<const double> x, std::span<const double> y);

double MetafeatureRankCorrelation(const Bundle& bundle, std::size_t task);

struct MapRow {
  std::string task_id;
  double pc1 = 0.0;
  double pc2 = 0.0;
  std::size_t member_index = 0;
  bool operator==(const MapRow&) const = default;
};

struct DecisionMap {
  std::vector<MapRow> rows;
  std::array<MetafeatureVector, 2> components{};  // unit loadings
  std::array<double, 2> variances{};              // matching eigenvalues
};
DecisionMap ExportDecisionMap(const DecisionModel& model);

// ---- file formats -----------------------------------------------------------

Json ReportToJson(const RegretReport& report);
RegretReport ReportFromJson(const Json& doc);
void WriteReport(const RegretReport& report, const std::filesystem::path& path);
RegretReport ReadReport(const std::filesystem::path& path);

void WriteCurve(const std::filesystem::path& path, std::span<const CurvePoint> curve);
std::vector<CurvePoint> ReadCurve(const std::filesystem::path& path);

void WriteDecisionMap(const std::filesystem::path& path, std::span<const MapRow> rows);
std::vector<MapRow> ReadDecisionMap(const std::filesystem::path& path);

struct CorrelationRow {
  std::string task_id;
  double rho = 0.0;
  bool operator==(const CorrelationRow&) const = default;
};
void WriteCorrelation(const std::filesystem::path& path,
                      std::span<const CorrelationRow> rows);
std::vector<CorrelationRow> ReadCorrelation(const std::filesystem::path& path);

}  // namespace cfgfolio
