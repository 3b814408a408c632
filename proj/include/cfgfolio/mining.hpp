#pragma once

// Portfolio mining over a regret matrix: the sum-of-excess-regret greedy
// builder with early stopping, and the baseline miners it is compared with.

#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "cfgfolio/core.hpp"

namespace cfgfolio {

enum class PortfolioMetric {
  kSer,          // sum of excess regret (greedy builder)
  kMean,         // mean regret (greedy builder ablation)
  kPerTaskBest,  // column argmins
  kGreedyMean,   // fixed-size mean-regret greedy
  kSingleBest,
};

enum class StopReason { kTargetReached, kEarlyStopped, kExhausted, kSizeCap };

std::string_view MetricName(PortfolioMetric metric);
PortfolioMetric ParseMetric(std::string_view name);
std::string_view StopReasonName(StopReason reason);

struct MiningStep {
  std::size_t config = 0;
  double ser = 0.0;          // SER of the portfolio after this step
  double mean_regret = 0.0;  // mean regret after this step
  double score = 0.0;        // value of the objective that selected it

  bool operator==(const MiningStep&) const = default;
};

struct Portfolio {
  std::vector<std::size_t> members;  // row indices into the regret matrix
  std::vector<MiningStep> trace;
  double epsilon = 0.0;
  PortfolioMetric metric = PortfolioMetric::kSer;
  StopReason stop_reason = StopReason::kExhausted;

  bool operator==(const Portfolio&) const = default;
};

struct MiningOptions {
  double epsilon = 0.01;
  PortfolioMetric metric = PortfolioMetric::kSer;  // kSer or kMean
  bool early_stopping = true;
  std::optional<std::size_t> max_size;
  double tie_tolerance = 1e-12;  // relative

  void Validate() const;
};

// Returned by Ser() for an empty member set.
inline constexpr double kInfiniteSer = std::numeric_limits<double>::infinity();

double Ser(const RegretMatrix& regret, std::span<const std::size_t> members,
           double epsilon);
double MeanRegret(const RegretMatrix& regret,
                  std::span<const std::size_t> members);

// True when `a` and `b` agree within `tolerance` relative to the larger
// magnitude. Exact equality always counts as a tie.
bool WithinTolerance(double a, double b, double tolerance);

Portfolio GreedyBuild(const RegretMatrix& regret, const MiningOptions& options);

Portfolio MinePerTaskBest(const RegretMatrix& regret);

Portfolio MineGreedyMean(const RegretMatrix& regret, std::size_t size,
                         double tie_tolerance = 1e-12);

enum class SingleCriterion { kMean, kSer };

std::size_t BestSingle(const RegretMatrix& regret, SingleCriterion criterion,
                       double epsilon, double tie_tolerance = 1e-12);

}  // namespace cfgfolio
