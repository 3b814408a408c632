#include <algorithm>
#include <cmath>
#include <string>

#include "cfgfolio/mining.hpp"

namespace cfgfolio {
namespace {

void RequireNonEmpty(const RegretMatrix& regret) {
  if (regret.num_configs() == 0 || regret.num_tasks() == 0 ||
      regret.values.size() == 0) {
    throw Error(ErrorKind::kEmptyMatrix, "regret matrix has no cells");
  }
  if (regret.values.rows() != static_cast<Eigen::Index>(regret.num_configs()) ||
      regret.values.cols() != static_cast<Eigen::Index>(regret.num_tasks())) {
    throw Error(ErrorKind::kDimensionMismatch,
                "regret values do not match config/task tables");
  }
}

void RequireFinite(const RegretMatrix& regret) {
  if (!regret.values.allFinite()) {
    throw Error(ErrorKind::kNonFinite, "regret matrix contains NaN or inf");
  }
}

// Scores of every one-config extension of a portfolio whose per-task minimum
// regret is `current_min` (+inf for tasks not yet covered).
struct Extension {
  double ser = 0.0;
  double mean = 0.0;
};

Extension ScoreExtension(const RegretMatrix& regret,
                         const std::vector<double>& current_min,
                         std::size_t candidate, double epsilon) {
  Extension ext;
  double sum = 0.0;
  const auto row = static_cast<Eigen::Index>(candidate);
  for (std::size_t t = 0; t < current_min.size(); ++t) {
    const double m =
        std::min(current_min[t], regret.values(row, static_cast<Eigen::Index>(t)));
    ext.ser += std::max(m - epsilon, 0.0);
    sum += m;
  }
  ext.mean = sum / static_cast<double>(current_min.size());
  return ext;
}

struct Candidate {
  std::size_t index;
  double score;
  double secondary;
};

// Minimum score wins; scores within the relative tolerance of the minimum
// tie and are resolved by the smaller secondary key, then the lower index.
const Candidate& SelectBest(const std::vector<Candidate>& candidates,
                            double tolerance) {
  double min_score = std::numeric_limits<double>::infinity();
  for (const auto& c : candidates) min_score = std::min(min_score, c.score);
  const Candidate* best = nullptr;
  for (const auto& c : candidates) {
    if (!WithinTolerance(c.score, min_score, tolerance)) continue;
    if (best == nullptr || c.secondary < best->secondary ||
        (c.secondary == best->secondary && c.index < best->index)) {
      best = &c;
    }
  }
  return *best;
}

void UpdateMin(const RegretMatrix& regret, std::size_t config,
               std::vector<double>& current_min) {
  const auto row = static_cast<Eigen::Index>(config);
  for (std::size_t t = 0; t < current_min.size(); ++t) {
    current_min[t] =
        std::min(current_min[t], regret.values(row, static_cast<Eigen::Index>(t)));
  }
}

}  // namespace

std::string_view MetricName(PortfolioMetric metric) {
  switch (metric) {
    case PortfolioMetric::kSer:
      return "ser";
    case PortfolioMetric::kMean:
      return "mean";
    case PortfolioMetric::kPerTaskBest:
      return "per_task_best";
    case PortfolioMetric::kGreedyMean:
      return "greedy_mean";
    case PortfolioMetric::kSingleBest:
      return "single_best";
  }
  return "ser";
}

PortfolioMetric ParseMetric(std::string_view name) {
  for (auto m : {PortfolioMetric::kSer, PortfolioMetric::kMean,
                 PortfolioMetric::kPerTaskBest, PortfolioMetric::kGreedyMean,
                 PortfolioMetric::kSingleBest}) {
    if (MetricName(m) == name) return m;
  }
  throw Error(ErrorKind::kInvalidOption, "unknown metric '" + std::string(name) + "'");
}

std::string_view StopReasonName(StopReason reason) {
  switch (reason) {
    case StopReason::kTargetReached:
      return "target_reached";
    case StopReason::kEarlyStopped:
      return "early_stopped";
    case StopReason::kExhausted:
      return "exhausted";
    case StopReason::kSizeCap:
      return "size_cap";
  }
  return "exhausted";
}

void MiningOptions::Validate() const {
  if (!std::isfinite(epsilon) || epsilon < 0.0) {
    throw Error(ErrorKind::kInvalidOption, "epsilon must be finite and >= 0");
  }
  if (!std::isfinite(tie_tolerance) || tie_tolerance < 0.0) {
    throw Error(ErrorKind::kInvalidOption, "tie_tolerance must be >= 0");
  }
  if (metric != PortfolioMetric::kSer && metric != PortfolioMetric::kMean) {
    throw Error(ErrorKind::kInvalidOption,
                "greedy metric must be 'ser' or 'mean'");
  }
  if (max_size && *max_size == 0) {
    throw Error(ErrorKind::kInvalidOption, "max_size must be positive");
  }
}

bool WithinTolerance(double a, double b, double tolerance) {
  if (a == b) return true;
  return std::abs(a - b) <= tolerance * std::max(std::abs(a), std::abs(b));
}

double Ser(const RegretMatrix& regret, std::span<const std::size_t> members,
           double epsilon) {
  for (auto m : members) {
    if (m >= regret.num_configs()) {
      throw Error(ErrorKind::kIndexOutOfRange, "config index " + std::to_string(m));
    }
  }
  if (members.empty()) return kInfiniteSer;
  double total = 0.0;
  for (std::size_t t = 0; t < regret.num_tasks(); ++t) {
    double m = std::numeric_limits<double>::infinity();
    for (auto s : members) m = std::min(m, regret(s, t));
    total += std::max(m - epsilon, 0.0);
  }
  return total;
}

double MeanRegret(const RegretMatrix& regret,
                  std::span<const std::size_t> members) {
  if (members.empty()) throw Error(ErrorKind::kEmptyPortfolio, "no members");
  for (auto m : members) {
    if (m >= regret.num_configs()) {
      throw Error(ErrorKind::kIndexOutOfRange, "config index " + std::to_string(m));
    }
  }
  if (regret.num_tasks() == 0) throw Error(ErrorKind::kEmptyMatrix, "no tasks");
  double sum = 0.0;
  for (std::size_t t = 0; t < regret.num_tasks(); ++t) {
    double m = std::numeric_limits<double>::infinity();
    for (auto s : members) m = std::min(m, regret(s, t));
    sum += m;
  }
  return sum / static_cast<double>(regret.num_tasks());
}

Portfolio GreedyBuild(const RegretMatrix& regret, const MiningOptions& options) {
  options.Validate();
  RequireNonEmpty(regret);
  RequireFinite(regret);

  const double eps = options.epsilon;
  const bool use_ser = options.metric == PortfolioMetric::kSer;

  Portfolio portfolio;
  portfolio.epsilon = eps;
  portfolio.metric = options.metric;

  std::vector<double> current_min(regret.num_tasks(),
                                  std::numeric_limits<double>::infinity());
  std::vector<bool> available(regret.num_configs(), true);
  std::size_t num_available = regret.num_configs();
  double e = std::numeric_limits<double>::infinity();

  std::vector<Candidate> candidates;
  std::vector<Extension> extensions(regret.num_configs());
  while (true) {
    if (num_available == 0) {
      portfolio.stop_reason = StopReason::kExhausted;
      break;
    }
    if (e <= eps) {
      portfolio.stop_reason = StopReason::kTargetReached;
      break;
    }
    if (options.max_size && portfolio.members.size() >= *options.max_size) {
      portfolio.stop_reason = StopReason::kSizeCap;
      break;
    }

    candidates.clear();
    for (std::size_t c = 0; c < regret.num_configs(); ++c) {
      if (!available[c]) continue;
      extensions[c] = ScoreExtension(regret, current_min, c, eps);
      candidates.push_back(
          {c, use_ser ? extensions[c].ser : extensions[c].mean, extensions[c].mean});
    }
    double min_score = std::numeric_limits<double>::infinity();
    for (const auto& c : candidates) min_score = std::min(min_score, c.score);
    if (!std::isfinite(min_score)) {
      throw Error(ErrorKind::kNonFinite, "no extension has a finite score");
    }
    // Stop when even the best extension stays above (1 - eps / 2) * e.
    if (options.early_stopping && std::isfinite(e) &&
        (1.0 - eps / 2.0) * e < min_score) {
      portfolio.stop_reason = StopReason::kEarlyStopped;
      break;
    }

    const Candidate& chosen = SelectBest(candidates, options.tie_tolerance);
    const std::size_t c = chosen.index;
    portfolio.members.push_back(c);
    portfolio.trace.push_back({c, extensions[c].ser, extensions[c].mean, chosen.score});
    UpdateMin(regret, c, current_min);
    available[c] = false;
    --num_available;
    e = chosen.score;
  }
  return portfolio;
}

Portfolio MinePerTaskBest(const RegretMatrix& regret) {
  RequireNonEmpty(regret);
  Portfolio portfolio;
  portfolio.metric = PortfolioMetric::kPerTaskBest;
  portfolio.stop_reason = StopReason::kExhausted;
  std::vector<bool> taken(regret.num_configs(), false);
  for (std::size_t t = 0; t < regret.num_tasks(); ++t) {
    std::size_t best = 0;
    for (std::size_t c = 1; c < regret.num_configs(); ++c) {
      if (regret(c, t) < regret(best, t)) best = c;
    }
    if (!taken[best]) {
      taken[best] = true;
      portfolio.members.push_back(best);
    }
  }
  return portfolio;
}

Portfolio MineGreedyMean(const RegretMatrix& regret, std::size_t size,
                         double tie_tolerance) {
  RequireNonEmpty(regret);
  RequireFinite(regret);
  if (size == 0) throw Error(ErrorKind::kInvalidOption, "size must be positive");
  if (size > regret.num_configs()) {
    throw Error(ErrorKind::kSizeTooLarge,
                std::to_string(size) + " > " + std::to_string(regret.num_configs()));
  }
  Portfolio portfolio;
  portfolio.metric = PortfolioMetric::kGreedyMean;
  portfolio.stop_reason = StopReason::kSizeCap;

  std::vector<double> current_min(regret.num_tasks(),
                                  std::numeric_limits<double>::infinity());
  std::vector<bool> available(regret.num_configs(), true);
  std::vector<Candidate> candidates;
  std::vector<Extension> extensions(regret.num_configs());
  while (portfolio.members.size() < size) {
    candidates.clear();
    for (std::size_t c = 0; c < regret.num_configs(); ++c) {
      if (!available[c]) continue;
      extensions[c] = ScoreExtension(regret, current_min, c, 0.0);
      candidates.push_back({c, extensions[c].mean, 0.0});
    }
    const std::size_t c = SelectBest(candidates, tie_tolerance).index;
    portfolio.members.push_back(c);
    portfolio.trace.push_back(
        {c, extensions[c].ser, extensions[c].mean, extensions[c].mean});
    UpdateMin(regret, c, current_min);
    available[c] = false;
  }
  if (portfolio.members.size() == regret.num_configs()) {
    portfolio.stop_reason = StopReason::kExhausted;
  }
  return portfolio;
}

std::size_t BestSingle(const RegretMatrix& regret, SingleCriterion criterion,
                       double epsilon, double tie_tolerance) {
  RequireNonEmpty(regret);
  RequireFinite(regret);
  const std::vector<double> uncovered(regret.num_tasks(),
                                      std::numeric_limits<double>::infinity());
  std::vector<Candidate> candidates;
  candidates.reserve(regret.num_configs());
  for (std::size_t c = 0; c < regret.num_configs(); ++c) {
    const Extension ext = ScoreExtension(regret, uncovered, c, epsilon);
    if (criterion == SingleCriterion::kSer) {
      candidates.push_back({c, ext.ser, ext.mean});
    } else {
      candidates.push_back({c, ext.mean, 0.0});
    }
  }
  return SelectBest(candidates, tie_tolerance).index;
}

}  // namespace cfgfolio
