#include <algorithm>
#include <string>

#include "cfgfolio/eval.hpp"

namespace cfgfolio {
namespace {

void GuardHeldOut(std::string_view stage, const RegretMatrix& training,
                  const std::string& held_out, const LooObserver& observer) {
  if (training.task_index(held_out)) {
    throw Error(ErrorKind::kLeakage, "held-out task " + held_out +
                                         " present in " + std::string(stage) +
                                         " input");
  }
  if (observer) observer(stage, training, held_out);
}

}  // namespace

std::string_view StrategyName(Strategy strategy) {
  switch (strategy) {
    case Strategy::kOurs:
      return "ours";
    case Strategy::kPerTaskBest:
      return "per_task_best";
    case Strategy::kGreedyMean:
      return "greedy_mean";
    case Strategy::kSingleBest:
      return "single_best";
  }
  return "ours";
}

Strategy ParseStrategy(std::string_view name) {
  for (auto s : {Strategy::kOurs, Strategy::kPerTaskBest, Strategy::kGreedyMean,
                 Strategy::kSingleBest}) {
    if (StrategyName(s) == name) return s;
  }
  throw Error(ErrorKind::kInvalidOption,
              "unknown strategy '" + std::string(name) + "'");
}

Portfolio MinePortfolio(const RegretMatrix& regret, Strategy strategy,
                        const EvalOptions& options) {
  switch (strategy) {
    case Strategy::kOurs:
      return GreedyBuild(regret, options.mining);
    case Strategy::kPerTaskBest:
      return MinePerTaskBest(regret);
    case Strategy::kGreedyMean:
      return MineGreedyMean(
          regret, std::min(options.greedy_mean_size, regret.num_configs()),
          options.mining.tie_tolerance);
    case Strategy::kSingleBest: {
      Portfolio p;
      p.members = {BestSingle(regret, SingleCriterion::kMean, options.mining.epsilon,
                              options.mining.tie_tolerance)};
      p.metric = PortfolioMetric::kSingleBest;
      p.epsilon = options.mining.epsilon;
      p.stop_reason = StopReason::kSizeCap;
      return p;
    }
  }
  throw Error(ErrorKind::kInvalidOption, "unknown strategy");
}

RegretReport LooCv(const Bundle& bundle, Strategy strategy,
                   const EvalOptions& options, const LooObserver& observer) {
  if (bundle.num_tasks() < 2) {
    throw Error(ErrorKind::kTooFewTasks, "leave-one-out needs at least 2 tasks");
  }
  const double eps = options.mining.epsilon;
  RegretReport report;
  report.strategy = std::string(StrategyName(strategy));
  report.epsilon = eps;
  report.kshot = options.kshot;

  std::vector<double> test_regrets;
  std::vector<double> kshot_regrets;
  for (std::size_t held = 0; held < bundle.num_tasks(); ++held) {
    const std::string& held_id = bundle.tasks[held].task_id;
    const RegretMatrix training = DropTask(bundle, held);

    GuardHeldOut("mine", training, held_id, observer);
    const Portfolio portfolio = MinePortfolio(training, strategy, options);

    GuardHeldOut("fit", training, held_id, observer);
    const DecisionModel model = FitDecision(portfolio, training, training.tasks);
    const Recommendation rec = Recommend(model, bundle.tasks[held]);

    const auto row = bundle.config_index(rec.config.config_id);
    TaskOutcome outcome;
    outcome.task_id = held_id;
    outcome.train_ser_at_stop = Ser(training, portfolio.members, eps);
    outcome.train_estimate = MeanRegret(training, portfolio.members);
    outcome.test_regret = bundle(*row, held);
    outcome.config_id = rec.config.config_id;
    outcome.portfolio_size = model.portfolio.size();
    if (options.kshot) {
      outcome.kshot_regret = SimulateKShot(bundle, portfolio, *options.kshot, held);
      kshot_regrets.push_back(*outcome.kshot_regret);
    }
    test_regrets.push_back(outcome.test_regret);
    report.per_task.push_back(std::move(outcome));
  }
  report.stats = RegretStats(test_regrets);
  if (options.kshot) report.kshot_stats = RegretStats(kshot_regrets);
  return report;
}

double SimulateKShot(const RegretMatrix& regret, const Portfolio& ordered,
                     std::size_t k, std::size_t task) {
  if (ordered.members.empty()) {
    throw Error(ErrorKind::kEmptyPortfolio, "k-shot needs a non-empty portfolio");
  }
  if (k == 0) throw Error(ErrorKind::kInvalidOption, "k must be positive");
  if (task >= regret.num_tasks()) {
    throw Error(ErrorKind::kIndexOutOfRange, "task index " + std::to_string(task));
  }
  const std::size_t tries = std::min(k, ordered.members.size());
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < tries; ++i) {
    const std::size_t m = ordered.members[i];
    if (m >= regret.num_configs()) {
      throw Error(ErrorKind::kIndexOutOfRange, "member " + std::to_string(m));
    }
    best = std::min(best, regret(m, task));
  }
  return best;
}

std::vector<GapEntry> OverfitGap(const RegretReport& report) {
  std::vector<GapEntry> gaps;
  gaps.reserve(report.per_task.size());
  for (const auto& t : report.per_task) {
    gaps.push_back({t.task_id, t.test_regret - t.train_estimate});
  }
  return gaps;
}

std::vector<CurvePoint> ScalabilityCurve(const Bundle& bundle,
                                         std::span<const std::string> order,
                                         Strategy strategy,
                                         const EvalOptions& options) {
  if (order.empty()) throw Error(ErrorKind::kInvalidOption, "empty task order");
  std::vector<std::size_t> indices;
  std::vector<bool> seen(bundle.num_tasks(), false);
  for (const auto& id : order) {
    const auto t = bundle.task_index(id);
    if (!t) throw Error(ErrorKind::kUnknownTaskId, id);
    if (seen[*t]) throw Error(ErrorKind::kInvalidOption, "task repeated: " + id);
    seen[*t] = true;
    indices.push_back(*t);
  }
  std::vector<CurvePoint> curve;
  for (std::size_t n = 1; n <= indices.size(); ++n) {
    const RegretMatrix prefix =
        SelectTasks(bundle, std::span<const std::size_t>(indices.data(), n));
    curve.push_back({n, MinePortfolio(prefix, strategy, options).members.size()});
  }
  return curve;
}

}  // namespace cfgfolio
