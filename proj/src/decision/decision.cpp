#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "cfgfolio/decision.hpp"

namespace cfgfolio {
namespace {

double SquaredDistance(const MetafeatureVector& a, const MetafeatureVector& b) {
  double sum = 0.0;
  for (std::size_t i = 0; i < kNumMetafeatures; ++i) {
    const double d = a[i] - b[i];
    sum += d * d;
  }
  return sum;
}

// Strict ordering on (squared distance, task id).
bool Closer(double d_a, const std::string& id_a, double d_b,
            const std::string& id_b) {
  if (d_a != d_b) return d_a < d_b;
  return id_a < id_b;
}

void RequireAnchors(const DecisionModel& model) {
  if (model.anchors.empty() || model.portfolio.empty()) {
    throw Error(ErrorKind::kEmptyModel, "decision model has no anchors");
  }
}

Recommendation MakeRecommendation(const DecisionModel& model, const Anchor& anchor,
                                  double squared_distance) {
  Recommendation rec;
  rec.config = model.portfolio[anchor.member_index];
  rec.member_index = anchor.member_index;
  rec.neighbor_task_id = anchor.task.task_id;
  rec.distance = std::sqrt(squared_distance);
  return rec;
}

}  // namespace

MetafeatureVector Standardizer::Apply(const MetafeatureVector& raw) const {
  MetafeatureVector out{};
  for (std::size_t i = 0; i < kNumMetafeatures; ++i) {
    out[i] = (raw[i] - means[i]) / stds[i];
  }
  return out;
}

Standardizer FitStandardizer(const TaskTable& tasks) {
  if (tasks.empty()) throw Error(ErrorKind::kEmptyTable, "no tasks to standardize");
  const double n = static_cast<double>(tasks.size());
  Standardizer s;
  for (std::size_t d = 0; d < kNumMetafeatures; ++d) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    double sum = 0.0;
    for (const auto& t : tasks) {
      const double x = t.metafeatures()[d];
      lo = std::min(lo, x);
      hi = std::max(hi, x);
      sum += x;
    }
    if (lo == hi) {
      // Constant column: centre exactly and leave the scale alone.
      s.means[d] = lo;
      s.stds[d] = 1.0;
      continue;
    }
    const double mean = sum / n;
    double ss = 0.0;
    for (const auto& t : tasks) {
      const double dx = t.metafeatures()[d] - mean;
      ss += dx * dx;
    }
    const double sd = std::sqrt(ss / n);
    s.means[d] = mean;
    s.stds[d] = sd > 0.0 ? sd : 1.0;
  }
  return s;
}

MetafeatureVector Standardize(const Standardizer& s, const TaskRecord& task) {
  return s.Apply(task);
}

std::vector<std::size_t> AssignConfigs(const RegretMatrix& regret,
                                       const Portfolio& portfolio) {
  if (portfolio.members.empty()) {
    throw Error(ErrorKind::kEmptyPortfolio, "cannot assign with no members");
  }
  for (auto m : portfolio.members) {
    if (m >= regret.num_configs()) {
      throw Error(ErrorKind::kIndexOutOfRange, "member " + std::to_string(m));
    }
  }
  std::vector<std::size_t> labels(regret.num_tasks(), 0);
  for (std::size_t t = 0; t < regret.num_tasks(); ++t) {
    std::size_t best = 0;
    for (std::size_t j = 1; j < portfolio.members.size(); ++j) {
      if (regret(portfolio.members[j], t) < regret(portfolio.members[best], t)) {
        best = j;
      }
    }
    labels[t] = best;
  }
  return labels;
}

DecisionModel FitDecision(const Portfolio& portfolio, const RegretMatrix& regret,
                          const TaskTable& tasks) {
  if (tasks.empty()) throw Error(ErrorKind::kEmptyTable, "no training tasks");
  if (tasks.size() != regret.num_tasks()) {
    throw Error(ErrorKind::kDimensionMismatch,
                "task table does not match regret columns");
  }
  for (std::size_t t = 0; t < tasks.size(); ++t) {
    if (tasks[t].task_id != regret.tasks[t].task_id) {
      throw Error(ErrorKind::kDimensionMismatch,
                  "task " + tasks[t].task_id + " misaligned at column " +
                      std::to_string(t));
    }
  }
  const auto labels = AssignConfigs(regret, portfolio);

  // Keep members that label at least one task, in portfolio order.
  std::vector<bool> used(portfolio.members.size(), false);
  for (auto l : labels) used[l] = true;
  std::vector<std::size_t> remap(portfolio.members.size(), 0);

  DecisionModel model;
  model.epsilon = portfolio.epsilon;
  model.metric = portfolio.metric;
  model.standardizer = FitStandardizer(tasks);
  for (std::size_t j = 0; j < portfolio.members.size(); ++j) {
    if (!used[j]) continue;
    remap[j] = model.portfolio.size();
    model.portfolio.push_back(regret.configs[portfolio.members[j]]);
  }
  model.anchors.reserve(tasks.size());
  for (std::size_t t = 0; t < tasks.size(); ++t) {
    Anchor a;
    a.task = tasks[t];
    a.standardized = model.standardizer.Apply(tasks[t]);
    a.member_index = remap[labels[t]];
    model.anchors.push_back(std::move(a));
  }
  return model;
}

DecisionModel FitDecision(const Portfolio& portfolio, const RegretMatrix& regret) {
  return FitDecision(portfolio, regret, regret.tasks);
}

Recommendation Recommend(const DecisionModel& model,
                         const MetafeatureVector& raw_query) {
  RequireAnchors(model);
  const MetafeatureVector q = model.standardizer.Apply(raw_query);
  const Anchor* best = &model.anchors.front();
  double best_d = SquaredDistance(q, best->standardized);
  for (std::size_t i = 1; i < model.anchors.size(); ++i) {
    const Anchor& a = model.anchors[i];
    const double d = SquaredDistance(q, a.standardized);
    if (Closer(d, a.task.task_id, best_d, best->task.task_id)) {
      best = &a;
      best_d = d;
    }
  }
  return MakeRecommendation(model, *best, best_d);
}

Recommendation Recommend(const DecisionModel& model, const TaskRecord& query) {
  return Recommend(model, query.metafeatures());
}

std::vector<Recommendation> RecommendRanked(const DecisionModel& model,
                                            const MetafeatureVector& raw_query,
                                            std::size_t k) {
  RequireAnchors(model);
  if (k == 0) throw Error(ErrorKind::kInvalidOption, "k must be positive");
  const MetafeatureVector q = model.standardizer.Apply(raw_query);

  struct Nearest {
    const Anchor* anchor = nullptr;
    double d = 0.0;
  };
  std::vector<Nearest> nearest(model.portfolio.size());
  for (const auto& a : model.anchors) {
    const double d = SquaredDistance(q, a.standardized);
    Nearest& n = nearest[a.member_index];
    if (n.anchor == nullptr || Closer(d, a.task.task_id, n.d, n.anchor->task.task_id)) {
      n = {&a, d};
    }
  }
  std::vector<std::size_t> order;
  for (std::size_t m = 0; m < nearest.size(); ++m) {
    if (nearest[m].anchor != nullptr) order.push_back(m);
  }
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const Nearest& na = nearest[a];
    const Nearest& nb = nearest[b];
    if (na.d != nb.d) return na.d < nb.d;
    if (na.anchor->task.task_id != nb.anchor->task.task_id) {
      return na.anchor->task.task_id < nb.anchor->task.task_id;
    }
    return a < b;
  });
  if (order.size() > k) order.resize(k);
  std::vector<Recommendation> out;
  out.reserve(order.size());
  for (auto m : order) {
    out.push_back(MakeRecommendation(model, *nearest[m].anchor, nearest[m].d));
  }
  return out;
}

std::vector<Recommendation> RecommendRanked(const DecisionModel& model,
                                            const TaskRecord& query,
                                            std::size_t k) {
  return RecommendRanked(model, query.metafeatures(), k);
}

}  // namespace cfgfolio
