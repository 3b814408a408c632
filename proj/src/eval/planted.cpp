#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <random>

#include "cfgfolio/planted.hpp"

namespace cfgfolio {
namespace {

enum class Role { kPlanted, kSpecialist, kFiller };

std::string PaddedId(const char* prefix, std::size_t i, std::size_t count) {
  const int width = static_cast<int>(std::to_string(count > 0 ? count - 1 : 0).size());
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%s%0*zu", prefix, std::max(width, 3), i);
  return buf;
}

const char* const kLearners[] = {"lgbm", "xgboost", "rf", "extra_tree", "catboost",
                                 "lrl1"};

}  // namespace

void PlantedShape::Validate() const {
  if (n_tasks == 0 || n_configs == 0 || n_clusters == 0) {
    throw Error(ErrorKind::kInvalidShape, "tasks, configs and clusters must be positive");
  }
  if (n_clusters > std::min(n_tasks, n_configs)) {
    throw Error(ErrorKind::kInvalidShape,
                "clusters (" + std::to_string(n_clusters) +
                    ") exceed min(tasks, configs)");
  }
  if (!std::isfinite(noise_sigma) || noise_sigma < 0.0) {
    throw Error(ErrorKind::kInvalidShape, "noise_sigma must be finite and >= 0");
  }
}

PlantedBundle GeneratePlanted(const PlantedShape& shape) {
  shape.Validate();
  std::mt19937_64 rng(shape.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  auto uniform = [&](double lo, double hi) { return lo + (hi - lo) * unit(rng); };
  auto uniform_int = [&](std::int64_t lo, std::int64_t hi) {
    return std::uniform_int_distribution<std::int64_t>(lo, hi)(rng);
  };
  auto half_normal = [&]() {
    if (shape.noise_sigma == 0.0) return 0.0;
    return std::abs(std::normal_distribution<double>(0.0, shape.noise_sigma)(rng));
  };

  const std::size_t k = shape.n_clusters;
  PlantedBundle out;

  // Every cluster gets at least one task; the rest are spread at random.
  out.task_cluster.resize(shape.n_tasks);
  for (std::size_t t = 0; t < shape.n_tasks; ++t) {
    out.task_cluster[t] = t < k ? t : static_cast<std::size_t>(uniform_int(0, k - 1));
  }
  std::shuffle(out.task_cluster.begin(), out.task_cluster.end(), rng);

  // Cluster centroids step along every metafeature; jitter stays within 5%
  // of a step so clusters are far apart relative to their spread.
  const double pct_step = k > 1 ? 0.6 / static_cast<double>(k - 1) : 0.0;
  auto& tasks = out.regret.tasks;
  for (std::size_t t = 0; t < shape.n_tasks; ++t) {
    const std::size_t c = out.task_cluster[t];
    TaskRecord task;
    task.task_id = PaddedId("task_", t, shape.n_tasks);
    task.n_instances = static_cast<std::uint64_t>(
        2000 + 8000 * static_cast<std::int64_t>(c) + uniform_int(-50, 50));
    task.n_features = static_cast<std::uint64_t>(
        10 + 30 * static_cast<std::int64_t>(c) + uniform_int(-1, 1));
    task.n_classes = 2 * (c % 3);
    const double pct = (k > 1 ? 0.2 + pct_step * static_cast<double>(c) : 0.5) +
                       uniform(-0.05, 0.05) * (k > 1 ? pct_step : 0.1);
    task.pct_numeric = std::clamp(pct, 0.0, 1.0);
    tasks.push_back(std::move(task));
  }

  // Roles: one planted config per cluster, one specialist per task while
  // configs last, fillers for the remainder. Rows are shuffled.
  std::vector<Role> roles(shape.n_configs, Role::kFiller);
  std::vector<std::size_t> role_arg(shape.n_configs, 0);
  const std::size_t n_specialists = std::min(shape.n_tasks, shape.n_configs - k);
  for (std::size_t i = 0; i < k; ++i) {
    roles[i] = Role::kPlanted;
    role_arg[i] = i;
  }
  for (std::size_t i = 0; i < n_specialists; ++i) {
    roles[k + i] = Role::kSpecialist;
    role_arg[k + i] = i;
  }
  std::vector<std::size_t> perm(shape.n_configs);
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), rng);

  out.planted_configs.assign(k, 0);
  out.specialist.assign(shape.n_tasks, std::nullopt);
  auto& configs = out.regret.configs;
  configs.resize(shape.n_configs);
  std::vector<Role> row_role(shape.n_configs);
  std::vector<std::size_t> row_arg(shape.n_configs);
  for (std::size_t i = 0; i < shape.n_configs; ++i) {
    const std::size_t row = perm[i];
    row_role[row] = roles[i];
    row_arg[row] = role_arg[i];
    if (roles[i] == Role::kPlanted) out.planted_configs[role_arg[i]] = row;
    if (roles[i] == Role::kSpecialist) out.specialist[role_arg[i]] = row;
  }
  for (std::size_t row = 0; row < shape.n_configs; ++row) {
    ConfigRecord& cfg = configs[row];
    cfg.config_id = PaddedId("cfg_", row, shape.n_configs);
    cfg.learner = kLearners[uniform_int(0, std::size(kLearners) - 1)];
    cfg.payload = Json::object();
    cfg.payload["n_estimators"] = uniform_int(4, 2000);
    cfg.payload["learning_rate"] = std::round(uniform(0.001, 1.0) * 1e6) / 1e6;
    cfg.payload["max_leaves"] = uniform_int(4, 1024);
    if (row_role[row] == Role::kSpecialist) {
      cfg.source_task_id = tasks[row_arg[row]].task_id;
    }
  }

  // Planted in-cluster noise is drawn per task so specialists can be defined
  // relative to it.
  std::vector<double> planted_noise(shape.n_tasks);
  for (auto& a : planted_noise) a = half_normal();

  Matrix values(static_cast<Eigen::Index>(shape.n_configs),
                static_cast<Eigen::Index>(shape.n_tasks));
  for (std::size_t row = 0; row < shape.n_configs; ++row) {
    for (std::size_t t = 0; t < shape.n_tasks; ++t) {
      double v = 0.0;
      switch (row_role[row]) {
        case Role::kPlanted:
          v = out.task_cluster[t] == row_arg[row] ? planted_noise[t]
                                                  : kPlantedOffClusterRegret;
          break;
        case Role::kSpecialist:
          v = row_arg[row] == t ? std::max(0.0, planted_noise[t] - kSpecialistEdge)
                                : uniform(kFillerLow, kFillerHigh);
          break;
        case Role::kFiller:
          v = uniform(kFillerLow, kFillerHigh);
          break;
      }
      values(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(t)) = v;
    }
  }
  for (Eigen::Index t = 0; t < values.cols(); ++t) {
    values.col(t).array() -= values.col(t).minCoeff();
  }
  out.regret.values = std::move(values);
  return out;
}

std::vector<EvaluationRecord> RegretToEvaluations(const RegretMatrix& regret) {
  std::vector<EvaluationRecord> records;
  records.reserve(regret.num_configs() * regret.num_tasks());
  for (std::size_t t = 0; t < regret.num_tasks(); ++t) {
    for (std::size_t c = 0; c < regret.num_configs(); ++c) {
      records.push_back({regret.tasks[t].task_id, regret.configs[c].config_id, 0,
                         regret(c, t), false});
    }
  }
  return records;
}

}  // namespace cfgfolio
