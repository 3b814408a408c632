#pragma once

// Synthetic regret matrices with a known cluster structure.
//
// Tasks are split into clusters with well separated metafeature centroids.
// Each cluster has one planted config: regret |N(0, sigma)| on its own
// cluster (capped by the specialist edge below) and 0.5 elsewhere. Every
// task also gets a specialist config, standing in for the configuration its
// own AutoML run found: it beats the planted config on that single task by
// up to kSpecialistEdge and behaves like a filler everywhere else. Fillers
// are uniform in [0.2, 0.8]. Columns are finally shifted so their minimum is
// exactly 0.

#include <cstdint>
#include <vector>

#include "cfgfolio/core.hpp"

namespace cfgfolio {

inline constexpr double kPlantedOffClusterRegret = 0.5;
inline constexpr double kFillerLow = 0.2;
inline constexpr double kFillerHigh = 0.8;
inline constexpr double kSpecialistEdge = 0.005;

struct PlantedShape {
  std::size_t n_tasks = 50;
  std::size_t n_configs = 200;
  std::size_t n_clusters = 4;
  double noise_sigma = 0.005;
  std::uint64_t seed = 0;

  void Validate() const;  // throws kInvalidShape
};

struct PlantedBundle {
  RegretMatrix regret;
  std::vector<std::size_t> planted_configs;  // config row per cluster
  std::vector<std::size_t> task_cluster;     // cluster per task column
  std::vector<std::optional<std::size_t>> specialist;  // config row per task
};

PlantedBundle GeneratePlanted(const PlantedShape& shape);

// One fold-0 record per cell with loss equal to the regret, so that
// re-ingesting with the column-min baseline reproduces the matrix.
std::vector<EvaluationRecord> RegretToEvaluations(const RegretMatrix& regret);

}  // namespace cfgfolio
