#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include <Eigen/Eigenvalues>

#include "cfgfolio/eval.hpp"

namespace cfgfolio {
namespace {

// 1-based ranks; tied values share the average of their positions.
std::vector<double> AverageRanks(std::span<const double> values) {
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  std::vector<double> ranks(values.size());
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    while (j + 1 < order.size() && values[order[j + 1]] == values[order[i]]) ++j;
    const double rank = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = rank;
    i = j + 1;
  }
  return ranks;
}

}  // namespace

double SpearmanRho(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) {
    throw Error(ErrorKind::kDimensionMismatch, "spearman inputs differ in length");
  }
  if (x.size() < 2) throw Error(ErrorKind::kTooFewTasks, "need at least 2 points");
  const auto rx = AverageRanks(x);
  const auto ry = AverageRanks(y);
  const double n = static_cast<double>(x.size());
  const double mean = (n + 1.0) / 2.0;
  double sxy = 0.0;
  double sxx = 0.0;
  double syy = 0.0;
  for (std::size_t i = 0; i < rx.size(); ++i) {
    const double dx = rx[i] - mean;
    const double dy = ry[i] - mean;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0) return 0.0;
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

double MetafeatureRankCorrelation(const Bundle& bundle, std::size_t task) {
  if (bundle.num_tasks() < 3) {
    throw Error(ErrorKind::kTooFewTasks, "rank correlation needs at least 3 tasks");
  }
  if (task >= bundle.num_tasks()) {
    throw Error(ErrorKind::kIndexOutOfRange, "task index " + std::to_string(task));
  }
  const Standardizer s = FitStandardizer(bundle.tasks);
  const MetafeatureVector origin = s.Apply(bundle.tasks[task]);

  std::vector<double> distances;
  std::vector<double> transfer;
  for (std::size_t u = 0; u < bundle.num_tasks(); ++u) {
    if (u == task) continue;
    const MetafeatureVector v = s.Apply(bundle.tasks[u]);
    double sq = 0.0;
    for (std::size_t d = 0; d < kNumMetafeatures; ++d) {
      sq += (v[d] - origin[d]) * (v[d] - origin[d]);
    }
    std::size_t best = 0;
    for (std::size_t c = 1; c < bundle.num_configs(); ++c) {
      if (bundle(c, u) < bundle(best, u)) best = c;
    }
    distances.push_back(std::sqrt(sq));
    transfer.push_back(bundle(best, task));
  }
  return SpearmanRho(distances, transfer);
}

DecisionMap ExportDecisionMap(const DecisionModel& model) {
  const std::size_t n = model.anchors.size();
  if (n < 2) throw Error(ErrorKind::kTooFewAnchors, "need at least 2 anchors");

  Eigen::Matrix<double, Eigen::Dynamic, 4> x(static_cast<Eigen::Index>(n), 4);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t d = 0; d < kNumMetafeatures; ++d) {
      x(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(d)) =
          model.anchors[i].standardized[d];
    }
  }
  const Eigen::RowVector4d centre = x.colwise().mean();
  x.rowwise() -= centre;
  const Eigen::Matrix4d cov = (x.transpose() * x) / static_cast<double>(n);

  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d> solver(cov);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorKind::kNonFinite, "covariance eigen-decomposition failed");
  }
  // Eigenvalues come back ascending.
  DecisionMap map;
  std::array<Eigen::Vector4d, 2> axes;
  for (int k = 0; k < 2; ++k) {
    Eigen::Vector4d v = solver.eigenvectors().col(3 - k);
    Eigen::Index largest = 0;
    v.cwiseAbs().maxCoeff(&largest);
    if (v(largest) < 0.0) v = -v;
    axes[static_cast<std::size_t>(k)] = v;
    map.variances[static_cast<std::size_t>(k)] = solver.eigenvalues()(3 - k);
    for (std::size_t d = 0; d < kNumMetafeatures; ++d) {
      map.components[static_cast<std::size_t>(k)][d] = v(static_cast<Eigen::Index>(d));
    }
  }
  map.rows.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Eigen::RowVector4d row = x.row(static_cast<Eigen::Index>(i));
    map.rows.push_back({model.anchors[i].task.task_id, row.dot(axes[0]),
                        row.dot(axes[1]), model.anchors[i].member_index});
  }
  return map;
}

}  // namespace cfgfolio
