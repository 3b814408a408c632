#include <algorithm>
#include <cmath>
#include <vector>

#include "cfgfolio/eval.hpp"

namespace cfgfolio {
namespace {

double Percentile(const std::vector<double>& sorted, double q) {
  const double rank = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(rank));
  const auto hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = rank - static_cast<double>(lo);
  const double v = sorted[lo] + frac * (sorted[hi] - sorted[lo]);
  return std::clamp(v, sorted[lo], sorted[hi]);
}

}  // namespace

Stats RegretStats(std::span<const double> values) {
  if (values.empty()) throw Error(ErrorKind::kEmptyList, "no values");
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());

  Stats s;
  s.n = sorted.size();
  double sum = 0.0;
  for (double v : values) sum += v;
  s.mean = sum / static_cast<double>(s.n);
  double ss = 0.0;
  for (double v : values) ss += (v - s.mean) * (v - s.mean);
  s.std = std::sqrt(ss / static_cast<double>(s.n));
  s.min = sorted.front();
  s.max = sorted.back();
  s.p25 = Percentile(sorted, 0.25);
  s.p50 = Percentile(sorted, 0.50);
  s.p75 = Percentile(sorted, 0.75);
  s.p95 = Percentile(sorted, 0.95);
  s.p99 = Percentile(sorted, 0.99);
  return s;
}

}  // namespace cfgfolio
