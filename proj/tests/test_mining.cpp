#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "cfgfolio/mining.hpp"
#include "oracles.hpp"

using namespace cfgfolio;

namespace {

ErrorKind KindOf(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("no cfgfolio::Error thrown");
  return ErrorKind::kIo;
}

std::vector<std::size_t> Members(const oracle::OracleRun& run) {
  std::vector<std::size_t> m;
  for (const auto& s : run.steps) m.push_back(s.config);
  return m;
}

}  // namespace

TEST_CASE("SER and mean regret on small fixtures") {
  const auto r = oracle::MakeRegret({{0.0, 0.5, 0.02}, {0.3, 0.0, 0.4}, {0.2, 0.2, 0.2}});
  const std::vector<std::size_t> both{0, 1};
  CHECK(Ser(r, both, 0.01) == doctest::Approx(0.01).epsilon(1e-15));
  CHECK(Ser(r, {}, 0.01) == kInfiniteSer);
  CHECK(MeanRegret(r, both) == doctest::Approx(0.02 / 3.0));
  const std::vector<std::size_t> all{0, 1, 2};
  CHECK(Ser(r, all, 0.02) == 0.0);
  CHECK(KindOf([&] { MeanRegret(r, {}); }) == ErrorKind::kEmptyPortfolio);
  const std::vector<std::size_t> bad{7};
  CHECK(KindOf([&] { Ser(r, bad, 0.0); }) == ErrorKind::kIndexOutOfRange);
}

TEST_CASE("SER matches the per-task minimum oracle") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 300; ++trial) {
    const auto r = oracle::RandomRegret(rng, 5, 4, trial % 2 == 0);
    std::vector<std::size_t> s;
    for (std::size_t c = 0; c < 5; ++c) {
      if (rng() % 2) s.push_back(c);
    }
    const double eps = 0.05 * static_cast<double>(rng() % 4);
    CHECK(Ser(r, s, eps) == oracle::SerBrute(r, s, eps));
    if (!s.empty()) CHECK(MeanRegret(r, s) == oracle::MeanBrute(r, s));
  }
}

TEST_CASE("greedy build follows the brute-force enumeration step by step") {
  std::mt19937_64 rng(101);
  for (int trial = 0; trial < 400; ++trial) {
    const std::size_t nc = 1 + rng() % 8;
    const std::size_t nt = 1 + rng() % 10;
    const auto r = oracle::RandomRegret(rng, nc, nt, trial % 2 == 0);
    MiningOptions opts;
    opts.epsilon = 0.02 * static_cast<double>(rng() % 4);
    opts.metric = rng() % 2 ? PortfolioMetric::kSer : PortfolioMetric::kMean;
    opts.early_stopping = rng() % 3 != 0;
    if (rng() % 4 == 0) opts.max_size = 1 + rng() % 3;
    const auto p = GreedyBuild(r, opts);
    const auto o = oracle::GreedyBrute(r, opts.epsilon, opts.metric == PortfolioMetric::kSer,
                                       opts.early_stopping, opts.max_size);
    CHECK(p.members == Members(o));
    CHECK(StopReasonName(p.stop_reason) == o.stop);
    REQUIRE(p.trace.size() == o.steps.size());
    for (std::size_t i = 0; i < o.steps.size(); ++i) {
      CHECK(p.trace[i].config == o.steps[i].config);
      CHECK(p.trace[i].score == o.steps[i].score);
      std::vector<std::size_t> prefix(p.members.begin(), p.members.begin() + static_cast<long>(i) + 1);
      CHECK(p.trace[i].ser == oracle::SerBrute(r, prefix, opts.epsilon));
      CHECK(p.trace[i].mean_regret == oracle::MeanBrute(r, prefix));
    }
    CHECK(p.members.size() <= nc);
    if (opts.max_size) CHECK(p.members.size() <= *opts.max_size);
  }
}

TEST_CASE("greedy build stop reasons") {
  MiningOptions opts;
  opts.epsilon = 0.01;
  SUBCASE("target reached by a dominating config") {
    const auto r = oracle::MakeRegret({{0.3, 0.3}, {0.0, 0.0}, {0.1, 0.0}});
    const auto p = GreedyBuild(r, opts);
    CHECK(p.members == std::vector<std::size_t>{1});
    CHECK(p.stop_reason == StopReason::kTargetReached);
    CHECK(p.trace.front().ser == 0.0);
  }
  SUBCASE("early stop when the best extension improves too little") {
    // After c0, adding c1 lowers SER from 0.59 to 0.588, above (1 - 0.005) * 0.59.
    const auto r = oracle::MakeRegret({{0.01, 0.6}, {0.6, 0.598}});
    const auto p = GreedyBuild(r, opts);
    CHECK(p.members == std::vector<std::size_t>{0});
    CHECK(p.stop_reason == StopReason::kEarlyStopped);
    opts.early_stopping = false;
    const auto q = GreedyBuild(r, opts);
    CHECK(q.members == std::vector<std::size_t>{0, 1});
    CHECK(q.stop_reason == StopReason::kExhausted);
  }
  SUBCASE("size cap") {
    const auto r = oracle::MakeRegret({{0.0, 0.5, 0.5}, {0.5, 0.0, 0.5}, {0.5, 0.5, 0.0}});
    opts.max_size = 2;
    const auto p = GreedyBuild(r, opts);
    CHECK(p.members.size() == 2);
    CHECK(p.stop_reason == StopReason::kSizeCap);
  }
  SUBCASE("tie on SER broken by mean regret then index") {
    // c0 and c1 both cover below eps; c1 has the lower mean.
    const auto r = oracle::MakeRegret({{0.005, 0.008}, {0.0, 0.001}, {0.0, 0.001}});
    const auto p = GreedyBuild(r, opts);
    CHECK(p.members == std::vector<std::size_t>{1});
  }
  SUBCASE("option validation") {
    const auto r = oracle::MakeRegret({{0.1}});
    opts.epsilon = -1.0;
    CHECK(KindOf([&] { GreedyBuild(r, opts); }) == ErrorKind::kInvalidOption);
    opts.epsilon = 0.01;
    opts.max_size = 0;
    CHECK(KindOf([&] { GreedyBuild(r, opts); }) == ErrorKind::kInvalidOption);
    opts.max_size.reset();
    opts.metric = PortfolioMetric::kPerTaskBest;
    CHECK(KindOf([&] { GreedyBuild(r, opts); }) == ErrorKind::kInvalidOption);
    CHECK(KindOf([&] { GreedyBuild(RegretMatrix{}, MiningOptions{}); }) == ErrorKind::kEmptyMatrix);
  }
}

TEST_CASE("greedy build is deterministic") {
  std::mt19937_64 rng(8);
  const auto r = oracle::RandomRegret(rng, 30, 20, false);
  CHECK(GreedyBuild(r, {}) == GreedyBuild(r, {}));
}

TEST_CASE("per-task-best miner matches column argmins") {
  const auto shared = oracle::MakeRegret({{0.5, 0.5}, {0.0, 0.0}});
  CHECK(MinePerTaskBest(shared).members == std::vector<std::size_t>{1});
  const auto distinct = oracle::MakeRegret({{0.0, 0.5}, {0.5, 0.0}});
  CHECK(MinePerTaskBest(distinct).members == std::vector<std::size_t>{0, 1});

  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 200; ++trial) {
    const auto r = oracle::RandomRegret(rng, 1 + rng() % 8, 1 + rng() % 10, true);
    std::vector<std::size_t> expect;
    for (std::size_t t = 0; t < r.num_tasks(); ++t) {
      const auto c = oracle::ColumnArgmin(r, t);
      if (std::find(expect.begin(), expect.end(), c) == expect.end()) expect.push_back(c);
    }
    const auto p = MinePerTaskBest(r);
    CHECK(p.members == expect);
    CHECK(p.trace.empty());
    CHECK(MetricName(p.metric) == "per_task_best");
  }
}

TEST_CASE("greedy-mean miner grows by mean regret to the requested size") {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t nc = 1 + rng() % 8;
    const auto r = oracle::RandomRegret(rng, nc, 1 + rng() % 10, trial % 2 == 0);
    const std::size_t size = 1 + rng() % nc;
    const auto p = MineGreedyMean(r, size);
    std::vector<std::size_t> expect;
    while (expect.size() < size) {
      // Scores within relative 1e-12 of the minimum tie; lowest index wins.
      std::vector<double> score(nc, std::numeric_limits<double>::infinity());
      double lo = std::numeric_limits<double>::infinity();
      for (std::size_t c = 0; c < nc; ++c) {
        if (std::find(expect.begin(), expect.end(), c) != expect.end()) continue;
        auto ext = expect;
        ext.push_back(c);
        score[c] = oracle::MeanBrute(r, ext);
        lo = std::min(lo, score[c]);
      }
      std::size_t pick = 0;
      while (!(std::isfinite(score[pick]) && oracle::RelTie(score[pick], lo, 1e-12))) ++pick;
      expect.push_back(pick);
    }
    CHECK(p.members == expect);
    CHECK(p.members.size() == size);
  }
  const auto r = oracle::MakeRegret({{0.1}, {0.2}});
  CHECK(KindOf([&] { MineGreedyMean(r, 3); }) == ErrorKind::kSizeTooLarge);
  CHECK(KindOf([&] { MineGreedyMean(r, 0); }) == ErrorKind::kInvalidOption);
}

TEST_CASE("best single config") {
  const auto r = oracle::MakeRegret({{0.0, 0.9}, {0.3, 0.3}, {0.3, 0.3}});
  CHECK(BestSingle(r, SingleCriterion::kMean, 0.01) == 1);
  std::mt19937_64 rng(14);
  for (int trial = 0; trial < 200; ++trial) {
    const auto m = oracle::RandomRegret(rng, 1 + rng() % 8, 1 + rng() % 10, true);
    double lo = std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < m.num_configs(); ++c) lo = std::min(lo, oracle::MeanBrute(m, {c}));
    std::size_t best = 0;
    while (!oracle::RelTie(oracle::MeanBrute(m, {best}), lo, 1e-12)) ++best;
    CHECK(BestSingle(m, SingleCriterion::kMean, 0.01) == best);
  }
}

TEST_CASE("SER never increases when a config is added") {
  std::mt19937_64 rng(15);
  for (int trial = 0; trial < 1000; ++trial) {
    const auto r = oracle::RandomRegret(rng, 2 + rng() % 7, 1 + rng() % 10, trial % 3 == 0);
    std::vector<std::size_t> s;
    for (std::size_t c = 0; c < r.num_configs(); ++c) {
      if (rng() % 2) s.push_back(c);
    }
    const double eps = 0.01 * static_cast<double>(rng() % 5);
    auto ext = s;
    ext.push_back(rng() % r.num_configs());
    CHECK(Ser(r, ext, eps) <= Ser(r, s, eps));
  }
}

TEST_CASE("metric and stop reason names") {
  CHECK(ParseMetric("ser") == PortfolioMetric::kSer);
  CHECK(ParseMetric("mean") == PortfolioMetric::kMean);
  CHECK(KindOf([] { ParseMetric("median"); }) == ErrorKind::kInvalidOption);
  CHECK(StopReasonName(StopReason::kEarlyStopped) == "early_stopped");
  CHECK(WithinTolerance(1.0, 1.0 + 1e-13, 1e-12));
  CHECK_FALSE(WithinTolerance(1.0, 1.0 + 1e-9, 1e-12));
}
