// Acceptance checks 1-12. Prints one PASS/FAIL line per criterion.
//
//   acceptance          run all criteria, exit status = number of failures
//   acceptance <n>      run criterion n only, exit 0 on PASS

#include <bit>
#include <chrono>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <thread>

#include "cfgfolio/cli/commands.hpp"
#include "cfgfolio/cli/service.hpp"
#include "cfgfolio/planted.hpp"
#include "httplib.h"
#include "oracles.hpp"

using namespace cfgfolio;

namespace {

// Pinned tolerances and fixed inputs.
constexpr std::uint64_t kPlantedSeed = 7;
constexpr double kEpsilon = 0.01;
constexpr double kStepwiseBudgetSeconds = 30.0;
constexpr double kPlantedBudgetSeconds = 10.0;
constexpr double kRecoveredShare = 0.95;
constexpr double kCompactnessRatio = 4.0;
constexpr std::size_t kMinPerTaskBest = 16;
constexpr double kGapSigma = 0.02;
constexpr double kGapRatio = 5.0;
constexpr double kNoEarlyStopSlack = 2.0;
constexpr double kSingleBestFactor = 3.0;
constexpr double kStatsTolerance = 1e-12;
constexpr std::size_t kExpectedTableRows = 77;

struct Outcome {
  bool pass = false;
  std::string detail;
};

double Seconds(std::chrono::steady_clock::time_point since) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - since).count();
}

PlantedBundle Planted(double sigma) {
  PlantedShape shape;
  shape.n_tasks = 50;
  shape.n_configs = 200;
  shape.n_clusters = 4;
  shape.noise_sigma = sigma;
  shape.seed = kPlantedSeed;
  return GeneratePlanted(shape);
}

double MeanTest(const RegretReport& r) { return r.stats.mean; }

// 1
Outcome StepwiseOracle() {
  const auto start = std::chrono::steady_clock::now();
  std::mt19937_64 rng(2024);
  std::size_t runs = 0;
  std::size_t steps = 0;
  std::size_t mismatches = 0;
  for (int m = 0; m < 200; ++m) {
    const std::size_t nc = 1 + rng() % 8;
    const std::size_t nt = 1 + rng() % 10;
    const auto r = oracle::RandomRegret(rng, nc, nt, m % 2 == 0);
    const double eps = 0.025 * static_cast<double>(rng() % 5);
    for (auto metric : {PortfolioMetric::kSer, PortfolioMetric::kMean}) {
      MiningOptions opts;
      opts.epsilon = eps;
      opts.metric = metric;
      const auto p = GreedyBuild(r, opts);
      const auto o = oracle::GreedyBrute(r, eps, metric == PortfolioMetric::kSer, true, std::nullopt);
      ++runs;
      steps += o.steps.size();
      bool same = p.trace.size() == o.steps.size() && StopReasonName(p.stop_reason) == o.stop;
      for (std::size_t i = 0; same && i < o.steps.size(); ++i) {
        same = p.trace[i].config == o.steps[i].config;
      }
      if (!same) ++mismatches;
    }
  }
  const double secs = Seconds(start);
  std::ostringstream d;
  d << runs << " runs, " << steps << " steps, " << mismatches << " mismatches, " << secs << " s";
  return {mismatches == 0 && secs < kStepwiseBudgetSeconds, d.str()};
}

// 2
Outcome SerMonotonicity() {
  std::mt19937_64 rng(99);
  std::size_t violations = 0;
  for (int i = 0; i < 1000; ++i) {
    const auto r = oracle::RandomRegret(rng, 1 + rng() % 10, 1 + rng() % 10, i % 2 == 0);
    std::vector<std::size_t> members;
    for (std::size_t c = 0; c < r.num_configs(); ++c) {
      if (rng() % 2) members.push_back(c);
    }
    const double eps = 0.01 * static_cast<double>(rng() % 6);
    auto extended = members;
    extended.push_back(rng() % r.num_configs());
    if (!(Ser(r, extended, eps) <= Ser(r, members, eps))) ++violations;
  }
  return {violations == 0, "1000 triples, " + std::to_string(violations) + " violations"};
}

// 3
Outcome PlantedRecovery() {
  const auto start = std::chrono::steady_clock::now();
  const auto b = Planted(0.005);
  MiningOptions opts;
  opts.epsilon = kEpsilon;
  const auto p = GreedyBuild(b.regret, opts);
  const std::set<std::size_t> got(p.members.begin(), p.members.end());
  const std::set<std::size_t> planted(b.planted_configs.begin(), b.planted_configs.end());
  EvalOptions eval;
  eval.mining = opts;
  const auto report = LooCv(b.regret, Strategy::kOurs, eval);
  std::size_t within = 0;
  for (const auto& t : report.per_task) within += t.test_regret <= kEpsilon ? 1 : 0;
  const double share = static_cast<double>(within) / static_cast<double>(report.per_task.size());
  const double secs = Seconds(start);
  std::ostringstream d;
  d << "portfolio size " << p.members.size() << (got == planted ? " == planted set" : " != planted set")
    << ", " << within << "/" << report.per_task.size() << " tasks <= eps, " << secs << " s";
  return {got == planted && p.members.size() == planted.size() && share >= kRecoveredShare &&
              secs < kPlantedBudgetSeconds,
          d.str()};
}

// 4
Outcome Compactness() {
  const auto b = Planted(0.005);
  MiningOptions opts;
  opts.epsilon = kEpsilon;
  const auto ours = GreedyBuild(b.regret, opts).members.size();
  const auto ptb = MinePerTaskBest(b.regret).members.size();
  const double ratio = static_cast<double>(ptb) / static_cast<double>(ours);
  std::ostringstream d;
  d << "|ours| = " << ours << ", |per_task_best| = " << ptb << ", ratio " << ratio;
  return {ours == 4 && ptb >= kMinPerTaskBest && ratio >= kCompactnessRatio, d.str()};
}

// 5
Outcome OverfitGapSign() {
  const auto b = Planted(kGapSigma);
  EvalOptions opts;
  opts.mining.epsilon = kEpsilon;
  auto mean_gap = [&](Strategy s) {
    const auto report = LooCv(b.regret, s, opts);
    double sum = 0.0;
    for (const auto& t : report.per_task) sum += t.train_estimate - t.test_regret;
    return sum / static_cast<double>(report.per_task.size());
  };
  const double ptb = mean_gap(Strategy::kPerTaskBest);
  const double ours = mean_gap(Strategy::kOurs);
  std::ostringstream d;
  d << "mean(train - test): per_task_best " << ptb << ", ours " << ours;
  return {ptb < 0.0 && std::fabs(ptb) >= kGapRatio * std::fabs(ours), d.str()};
}

// 6
Outcome AblationDirection() {
  const auto b = Planted(0.005);
  EvalOptions opts;
  opts.mining.epsilon = kEpsilon;
  const double ours = MeanTest(LooCv(b.regret, Strategy::kOurs, opts));
  EvalOptions mean_opts = opts;
  mean_opts.mining.metric = PortfolioMetric::kMean;
  const double mean_abl = MeanTest(LooCv(b.regret, Strategy::kOurs, mean_opts));
  EvalOptions no_es = opts;
  no_es.mining.early_stopping = false;
  const double no_stop = MeanTest(LooCv(b.regret, Strategy::kOurs, no_es));
  const double single = MeanTest(LooCv(b.regret, Strategy::kSingleBest, opts));
  const bool within = no_stop <= kNoEarlyStopSlack * mean_abl && mean_abl <= kNoEarlyStopSlack * no_stop;
  std::ostringstream d;
  d << "ours " << ours << ", metric=mean " << mean_abl << ", no early stop " << no_stop
    << ", single_best " << single;
  return {ours <= mean_abl && within && std::max(mean_abl, no_stop) < single &&
              single >= kSingleBestFactor * ours,
          d.str()};
}

// 7
Outcome StatsOracle() {
  std::mt19937_64 rng(7);
  std::size_t bad = 0;
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    std::vector<double> v(1 + rng() % 200);
    std::uniform_real_distribution<double> u(-1.0, 3.0);
    for (auto& x : v) x = i % 5 == 0 ? std::round(u(rng)) : u(rng);
    const Stats s = RegretStats(v);
    const std::pair<double, double> pairs[] = {{s.p25, 0.25}, {s.p50, 0.50}, {s.p75, 0.75},
                                               {s.p95, 0.95}, {s.p99, 0.99}};
    for (const auto& [got, q] : pairs) {
      const double expect = oracle::InterpPercentile(v, q);
      const double err = std::fabs(got - expect);
      worst = std::max(worst, err);
      if (err > kStatsTolerance * std::max(1.0, std::fabs(expect))) ++bad;
    }
    const bool monotone = s.min <= s.p25 && s.p25 <= s.p50 && s.p50 <= s.p75 &&
                          s.p75 <= s.p95 && s.p95 <= s.p99 && s.p99 <= s.max;
    if (!monotone) ++bad;
  }
  std::ostringstream d;
  d << "100 inputs, " << bad << " failures, max |error| " << worst;
  return {bad == 0, d.str()};
}

// 8
Outcome DecisionInvariances() {
  std::mt19937_64 rng(8);
  std::size_t bad = 0;
  std::size_t queries = 0;
  for (int m = 0; m < 50; ++m) {
    const std::size_t nc = 3 + rng() % 6;
    auto r = oracle::RandomRegret(rng, nc, 5 + rng() % 20, false);
    Portfolio p;
    for (std::size_t c = 0; c < nc; ++c) {
      if (rng() % 2 || p.members.empty()) p.members.push_back(c);
    }
    const auto model = FitDecision(p, r);
    auto scaled = r;
    for (auto& t : scaled.tasks) t.n_instances *= 1000;
    const auto scaled_model = FitDecision(p, scaled);
    for (int i = 0; i < 20; ++i) {
      auto q = oracle::RandomTask(rng, "q");
      const auto a = Recommend(model, q);
      q.n_instances *= 1000;
      const auto b = Recommend(scaled_model, q);
      ++queries;
      if (a.member_index != b.member_index || a.neighbor_task_id != b.neighbor_task_id) ++bad;
    }
    for (const auto& anchor : model.anchors) {
      const auto rec = Recommend(model, anchor.task);
      ++queries;
      if (rec.member_index != anchor.member_index || rec.neighbor_task_id != anchor.task.task_id) ++bad;
    }
  }
  return {bad == 0, std::to_string(queries) + " queries over 50 models, " + std::to_string(bad) +
                        " mismatches"};
}

// 9
Outcome PaperTable() {
  const auto tasks =
      ReadMetafeatures(std::filesystem::path(CFGFOLIO_DATA_DIR) / "openml_metafeatures.csv");
  std::map<std::string, TaskRecord> by_id;
  for (const auto& t : tasks) by_id[t.task_id] = t;
  const bool australian = by_id.count("Australian") &&
                          by_id["Australian"] == TaskRecord{"Australian", 621, 14, 2, 0.428571429};
  const bool poker = by_id.count("poker") && by_id["poker"] == TaskRecord{"poker", 922509, 10, 0, 1.0};
  std::ostringstream d;
  d << tasks.size() << " records (expected " << kExpectedTableRows << "), Australian "
    << (australian ? "exact" : "WRONG") << ", poker " << (poker ? "exact" : "WRONG");
  return {tasks.size() == kExpectedTableRows && australian && poker, d.str()};
}

// 10
Outcome ServiceEquivalence() {
  const auto dir = oracle::TempDir("acceptance_service");
  const auto b = Planted(0.005);
  const auto model = FitDecision(MinePerTaskBest(b.regret), b.regret);
  const auto model_path = dir / "p.json";
  WriteModel(model, model_path);

  cli::RecommendationServer server(ReadModel(model_path));
  const int port = server.Bind("127.0.0.1", 0);
  if (port <= 0) return {false, "could not bind"};
  std::thread thread([&] { server.ListenAfterBind(); });
  server.WaitUntilReady();
  httplib::Client client("127.0.0.1", port);

  std::mt19937_64 rng(10);
  std::size_t mismatches = 0;
  for (int i = 0; i < 100; ++i) {
    const auto q = oracle::RandomTask(rng, "q");
    Json body;
    body["n_instances"] = q.n_instances;
    body["n_features"] = q.n_features;
    body["n_classes"] = q.n_classes;
    body["pct_numeric"] = q.pct_numeric;
    auto res = client.Post("/recommend", body.dump(), "application/json");
    cli::RecommendArgs args;
    args.model = model_path;
    args.n_instances = q.n_instances;
    args.n_features = q.n_features;
    args.n_classes = q.n_classes;
    args.pct_numeric = q.pct_numeric;
    std::ostringstream out;
    std::ostringstream err;
    const int code = cli::CmdRecommend(args, out, err);
    if (!res || res->status != 200 || code != 0 || res->body != out.str()) ++mismatches;
  }
  const std::pair<const char*, int> invalid[] = {
      {R"({"n_instances":1,"n_features":1,"n_classes":2})", 400},
      {R"({"n_instances":1,"n_features":1,"n_classes":2,"pct_numeric":0.5,"extra":0})", 400},
      {R"({"n_instances":"1","n_features":1,"n_classes":2,"pct_numeric":0.5})", 400},
      {R"(not json)", 400},
      {R"({"n_instances":1,"n_features":1,"n_classes":2,"pct_numeric":1.01})", 422},
      {R"({"n_instances":1,"n_features":1,"n_classes":2,"pct_numeric":-0.5})", 422},
  };
  std::size_t wrong_status = 0;
  for (const auto& [text, status] : invalid) {
    auto res = client.Post("/recommend", text, "application/json");
    if (!res || res->status != status) ++wrong_status;
  }
  server.Stop();
  thread.join();
  std::filesystem::remove_all(dir);
  std::ostringstream d;
  d << "100 queries, " << mismatches << " body mismatches; " << std::size(invalid)
    << " invalid bodies, " << wrong_status << " wrong statuses";
  return {mismatches == 0 && wrong_status == 0, d.str()};
}

// 11
Outcome KShotMonotone() {
  std::mt19937_64 rng(11);
  std::size_t violations = 0;
  for (int i = 0; i < 100; ++i) {
    const std::size_t nc = 2 + rng() % 15;
    const auto r = oracle::RandomRegret(rng, nc, 1 + rng() % 10, i % 2 == 0);
    const auto p = MineGreedyMean(r, 1 + rng() % nc);
    const std::size_t t = rng() % r.num_tasks();
    double prev = std::numeric_limits<double>::infinity();
    for (std::size_t k = 1; k <= p.members.size() + 1; ++k) {
      const double v = SimulateKShot(r, p, k, t);
      if (v > prev) ++violations;
      prev = v;
    }
  }
  return {violations == 0, "100 pairs, " + std::to_string(violations) + " violations"};
}

// 12
Outcome RoundTrips() {
  const auto dir = oracle::TempDir("acceptance_io");
  std::mt19937_64 rng(12);
  auto fuzz = [&] {
    for (;;) {
      const double d = std::bit_cast<double>(rng());
      if (std::isfinite(d)) return d;
    }
  };
  std::size_t failures = 0;
  std::size_t cases = 0;
  for (int trial = 0; trial < 25; ++trial) {
    const std::size_t nc = 2 + rng() % 8;
    auto r = oracle::RandomRegret(rng, nc, 2 + rng() % 12, false);
    for (auto& c : r.configs) {
      c.payload = Json{{"lr", fuzz()}, {"depth", static_cast<int>(rng() % 20)}, {"name", "a,\"b\""}};
      if (rng() % 2) c.source_task_id = "src";
    }
    for (auto& t : r.tasks) t.n_instances = rng();
    Portfolio p;
    p.members = {0, 1};
    const auto model = FitDecision(p, r);
    WriteModel(model, dir / "p.json");
    failures += ReadModel(dir / "p.json") == model ? 0 : 1;

    std::vector<EvaluationRecord> evals;
    for (int i = 0; i < 30; ++i) {
      const bool failed = rng() % 8 == 0;
      evals.push_back({"t,\"" + std::to_string(i), "c" + std::to_string(i % 4), rng() % 5,
                       failed ? 0.0 : fuzz(), failed});
    }
    WriteEvaluations(dir / "e.csv", evals);
    failures += ReadEvaluations(dir / "e.csv") == evals ? 0 : 1;
    WriteMetafeatures(dir / "m.csv", r.tasks);
    failures += ReadMetafeatures(dir / "m.csv") == r.tasks ? 0 : 1;
    WriteConfigs(dir / "c.json", r.configs);
    failures += ReadConfigs(dir / "c.json") == r.configs ? 0 : 1;

    std::vector<CurvePoint> curve;
    std::vector<MapRow> map;
    std::vector<CorrelationRow> corr;
    for (int i = 0; i < 12; ++i) {
      curve.push_back({rng() % 500, rng() % 500});
      map.push_back({"t" + std::to_string(i), fuzz(), fuzz(), rng() % 6});
      corr.push_back({"t" + std::to_string(i), fuzz()});
    }
    WriteCurve(dir / "curve.csv", curve);
    WriteDecisionMap(dir / "map.csv", map);
    WriteCorrelation(dir / "corr.csv", corr);
    failures += ReadCurve(dir / "curve.csv") == curve ? 0 : 1;
    failures += ReadDecisionMap(dir / "map.csv") == map ? 0 : 1;
    failures += ReadCorrelation(dir / "corr.csv") == corr ? 0 : 1;

    EvalOptions opts;
    opts.kshot = 2;
    const auto report = LooCv(r, Strategy::kGreedyMean, opts);
    WriteReport(report, dir / "report.json");
    failures += ReadReport(dir / "report.json") == report ? 0 : 1;
    cases += 9;
  }
  std::filesystem::remove_all(dir);
  return {failures == 0, std::to_string(cases) + " round-trips, " + std::to_string(failures) + " failures"};
}

struct Criterion {
  int id;
  const char* name;
  std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> criteria = {
      {1, "stepwise oracle equivalence", StepwiseOracle},
      {2, "SER monotonicity fuzz", SerMonotonicity},
      {3, "planted recovery", PlantedRecovery},
      {4, "compactness vs per-task-best", Compactness},
      {5, "overfit-gap sign", OverfitGapSign},
      {6, "ablation direction", AblationDirection},
      {7, "statistics oracle", StatsOracle},
      {8, "decision-function invariances", DecisionInvariances},
      {9, "appendix table ingestion", PaperTable},
      {10, "service equivalence", ServiceEquivalence},
      {11, "k-shot monotonicity", KShotMonotone},
      {12, "round-trip fidelity", RoundTrips},
  };
  int only = 0;
  if (argc > 1) only = std::atoi(argv[1]);
  int failures = 0;
  for (const auto& c : criteria) {
    if (only != 0 && c.id != only) continue;
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::cout << (o.pass ? "PASS" : "FAIL") << "  " << c.id << ". " << c.name << ": " << o.detail
              << std::endl;
    if (!o.pass) ++failures;
  }
  return failures;
}
