#include "cfgfolio/cli/commands.hpp"

#include <algorithm>
#include <cstdlib>
#include <iomanip>
#include <ostream>
#include <random>
#include <sstream>

#include "cfgfolio/cli/service.hpp"
#include "cfgfolio/csv.hpp"
#include "cfgfolio/planted.hpp"

namespace cfgfolio::cli {
namespace {

int Fail(std::ostream& err, int code, const std::string& message) {
  err << "error: " << message << '\n';
  return code;
}

RegretMatrix LoadBundle(const BundlePaths& paths) {
  return LoadRegretMatrix(paths.evaluations, paths.metafeatures, paths.configs,
                          paths.missing_policy);
}

// Usage-level checks on mining flags; throws Error(kInvalidOption).
Strategy CheckFlags(const MiningFlags& flags) {
  if (!(flags.epsilon >= 0.0) || !std::isfinite(flags.epsilon)) {
    throw Error(ErrorKind::kInvalidOption, "--epsilon must be finite and >= 0");
  }
  const PortfolioMetric metric = ParseMetric(flags.metric);
  if (metric != PortfolioMetric::kSer && metric != PortfolioMetric::kMean) {
    throw Error(ErrorKind::kInvalidOption, "--metric must be ser or mean");
  }
  if (flags.size == 0) throw Error(ErrorKind::kInvalidOption, "--size must be positive");
  return ParseStrategy(flags.strategy);
}

// Splits usage errors (bad flag values) from runtime errors.
template <typename Body>
int Guarded(std::ostream& err, Body&& body) {
  try {
    return body();
  } catch (const Error& e) {
    const bool usage = e.kind() == ErrorKind::kInvalidOption;
    return Fail(err, usage ? kExitUsage : kExitRuntime, e.what());
  } catch (const std::exception& e) {
    return Fail(err, kExitRuntime, e.what());
  }
}

std::string Fixed4(double v) {
  std::ostringstream s;
  s << std::fixed << std::setprecision(4) << v;
  return s.str();
}

void PrintStatsTable(std::ostream& out, const std::vector<std::string>& headers,
                     const std::vector<Stats>& columns) {
  constexpr int kLabel = 10;
  constexpr int kCell = 16;
  out << std::left << std::setw(kLabel) << "stat";
  for (const auto& h : headers) out << std::right << std::setw(kCell) << h;
  out << '\n';
  const std::pair<const char*, double Stats::*> rows[] = {
      {"mean", &Stats::mean}, {"std", &Stats::std},  {"p25", &Stats::p25},
      {"p50", &Stats::p50},   {"p75", &Stats::p75}, {"p95", &Stats::p95},
      {"p99", &Stats::p99}};
  for (const auto& [label, field] : rows) {
    out << std::left << std::setw(kLabel) << label;
    for (const auto& s : columns) out << std::right << std::setw(kCell) << Fixed4(s.*field);
    out << '\n';
  }
  out << std::left << std::setw(kLabel) << "n";
  for (const auto& s : columns) out << std::right << std::setw(kCell) << s.n;
  out << '\n';
}

// "n_instances,n_features,n_classes,pct" with an optional leading id.
TaskRecord ParseRow(const std::string& text) {
  std::vector<std::string> fields = csv::SplitLine(text, 1);
  if (fields.size() == 5) fields.erase(fields.begin());
  if (fields.size() != 4) {
    throw Error(ErrorKind::kInvalidOption,
                "--row needs 4 metafeature fields (optionally preceded by a task id)");
  }
  TaskRecord task;
  task.task_id = "query";
  try {
    task.n_instances = csv::ParseCount(fields[0], 1);
    task.n_features = csv::ParseCount(fields[1], 1);
    task.n_classes = csv::ParseCount(fields[2], 1);
    task.pct_numeric = csv::ParseDouble(fields[3], 1);
  } catch (const Error& e) {
    throw Error(ErrorKind::kInvalidOption, std::string("--row: ") + e.what());
  }
  return task;
}

}  // namespace

EvalOptions ToEvalOptions(const MiningFlags& flags) {
  EvalOptions opts;
  opts.mining.epsilon = flags.epsilon;
  opts.mining.metric = ParseMetric(flags.metric);
  opts.mining.early_stopping = flags.early_stopping;
  opts.mining.max_size = flags.max_size;
  opts.greedy_mean_size = flags.size;
  return opts;
}

DecisionModel MineModel(const RegretMatrix& regret, const MiningFlags& flags,
                        Portfolio* portfolio_out) {
  const Strategy strategy = CheckFlags(flags);
  Portfolio portfolio = MinePortfolio(regret, strategy, ToEvalOptions(flags));
  DecisionModel model = FitDecision(portfolio, regret);
  if (portfolio_out) *portfolio_out = std::move(portfolio);
  return model;
}

int CmdMine(const MineArgs& args, std::ostream& out, std::ostream& err) {
  return Guarded(err, [&] {
    CheckFlags(args.mining);
    const RegretMatrix regret = LoadBundle(args.bundle);
    Portfolio portfolio;
    const DecisionModel model = MineModel(regret, args.mining, &portfolio);
    WriteModel(model, args.out);
    out << "members:";
    for (std::size_t c : portfolio.members) out << ' ' << regret.configs[c].config_id;
    out << '\n';
    out << "size: " << portfolio.members.size() << '\n';
    out << "final_ser: " << FormatDouble(Ser(regret, portfolio.members, portfolio.epsilon))
        << '\n';
    out << "stop_reason: " << StopReasonName(portfolio.stop_reason) << '\n';
    out << "model_members: " << model.portfolio.size() << '\n';
    out << "wrote: " << args.out.string() << '\n';
    return kExitOk;
  });
}

int CmdRecommend(const RecommendArgs& args, std::ostream& out, std::ostream& err) {
  TaskRecord query;
  query.task_id = "query";
  try {
    if (args.row) {
      if (args.n_instances || args.n_features || args.n_classes || args.pct_numeric) {
        return Fail(err, kExitUsage, "--row cannot be combined with metafeature flags");
      }
      query = ParseRow(*args.row);
    } else {
      if (!args.n_instances || !args.n_features || !args.n_classes || !args.pct_numeric) {
        return Fail(err, kExitUsage,
                    "need --n-instances, --n-features, --n-classes and --pct-numeric "
                    "(or --row)");
      }
      query.n_instances = *args.n_instances;
      query.n_features = *args.n_features;
      query.n_classes = *args.n_classes;
      query.pct_numeric = *args.pct_numeric;
    }
    ValidateTask(query);
  } catch (const std::exception& e) {
    return Fail(err, kExitUsage, e.what());
  }
  return Guarded(err, [&] {
    const DecisionModel model = ReadModel(args.model);
    out << RecommendationBody(Recommend(model, query));
    return kExitOk;
  });
}

int CmdEvaluate(const EvaluateArgs& args, std::ostream& out, std::ostream& err) {
  return Guarded(err, [&] {
    const Strategy strategy = CheckFlags(args.mining);
    if (args.k && *args.k == 0) {
      throw Error(ErrorKind::kInvalidOption, "--k must be positive");
    }
    const RegretMatrix regret = LoadBundle(args.bundle);
    EvalOptions opts = ToEvalOptions(args.mining);
    opts.kshot = args.k;
    const RegretReport report = LooCv(regret, strategy, opts);
    WriteReport(report, args.out);

    std::vector<std::string> headers{report.strategy};
    std::vector<Stats> columns{report.stats};
    if (report.kshot_stats) {
      headers.push_back("k-shot@" + std::to_string(*report.kshot));
      columns.push_back(*report.kshot_stats);
    }
    PrintStatsTable(out, headers, columns);
    return kExitOk;
  });
}

int CmdCurve(const CurveArgs& args, std::ostream& out, std::ostream& err) {
  return Guarded(err, [&] {
    const Strategy strategy = CheckFlags(args.mining);
    const RegretMatrix regret = LoadBundle(args.bundle);
    std::vector<std::string> order;
    for (const auto& t : regret.tasks) order.push_back(t.task_id);
    if (args.order_seed) {
      std::mt19937_64 rng(*args.order_seed);
      std::shuffle(order.begin(), order.end(), rng);
    }
    if (args.limit) {
      if (*args.limit == 0) throw Error(ErrorKind::kInvalidOption, "--limit must be positive");
      order.resize(std::min(order.size(), *args.limit));
    }
    const auto curve = ScalabilityCurve(regret, order, strategy, ToEvalOptions(args.mining));
    WriteCurve(args.out, curve);
    out << "n_tasks,portfolio_size\n";
    for (const auto& p : curve) out << p.n_tasks << ',' << p.portfolio_size << '\n';
    return kExitOk;
  });
}

int CmdMap(const MapArgs& args, std::ostream& out, std::ostream& err) {
  return Guarded(err, [&] {
    const DecisionMap map = ExportDecisionMap(ReadModel(args.model));
    WriteDecisionMap(args.out, map.rows);
    out << "explained variance: " << FormatDouble(map.variances[0]) << ' '
        << FormatDouble(map.variances[1]) << '\n';
    out << "rows: " << map.rows.size() << '\n';
    return kExitOk;
  });
}

int CmdCorrelate(const CorrelateArgs& args, std::ostream& out, std::ostream& err) {
  return Guarded(err, [&] {
    const RegretMatrix regret = LoadBundle(args.bundle);
    std::vector<CorrelationRow> rows;
    std::vector<double> rhos;
    for (std::size_t t = 0; t < regret.num_tasks(); ++t) {
      rows.push_back({regret.tasks[t].task_id, MetafeatureRankCorrelation(regret, t)});
      rhos.push_back(rows.back().rho);
    }
    WriteCorrelation(args.out, rows);
    const Stats s = RegretStats(rhos);
    out << "tasks: " << s.n << '\n' << "mean rho: " << Fixed4(s.mean) << '\n';
    return kExitOk;
  });
}

std::filesystem::path GeneratedEvaluations(const std::string& prefix) {
  return prefix + "evaluations.csv";
}
std::filesystem::path GeneratedMetafeatures(const std::string& prefix) {
  return prefix + "metafeatures.csv";
}
std::filesystem::path GeneratedConfigs(const std::string& prefix) {
  return prefix + "configs.json";
}

int CmdGenerate(const GenerateArgs& args, std::ostream& out, std::ostream& err) {
  PlantedShape shape;
  shape.n_tasks = args.tasks;
  shape.n_configs = args.configs;
  shape.n_clusters = args.clusters;
  shape.noise_sigma = args.noise;
  shape.seed = args.seed;
  try {
    shape.Validate();
  } catch (const std::exception& e) {
    return Fail(err, kExitUsage, e.what());
  }
  return Guarded(err, [&] {
    const PlantedBundle bundle = GeneratePlanted(shape);
    const auto evals = RegretToEvaluations(bundle.regret);
    WriteEvaluations(GeneratedEvaluations(args.out_prefix), evals);
    WriteMetafeatures(GeneratedMetafeatures(args.out_prefix), bundle.regret.tasks);
    WriteConfigs(GeneratedConfigs(args.out_prefix), bundle.regret.configs);
    out << "planted:";
    for (std::size_t c : bundle.planted_configs) {
      out << ' ' << bundle.regret.configs[c].config_id;
    }
    out << '\n';
    out << "wrote: " << GeneratedEvaluations(args.out_prefix).string() << ' '
        << GeneratedMetafeatures(args.out_prefix).string() << ' '
        << GeneratedConfigs(args.out_prefix).string() << '\n';
    return kExitOk;
  });
}

int CmdServe(const ServeArgs& args, std::ostream& out, std::ostream& err) {
  int port = args.port;
  if (const char* env = std::getenv("PORT"); env && *env) {
    try {
      port = static_cast<int>(csv::ParseInteger(env, 0));
    } catch (const std::exception&) {
      return Fail(err, kExitUsage, std::string("PORT is not an integer: ") + env);
    }
  }
  if (port < 0 || port > 65535) return Fail(err, kExitUsage, "port out of range");
  return Guarded(err, [&] {
    RecommendationServer server(ReadModel(args.model));
    const int bound = server.Bind(args.host, port);
    if (bound < 0) {
      return Fail(err, kExitRuntime,
                  "cannot bind " + args.host + ":" + std::to_string(port));
    }
    out << "listening on " << args.host << ':' << bound << std::endl;
    return server.ListenAfterBind() ? kExitOk : kExitRuntime;
  });
}

}  // namespace cfgfolio::cli
