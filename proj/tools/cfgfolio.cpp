// cfgfolio: mine configuration portfolios, evaluate them and serve
// zero-shot recommendations.

#include <iostream>
#include <map>

#include "CLI11.hpp"
#include "cfgfolio/cli/commands.hpp"

namespace {

using namespace cfgfolio::cli;

void AddBundle(CLI::App* cmd, BundlePaths& paths, std::string& policy) {
  cmd->add_option("--evals", paths.evaluations, "evaluations CSV")->required();
  cmd->add_option("--meta", paths.metafeatures, "metafeatures CSV")->required();
  cmd->add_option("--configs", paths.configs, "configurations JSON")->required();
  cmd->add_option("--missing", policy, "missing-cell policy")
      ->check(CLI::IsMember({"worst", "reject"}))
      ->default_val("worst");
}

void AddMining(CLI::App* cmd, MiningFlags& flags, std::optional<std::size_t>& max_size) {
  cmd->add_option("--epsilon", flags.epsilon, "target regret")->default_val(0.01);
  cmd->add_option("--metric", flags.metric, "ser or mean")
      ->check(CLI::IsMember({"ser", "mean"}))
      ->default_val("ser");
  cmd->add_flag("--early-stop,!--no-early-stop", flags.early_stopping,
                "greedy early stopping")
      ->default_val(true);
  cmd->add_option("--max-size", max_size, "portfolio size cap");
  cmd->add_option("--strategy", flags.strategy, "ours, per_task_best, greedy_mean, single_best")
      ->check(CLI::IsMember({"ours", "per_task_best", "greedy_mean", "single_best"}))
      ->default_val("ours");
  cmd->add_option("--size", flags.size, "greedy_mean portfolio size")->default_val(5);
}

cfgfolio::MissingPolicy Policy(const std::string& name) {
  return name == "reject" ? cfgfolio::MissingPolicy::kReject
                          : cfgfolio::MissingPolicy::kWorstInColumn;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Configuration portfolio mining and zero-shot recommendation"};
  app.require_subcommand(1);

  std::string policy;
  std::optional<std::size_t> max_size;

  MineArgs mine;
  auto* mine_cmd = app.add_subcommand("mine", "mine a portfolio and write the decision model");
  AddBundle(mine_cmd, mine.bundle, policy);
  AddMining(mine_cmd, mine.mining, max_size);
  mine_cmd->add_option("--out", mine.out, "portfolio.json path")->default_val("portfolio.json");

  RecommendArgs rec;
  auto* rec_cmd = app.add_subcommand("recommend", "recommend a configuration for a task");
  rec_cmd->add_option("--model", rec.model, "portfolio.json")->required();
  rec_cmd->add_option("--n-instances", rec.n_instances);
  rec_cmd->add_option("--n-features", rec.n_features);
  rec_cmd->add_option("--n-classes", rec.n_classes);
  rec_cmd->add_option("--pct-numeric", rec.pct_numeric);
  rec_cmd->add_option("--row", rec.row, "[task_id,]n_instances,n_features,n_classes,pct_numeric");

  EvaluateArgs eval;
  auto* eval_cmd = app.add_subcommand("evaluate", "leave-one-out regret report");
  AddBundle(eval_cmd, eval.bundle, policy);
  AddMining(eval_cmd, eval.mining, max_size);
  eval_cmd->add_option("--k", eval.k, "add a k-shot column");
  eval_cmd->add_option("--out", eval.out, "report.json path")->default_val("report.json");

  CurveArgs curve;
  auto* curve_cmd = app.add_subcommand("curve", "portfolio size against training tasks");
  AddBundle(curve_cmd, curve.bundle, policy);
  AddMining(curve_cmd, curve.mining, max_size);
  curve_cmd->add_option("--order-seed", curve.order_seed, "shuffle the task order");
  curve_cmd->add_option("--limit", curve.limit, "use the first N tasks");
  curve_cmd->add_option("--out", curve.out, "curve.csv path")->default_val("curve.csv");

  MapArgs map;
  auto* map_cmd = app.add_subcommand("map", "2-D projection of the decision model");
  map_cmd->add_option("--model", map.model)->required();
  map_cmd->add_option("--out", map.out)->default_val("decision_map.csv");

  CorrelateArgs corr;
  auto* corr_cmd = app.add_subcommand("correlate", "metafeature rank correlation per task");
  AddBundle(corr_cmd, corr.bundle, policy);
  corr_cmd->add_option("--out", corr.out)->default_val("correlation.csv");

  GenerateArgs gen;
  auto* gen_cmd = app.add_subcommand("generate", "write a planted synthetic bundle");
  gen_cmd->add_option("--tasks", gen.tasks)->default_val(50);
  gen_cmd->add_option("--configs", gen.configs)->default_val(200);
  gen_cmd->add_option("--clusters", gen.clusters)->default_val(4);
  gen_cmd->add_option("--noise", gen.noise)->default_val(0.005);
  gen_cmd->add_option("--seed", gen.seed)->default_val(0);
  gen_cmd->add_option("--out-prefix", gen.out_prefix, "prefix for the three files");

  ServeArgs serve;
  auto* serve_cmd = app.add_subcommand("serve", "HTTP recommendation service");
  serve_cmd->add_option("--model", serve.model)->required();
  serve_cmd->add_option("--host", serve.host)->default_val("0.0.0.0");
  serve_cmd->add_option("--port", serve.port, "overridden by $PORT")->default_val(8080);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  if (*mine_cmd) {
    mine.bundle.missing_policy = Policy(policy);
    mine.mining.max_size = max_size;
    return CmdMine(mine, std::cout, std::cerr);
  }
  if (*rec_cmd) return CmdRecommend(rec, std::cout, std::cerr);
  if (*eval_cmd) {
    eval.bundle.missing_policy = Policy(policy);
    eval.mining.max_size = max_size;
    return CmdEvaluate(eval, std::cout, std::cerr);
  }
  if (*curve_cmd) {
    curve.bundle.missing_policy = Policy(policy);
    curve.mining.max_size = max_size;
    return CmdCurve(curve, std::cout, std::cerr);
  }
  if (*map_cmd) return CmdMap(map, std::cout, std::cerr);
  if (*corr_cmd) {
    corr.bundle.missing_policy = Policy(policy);
    return CmdCorrelate(corr, std::cout, std::cerr);
  }
  if (*gen_cmd) return CmdGenerate(gen, std::cout, std::cerr);
  if (*serve_cmd) return CmdServe(serve, std::cout, std::cerr);
  return kExitUsage;
}
