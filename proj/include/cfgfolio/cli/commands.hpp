#pragma once

// Subcommand implementations behind the `cfgfolio` executable. Each returns
// the process exit status: 0 success, 1 runtime error, 2 usage error.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

#include "cfgfolio/core.hpp"
#include "cfgfolio/eval.hpp"

namespace cfgfolio::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitRuntime = 1;
inline constexpr int kExitUsage = 2;

struct BundlePaths {
  std::filesystem::path evaluations;
  std::filesystem::path metafeatures;
  std::filesystem::path configs;
  MissingPolicy missing_policy = MissingPolicy::kWorstInColumn;
};

struct MiningFlags {
  double epsilon = 0.01;
  std::string metric = "ser";
  bool early_stopping = true;
  std::optional<std::size_t> max_size;
  std::string strategy = "ours";
  std::size_t size = 5;  // greedy_mean portfolio size
};

struct MineArgs {
  BundlePaths bundle;
  MiningFlags mining;
  std::filesystem::path out;
};

struct RecommendArgs {
  std::filesystem::path model;
  std::optional<std::uint64_t> n_instances;
  std::optional<std::uint64_t> n_features;
  std::optional<std::uint64_t> n_classes;
  std::optional<double> pct_numeric;
  std::optional<std::string> row;  // "n_instances,n_features,n_classes,pct"
                                   // with an optional leading task id
};

struct EvaluateArgs {
  BundlePaths bundle;
  MiningFlags mining;
  std::optional<std::size_t> k;
  std::filesystem::path out;
};

struct CurveArgs {
  BundlePaths bundle;
  MiningFlags mining;
  std::optional<std::uint64_t> order_seed;  // shuffle task order; file order if unset
  std::optional<std::size_t> limit;          // use only the first N tasks of the order
  std::filesystem::path out;
};

struct MapArgs {
  std::filesystem::path model;
  std::filesystem::path out;
};

struct CorrelateArgs {
  BundlePaths bundle;
  std::filesystem::path out;
};

struct GenerateArgs {
  std::size_t tasks = 50;
  std::size_t configs = 200;
  std::size_t clusters = 4;
  double noise = 0.005;
  std::uint64_t seed = 0;
  std::string out_prefix;  // writes <prefix>evaluations.csv etc.
};

struct ServeArgs {
  std::filesystem::path model;
  std::string host = "0.0.0.0";
  int port = 8080;
};

EvalOptions ToEvalOptions(const MiningFlags& flags);

int CmdMine(const MineArgs& args, std::ostream& out, std::ostream& err);
int CmdRecommend(const RecommendArgs& args, std::ostream& out, std::ostream& err);
int CmdEvaluate(const EvaluateArgs& args, std::ostream& out, std::ostream& err);
int CmdCurve(const CurveArgs& args, std::ostream& out, std::ostream& err);
int CmdMap(const MapArgs& args, std::ostream& out, std::ostream& err);
int CmdCorrelate(const CorrelateArgs& args, std::ostream& out, std::ostream& err);
int CmdGenerate(const GenerateArgs& args, std::ostream& out, std::ostream& err);
int CmdServe(const ServeArgs& args, std::ostream& out, std::ostream& err);

// File names written by CmdGenerate under its prefix.
std::filesystem::path GeneratedEvaluations(const std::string& prefix);
std::filesystem::path GeneratedMetafeatures(const std::string& prefix);
std::filesystem::path GeneratedConfigs(const std::string& prefix);

// The model CmdMine writes for the given inputs, built through the library.
DecisionModel MineModel(const RegretMatrix& regret, const MiningFlags& flags,
                        Portfolio* portfolio_out = nullptr);

}  // namespace cfgfolio::cli
