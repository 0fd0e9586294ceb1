#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "neuralnmf/matrix.hpp"

namespace nnmf::cli {

/// Flat configuration shared by the subcommands. Every field has a default;
/// values come from a key=value config file overridden by command-line
/// flags. Unknown keys are rejected.
struct RunConfig {
  std::string data_path;
  std::string labels_path;
  std::string model_dir;
  std::string out_dir = "out";
  std::string method = "neural";      // nmf | ssnmf | hnmf | neural
  std::vector<std::size_t> ranks = {9, 4, 2};
  std::string supervision = "none";   // none | semi:FRAC | full
  double lambda = 1.0;
  double gamma = 1e-3;
  std::size_t iters = 500;            // projected gradient iterations
  std::size_t mu_iters = 1000;        // multiplicative updates per layer
  std::size_t trials = 1;
  std::uint64_t seed = 0;
  std::string loss = "final";         // final | all (unsupervised runs)
  double conv_tol = 1e-6;
  double kkt_tol = 1e-10;
  double support_tol = 1e-10;
  // gradient check
  double h = 1e-6;
  double rtol = 1e-5;
  std::size_t probes = 0;             // 0 = exhaustive
  std::size_t gc_rows = 12;
  std::size_t gc_cols = 10;
  std::vector<std::size_t> gc_ranks = {5, 3};
};

/// Parses "9,4,2" into a rank list.
std::vector<std::size_t> parse_ranks(const std::string& text);

/// Known fraction from a supervision string: none -> nullopt,
/// semi:F -> F, full -> 1. Throws ConfigError on anything else.
std::optional<double> supervision_fraction(const std::string& text);

/// Applies key=value lines from a config file. Unknown keys throw
/// ConfigError; '#' starts a comment.
void apply_config_file(RunConfig& config, const std::string& path);

/// Applies one key=value override (the command-line layer).
void apply_override(RunConfig& config, const std::string& key,
                    const std::string& value);

/// Writes X.csv, labels.csv and block_spec.json for the synthetic
/// hierarchical dataset. Deterministic in config.seed.
void cmd_generate(const RunConfig& config);

/// Trains config.trials models (trial t uses seed + t), writing per-trial
/// factor CSVs, loss history and metrics plus an aggregate summary.json.
/// Returns the path of the summary file.
std::string cmd_train(const RunConfig& config);

/// Gradient certification on a seeded random instance; returns the process
/// exit code (0 iff the check passes) and writes gradcheck.json.
int cmd_gradcheck(const RunConfig& config);

/// Recomputes the forward pass of a trained model directory on the given
/// data and writes metrics.json. Returns the metrics path.
std::string cmd_eval(const RunConfig& config);

}  // namespace nnmf::cli
