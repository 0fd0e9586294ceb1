#include "neuralnmf/runner.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "json.hpp"
#include "neuralnmf/baselines.hpp"
#include "neuralnmf/gradcheck.hpp"
#include "neuralnmf/io.hpp"
#include "neuralnmf/metrics.hpp"
#include "neuralnmf/neural.hpp"
#include "neuralnmf/rng.hpp"
#include "neuralnmf/synth.hpp"
#include "neuralnmf/threads.hpp"

namespace nnmf::cli {

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

constexpr std::uint64_t kLabelMaskSeedOffset = 1000003;

std::size_t parse_size(const std::string& value, const std::string& key) {
  try {
    return static_cast<std::size_t>(std::stoull(value));
  } catch (const std::exception&) {
    throw ConfigError("bad integer for " + key + ": " + value);
  }
}

double parse_real(const std::string& value, const std::string& key) {
  try {
    return std::stod(value);
  } catch (const std::exception&) {
    throw ConfigError("bad number for " + key + ": " + value);
  }
}

struct LoadedData {
  DenseMatrix X;
  std::vector<std::string> doc_ids;  // empty for plain matrix files
};

LoadedData load_data(const std::string& path) {
  if (path.empty()) throw ConfigError("no data file given");
  std::ifstream probe(path);
  if (!probe) throw IoError("cannot open " + path);
  std::string first_line;
  std::getline(probe, first_line);
  probe.close();

  if (first_line.rfind("%%MatrixMarket", 0) == 0) {
    io::TermDocData td = io::load_term_doc(path);
    return {std::move(td.X), std::move(td.doc_ids)};
  }
  const std::string head = first_line.substr(0, first_line.find(','));
  char* end = nullptr;
  std::strtod(head.c_str(), &end);
  const bool numeric = end != head.c_str() && *end == '\0';
  if (numeric) return {io::read_matrix_csv(path), {}};
  io::TermDocData td = io::load_term_doc(path);
  return {std::move(td.X), std::move(td.doc_ids)};
}

std::vector<int> load_labels(const std::string& path, const LoadedData& data) {
  if (path.empty()) throw ConfigError("labels file required but not given");
  const auto pairs = io::read_labels_csv(path);
  std::vector<int> labels(data.X.cols(), -1);
  for (const auto& [id, cls] : pairs) {
    std::size_t idx = labels.size();
    if (data.doc_ids.empty()) {
      try {
        idx = static_cast<std::size_t>(std::stoull(id));
      } catch (const std::exception&) {
        throw ConfigError("label id '" + id + "' is not a column index");
      }
    } else {
      const auto it =
          std::find(data.doc_ids.begin(), data.doc_ids.end(), id);
      if (it != data.doc_ids.end())
        idx = static_cast<std::size_t>(it - data.doc_ids.begin());
    }
    if (idx >= labels.size()) {
      throw ConfigError("label id '" + id + "' matches no data column");
    }
    labels[idx] = cls;
  }
  for (std::size_t j = 0; j < labels.size(); ++j) {
    if (labels[j] < 0) {
      throw ConfigError("column " + std::to_string(j) + " has no label");
    }
  }
  return labels;
}

std::size_t class_count(const std::vector<int>& labels) {
  int top = -1;
  for (int v : labels) top = std::max(top, v);
  return static_cast<std::size_t>(top + 1);
}

DenseMatrix one_hot(const std::vector<int>& labels, std::size_t classes) {
  DenseMatrix y(classes, labels.size());
  for (std::size_t j = 0; j < labels.size(); ++j) {
    y(static_cast<std::size_t>(labels[j]), j) = 1.0;
  }
  return y;
}

/// Per-layer relative reconstruction error plus, when labels are present,
/// per-layer accuracy with B fit as (Zsel .* Y) pinv(S^(l)). A null in the
/// accuracy array marks a layer whose S lost full row rank.
json stack_metrics(const DenseMatrix& x, const FactorStack& stack,
                   const std::vector<int>* labels, const DenseMatrix* zsel) {
  json out;
  json recon = json::array();
  for (std::size_t ell = 0; ell < stack.depth(); ++ell) {
    recon.push_back(recon_error_at_layer(x, stack, ell));
  }
  out["recon"] = std::move(recon);
  if (labels != nullptr) {
    const std::size_t classes = class_count(*labels);
    const DenseMatrix y = one_hot(*labels, classes);
    DenseMatrix ones(classes, labels->size(), 1.0);
    const DenseMatrix& mask = zsel != nullptr ? *zsel : ones;
    json acc = json::array();
    for (std::size_t ell = 0; ell < stack.depth(); ++ell) {
      try {
        const DenseMatrix b = hadamard(mask, y) * pinv(stack.S[ell]);
        acc.push_back(class_accuracy(b, stack.S[ell], *labels));
      } catch (const RankDeficient&) {
        acc.push_back(nullptr);
      }
    }
    out["accuracy"] = std::move(acc);
  }
  return out;
}

json config_echo(const RunConfig& c) {
  json j;
  j["data"] = c.data_path;
  j["labels"] = c.labels_path;
  j["model"] = c.model_dir;
  j["out"] = c.out_dir;
  j["method"] = c.method;
  j["ranks"] = c.ranks;
  j["supervision"] = c.supervision;
  j["lambda"] = c.lambda;
  j["gamma"] = c.gamma;
  j["iters"] = c.iters;
  j["mu_iters"] = c.mu_iters;
  j["trials"] = c.trials;
  j["seed"] = c.seed;
  j["loss"] = c.loss;
  j["conv_tol"] = c.conv_tol;
  j["kkt_tol"] = c.kkt_tol;
  j["support_tol"] = c.support_tol;
  j["h"] = c.h;
  j["rtol"] = c.rtol;
  j["probes"] = c.probes;
  return j;
}

void write_json(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out << j.dump(2) << '\n';
}

std::string trial_dir(const std::string& out_dir, std::size_t trial) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "trial_%03zu", trial);
  return (fs::path(out_dir) / buf).string();
}

LossKind parse_loss_kind(const std::string& name) {
  if (name == "final") return LossKind::kReconstructionFinal;
  if (name == "all") return LossKind::kReconstructionAllLayers;
  if (name == "class") return LossKind::kReconstructionClassification;
  throw ConfigError("unknown loss '" + name + "'");
}

NnlsOptions nnls_options(const RunConfig& c) {
  NnlsOptions opts;
  opts.kkt_tol = c.kkt_tol;
  opts.support_tol = c.support_tol;
  return opts;
}

struct TrialRun {
  FactorStack stack;  // native S matrices of the method
  std::optional<DenseMatrix> b;
  std::vector<std::vector<double>> traces;  // MU traces or one loss history
  std::optional<FactorStack> warm;          // neural warm start
  std::size_t best_iteration = 0;
  double best_loss = 0.0;
};

TrialRun run_trial(const RunConfig& cfg, const DenseMatrix& x,
                   const std::vector<int>* labels,
                   std::optional<double> fraction, std::uint64_t seed) {
  std::optional<SupervisionData> sup;
  if (fraction) {
    sup = make_labels(*labels, *fraction, seed + kLabelMaskSeedOffset,
                      class_count(*labels));
    sup->lambda = cfg.lambda;
  }

  TrialRun run;
  if (cfg.method == "nmf" || cfg.method == "ssnmf") {
    NmfResult res = cfg.method == "nmf"
                        ? nmf_mu(x, cfg.ranks[0], cfg.mu_iters, seed)
                        : ssnmf_mu(x, *sup, cfg.ranks[0], cfg.mu_iters, seed);
    run.stack.X = x;
    run.stack.A.push_back(std::move(res.A));
    run.stack.S.push_back(std::move(res.S));
    run.b = std::move(res.B);
    run.traces.push_back(std::move(res.objective_trace));
    return run;
  }

  LayerSpec layers{cfg.ranks};
  if (cfg.method == "hnmf") {
    HnmfRun h = hnmf(x, layers, cfg.mu_iters, seed, sup ? &*sup : nullptr);
    run.stack = std::move(h.stack);
    if (h.layers.back().B) run.b = std::move(*h.layers.back().B);
    for (auto& layer : h.layers)
      run.traces.push_back(std::move(layer.objective_trace));
    return run;
  }

  if (cfg.method != "neural") {
    throw ConfigError("unknown method '" + cfg.method + "'");
  }
  HnmfRun warm = hnmf(x, layers, cfg.mu_iters, seed, sup ? &*sup : nullptr);
  TrainConfig tc;
  tc.gamma = cfg.gamma;
  tc.max_outer_iters = cfg.iters;
  tc.conv_tol = cfg.conv_tol;
  tc.seed = seed;
  tc.nnls = nnls_options(cfg);
  LossSpec loss;
  if (sup) {
    loss.kind = LossKind::kReconstructionClassification;
    loss.lambda = cfg.lambda;
    loss.supervision = sup;
  } else {
    loss.kind = parse_loss_kind(cfg.loss);
  }
  TrainResult res = train(x, layers, tc, loss, &warm.stack.A);
  run.stack = std::move(res.stack);
  run.b = std::move(res.B);
  run.traces.push_back(std::move(res.history.loss));
  run.best_iteration = res.history.best_iteration;
  run.best_loss = res.history.best_loss;
  run.warm = std::move(warm.stack);
  return run;
}

json trial_metrics(const RunConfig& cfg, const DenseMatrix& x,
                   const TrialRun& run, const std::vector<int>* labels,
                   const DenseMatrix* zsel, std::uint64_t seed) {
  json m;
  m["seed"] = seed;
  m["method"] = cfg.method;
  const json native = stack_metrics(x, run.stack, labels, zsel);
  m["recon"] = native["recon"];
  if (native.contains("accuracy")) m["accuracy"] = native["accuracy"];

  // Metrics of the NNLS forward pass with the trial's A matrices; this is
  // what `eval` reproduces. For the neural method it coincides with the
  // native numbers.
  try {
    const FactorStack fwd = forward(run.stack.A, x, nnls_options(cfg));
    const json recomputed = stack_metrics(x, fwd, labels, zsel);
    m["recon_forward"] = recomputed["recon"];
    if (recomputed.contains("accuracy"))
      m["accuracy_forward"] = recomputed["accuracy"];
  } catch (const RankDeficient&) {
    m["recon_forward"] = nullptr;
  }

  if (run.b && labels != nullptr) {
    try {
      m["accuracy_trained_b"] =
          class_accuracy(*run.b, run.stack.S.back(), *labels);
    } catch (const ShapeMismatch&) {
      m["accuracy_trained_b"] = nullptr;
    }
  }
  if (run.warm) {
    json warm_recon = json::array();
    for (std::size_t ell = 0; ell < run.warm->depth(); ++ell) {
      warm_recon.push_back(recon_error_at_layer(x, *run.warm, ell));
    }
    m["warm_recon"] = std::move(warm_recon);
    m["best_iteration"] = run.best_iteration;
    m["best_loss"] = run.best_loss;
    m["final_loss"] = run.traces[0].back();
  }
  return m;
}

void write_trial_files(const std::string& dir, const TrialRun& run,
                       const std::optional<SupervisionData>& sup,
                       const json& metrics) {
  fs::create_directories(dir);
  const fs::path base(dir);
  for (std::size_t ell = 0; ell < run.stack.depth(); ++ell) {
    io::write_matrix_csv((base / ("A" + std::to_string(ell) + ".csv")).string(),
                         run.stack.A[ell]);
    io::write_matrix_csv((base / ("S" + std::to_string(ell) + ".csv")).string(),
                         run.stack.S[ell]);
  }
  if (run.b) io::write_matrix_csv((base / "B.csv").string(), *run.b);
  if (sup) io::write_matrix_csv((base / "Z.csv").string(), sup->Z);
  if (run.traces.size() == 1) {
    std::ofstream out((base / "loss_history.csv").string());
    for (double v : run.traces[0]) {
      char buf[40];
      std::snprintf(buf, sizeof buf, "%.17g", v);
      out << buf << '\n';
    }
  } else {
    for (std::size_t ell = 0; ell < run.traces.size(); ++ell) {
      std::ofstream out(
          (base / ("loss_history_layer" + std::to_string(ell) + ".csv"))
              .string());
      for (double v : run.traces[ell]) {
        char buf[40];
        std::snprintf(buf, sizeof buf, "%.17g", v);
        out << buf << '\n';
      }
    }
  }
  write_json((base / "metrics.json").string(), metrics);
}

/// Mean/stddev over trials of a per-layer json array field, skipping nulls.
void aggregate_field(const std::vector<json>& trials, const char* field,
                     json& aggregate) {
  if (trials.empty() || !trials.front().contains(field)) return;
  const std::size_t layers = trials.front()[field].size();
  json mean = json::array();
  json stddev = json::array();
  for (std::size_t ell = 0; ell < layers; ++ell) {
    double sum = 0.0, sq = 0.0;
    std::size_t n = 0;
    for (const auto& t : trials) {
      if (!t.contains(field) || t[field].is_null()) continue;
      const auto& v = t[field][ell];
      if (v.is_null()) continue;
      const double d = v.get<double>();
      sum += d;
      sq += d * d;
      ++n;
    }
    if (n == 0) {
      mean.push_back(nullptr);
      stddev.push_back(nullptr);
    } else {
      const double mu = sum / n;
      mean.push_back(mu);
      stddev.push_back(std::sqrt(std::max(0.0, sq / n - mu * mu)));
    }
  }
  aggregate[std::string(field) + "_mean"] = std::move(mean);
  aggregate[std::string(field) + "_std"] = std::move(stddev);
}

}  // namespace

std::vector<std::size_t> parse_ranks(const std::string& text) {
  std::vector<std::size_t> ranks;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) throw ConfigError("bad ranks '" + text + "'");
    ranks.push_back(parse_size(item, "ranks"));
  }
  if (ranks.empty()) throw ConfigError("bad ranks '" + text + "'");
  return ranks;
}

std::optional<double> supervision_fraction(const std::string& text) {
  if (text == "none") return std::nullopt;
  if (text == "full") return 1.0;
  if (text.rfind("semi:", 0) == 0) {
    const double f = parse_real(text.substr(5), "supervision");
    if (f < 0.0 || f > 1.0) {
      throw ConfigError("supervision fraction outside [0, 1]");
    }
    return f;
  }
  throw ConfigError("unknown supervision '" + text +
                    "' (use none | semi:FRAC | full)");
}

void apply_override(RunConfig& c, const std::string& key,
                    const std::string& value) {
  if (key == "data") c.data_path = value;
  else if (key == "labels") c.labels_path = value;
  else if (key == "model") c.model_dir = value;
  else if (key == "out") c.out_dir = value;
  else if (key == "method") c.method = value;
  else if (key == "ranks") c.ranks = parse_ranks(value);
  else if (key == "supervision") c.supervision = value;
  else if (key == "lambda") c.lambda = parse_real(value, key);
  else if (key == "gamma") c.gamma = parse_real(value, key);
  else if (key == "iters") c.iters = parse_size(value, key);
  else if (key == "mu_iters") c.mu_iters = parse_size(value, key);
  else if (key == "trials") c.trials = parse_size(value, key);
  else if (key == "seed") c.seed = parse_size(value, key);
  else if (key == "loss") c.loss = value;
  else if (key == "conv_tol") c.conv_tol = parse_real(value, key);
  else if (key == "kkt_tol") c.kkt_tol = parse_real(value, key);
  else if (key == "support_tol") c.support_tol = parse_real(value, key);
  else if (key == "h") c.h = parse_real(value, key);
  else if (key == "rtol") c.rtol = parse_real(value, key);
  else if (key == "probes") c.probes = parse_size(value, key);
  else if (key == "gc_rows") c.gc_rows = parse_size(value, key);
  else if (key == "gc_cols") c.gc_cols = parse_size(value, key);
  else if (key == "gc_ranks") c.gc_ranks = parse_ranks(value);
  else throw ConfigError("unknown config key '" + key + "'");
}

void apply_config_file(RunConfig& c, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config " + path);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    // trim
    const auto first = line.find_first_not_of(" \t");
    if (first == std::string::npos) continue;
    const auto last = line.find_last_not_of(" \t");
    line = line.substr(first, last - first + 1);
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ParseError("config line is not key=value: " + line, line_no);
    }
    std::string key = line.substr(0, eq);
    std::string value = line.substr(eq + 1);
    const auto key_end = key.find_last_not_of(" \t");
    key = key.substr(0, key_end == std::string::npos ? 0 : key_end + 1);
    const auto val_begin = value.find_first_not_of(" \t");
    value = val_begin == std::string::npos ? "" : value.substr(val_begin);
    apply_override(c, key, value);
  }
}

void cmd_generate(const RunConfig& cfg) {
  const SyntheticDataset ds = synth_hier(cfg.seed);
  fs::create_directories(cfg.out_dir);
  const fs::path base(cfg.out_dir);
  io::write_matrix_csv((base / "X.csv").string(), ds.X);
  io::write_labels_csv((base / "labels.csv").string(), ds.labels);

  json spec;
  auto blocks_json = [](const std::vector<BlockSpec::Block>& blocks) {
    json arr = json::array();
    for (const auto& b : blocks) {
      arr.push_back({{"rows", {b.row_begin, b.row_end}},
                     {"cols", {b.col_begin, b.col_end}},
                     {"intensity", b.intensity}});
    }
    return arr;
  };
  spec["coarse"] = blocks_json(ds.block_spec.coarse);
  spec["mid"] = blocks_json(ds.block_spec.mid);
  spec["fine"] = blocks_json(ds.block_spec.fine);
  spec["seed"] = cfg.seed;
  spec["noise"] = "uniform(0,1) added to every entry";
  write_json((base / "block_spec.json").string(), spec);
}

std::string cmd_train(const RunConfig& cfg) {
  if (cfg.trials == 0) throw ConfigError("trials must be at least 1");
  const LoadedData data = load_data(cfg.data_path);
  const std::optional<double> fraction =
      supervision_fraction(cfg.supervision);
  if (cfg.method == "ssnmf" && !fraction) {
    throw ConfigError("method ssnmf needs supervision (semi:FRAC or full)");
  }

  std::optional<std::vector<int>> labels;
  if (fraction || !cfg.labels_path.empty()) {
    labels = load_labels(cfg.labels_path, data);
  }

  LayerSpec spec{cfg.ranks};
  spec.validate(data.X.rows());

  fs::create_directories(cfg.out_dir);
  std::vector<json> per_trial(cfg.trials);
  parallel_for(cfg.trials, [&](std::size_t t) {
    const std::uint64_t seed = cfg.seed + t;
    std::optional<SupervisionData> sup;
    if (fraction) {
      sup = make_labels(*labels, *fraction, seed + kLabelMaskSeedOffset,
                        class_count(*labels));
      sup->lambda = cfg.lambda;
    }
    const TrialRun run = run_trial(cfg, data.X,
                                   labels ? &*labels : nullptr, fraction,
                                   seed);
    const json metrics =
        trial_metrics(cfg, data.X, run, labels ? &*labels : nullptr,
                      sup ? &sup->Z : nullptr, seed);
    write_trial_files(trial_dir(cfg.out_dir, t), run, sup, metrics);
    per_trial[t] = metrics;
  });

  json summary;
  summary["command"] = "train";
  summary["config"] = config_echo(cfg);
  json inputs;
  inputs["data"] = {{"path", cfg.data_path},
                    {"hash", io::content_hash(cfg.data_path)}};
  if (!cfg.labels_path.empty()) {
    inputs["labels"] = {{"path", cfg.labels_path},
                        {"hash", io::content_hash(cfg.labels_path)}};
  }
  summary["inputs"] = std::move(inputs);
  summary["trials"] = per_trial;
  json aggregate;
  aggregate_field(per_trial, "recon", aggregate);
  aggregate_field(per_trial, "accuracy", aggregate);
  aggregate_field(per_trial, "recon_forward", aggregate);
  aggregate_field(per_trial, "warm_recon", aggregate);
  summary["aggregate"] = std::move(aggregate);

  const std::string path = (fs::path(cfg.out_dir) / "summary.json").string();
  write_json(path, summary);
  return path;
}

int cmd_gradcheck(const RunConfig& cfg) {
  Rng rng(cfg.seed);
  DenseMatrix x(cfg.gc_rows, cfg.gc_cols);
  for (double& v : x.data()) v = rng.uniform();
  std::vector<DenseMatrix> a_list;
  std::size_t prev = cfg.gc_rows;
  for (std::size_t k : cfg.gc_ranks) {
    DenseMatrix a(prev, k);
    for (double& v : a.data()) v = rng.uniform();
    a_list.push_back(std::move(a));
    prev = k;
  }

  LossSpec spec;
  spec.kind = parse_loss_kind(cfg.loss);
  if (spec.kind == LossKind::kReconstructionClassification) {
    std::vector<int> labels(cfg.gc_cols);
    for (auto& l : labels) l = static_cast<int>(rng.index(3));
    spec.supervision = make_labels(labels, 0.5, cfg.seed + 1, 3);
    spec.supervision->lambda = cfg.lambda;
    spec.lambda = cfg.lambda;
  }

  FdOptions fd;
  fd.h = cfg.h;
  fd.samples_per_layer = cfg.probes;
  fd.seed = cfg.seed;
  fd.nnls = nnls_options(cfg);
  const GradReport report = check(x, a_list, spec, cfg.h, cfg.rtol, fd);

  fs::create_directories(cfg.out_dir);
  json j;
  j["command"] = "gradcheck";
  j["config"] = config_echo(cfg);
  j["passes"] = report.passes;
  j["max_rel_err"] = report.max_rel_err;
  j["max_abs_err"] = report.max_abs_err;
  j["compared"] = report.compared;
  j["skipped"] = report.skipped;
  j["worst"] = {{"layer", report.worst_layer},
                {"row", report.worst_row},
                {"col", report.worst_col}};
  json layers = json::array();
  for (const auto& l : report.layers) {
    layers.push_back({{"max_rel_err", l.max_rel_err},
                      {"max_abs_err", l.max_abs_err},
                      {"compared", l.compared},
                      {"skipped", l.skipped}});
  }
  j["layers"] = std::move(layers);
  write_json((fs::path(cfg.out_dir) / "gradcheck.json").string(), j);

  std::cout << (report.passes ? "PASS" : "FAIL") << " max_rel_err="
            << report.max_rel_err << " compared=" << report.compared
            << " skipped=" << report.skipped << "\n";
  return report.passes ? 0 : 1;
}

std::string cmd_eval(const RunConfig& cfg) {
  if (cfg.model_dir.empty()) throw ConfigError("eval needs a model directory");
  const fs::path model(cfg.model_dir);
  std::vector<DenseMatrix> a_list;
  for (std::size_t ell = 0;; ++ell) {
    const fs::path p = model / ("A" + std::to_string(ell) + ".csv");
    if (!fs::exists(p)) break;
    a_list.push_back(io::read_matrix_csv(p.string()));
  }
  if (a_list.empty()) {
    throw IoError("no A matrices found in " + cfg.model_dir);
  }

  const LoadedData data = load_data(cfg.data_path);
  std::optional<std::vector<int>> labels;
  if (!cfg.labels_path.empty()) labels = load_labels(cfg.labels_path, data);

  std::optional<DenseMatrix> zsel;
  if (fs::exists(model / "Z.csv")) {
    zsel = io::read_matrix_csv((model / "Z.csv").string());
  }

  const FactorStack stack = forward(a_list, data.X, nnls_options(cfg));
  json metrics = stack_metrics(data.X, stack, labels ? &*labels : nullptr,
                               zsel ? &*zsel : nullptr);
  json out;
  out["command"] = "eval";
  out["model"] = cfg.model_dir;
  out["recon_forward"] = metrics["recon"];
  if (metrics.contains("accuracy"))
    out["accuracy_forward"] = metrics["accuracy"];
  if (labels && fs::exists(model / "B.csv")) {
    const DenseMatrix b = io::read_matrix_csv((model / "B.csv").string());
    out["accuracy_stored_b"] = class_accuracy(b, stack.S.back(), *labels);
  }
  out["inputs"] = {{"data", {{"path", cfg.data_path},
                             {"hash", io::content_hash(cfg.data_path)}}}};

  fs::create_directories(cfg.out_dir);
  const std::string path = (fs::path(cfg.out_dir) / "metrics.json").string();
  write_json(path, out);
  return path;
}

}  // namespace nnmf::cli
