#include "stabsgd/cli.hpp"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "stabsgd/benchmark.hpp"
#include "stabsgd/config.hpp"
#include "stabsgd/data_io.hpp"
#include "stabsgd/metrics.hpp"
#include "stabsgd/model_io.hpp"
#include "stabsgd/synth.hpp"
#include "stabsgd/trainer.hpp"

namespace fs = std::filesystem;

namespace stabsgd {
namespace {

/// Usage problems detected after argument parsing.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string default_output_dir() {
  if (const char* env = std::getenv(kOutputDirEnv); env != nullptr && *env != '\0') {
    return env;
  }
  return ".";
}

void require_file(const std::string& path) {
  if (!fs::is_regular_file(path)) {
    throw UsageError("file not found: " + path);
  }
}

fs::path ensure_dir(const std::string& dir) {
  fs::create_directories(dir);
  return fs::path(dir);
}

std::ofstream open_out(const fs::path& path) {
  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error("cannot write " + path.string());
  }
  return out;
}

struct CommonOptions {
  std::string config;
  std::vector<std::string> sets;
  std::optional<double> g0, eta, passes;
  std::optional<std::uint64_t> seed;
  std::string loss = "hinge";
  bool normalize = false;
  std::string out_dir = default_output_dir();
};

void add_common(CLI::App* cmd, CommonOptions& o) {
  cmd->add_option("--config", o.config, "key=value settings file");
  cmd->add_option("--set", o.sets, "override a setting, key=value (repeatable)");
  cmd->add_option("--g0", o.g0, "base gravity (truncated gradient)");
  cmd->add_option("--eta", o.eta, "learning rate");
  cmd->add_option("--passes", o.passes, "passes over the training data");
  cmd->add_option("--seed", o.seed, "random seed");
  cmd->add_option("--loss", o.loss, "hinge or logistic")->check(CLI::IsMember({"hinge", "logistic"}));
  cmd->add_flag("--normalize", o.normalize, "scale features to unit variance using training statistics");
  cmd->add_option("--out-dir", o.out_dir, std::string("output directory (default $") + kOutputDirEnv + " or .)");
}

Settings collect_settings(const CommonOptions& o) {
  Settings s;
  if (!o.config.empty()) {
    require_file(o.config);
    s = load_settings(o.config);
  }
  auto put = [&](const char* key, auto v) {
    std::ostringstream str;
    str.precision(17);
    str << v;
    s[key] = str.str();
  };
  if (o.g0) put("g0", *o.g0);
  if (o.eta) put("eta", *o.eta);
  if (o.passes) put("passes", *o.passes);
  if (o.seed) put("seed", *o.seed);
  for (const auto& a : o.sets) {
    try {
      auto [k, v] = parse_assignment(a);
      s[k] = v;
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
  }
  if (const auto bad = unknown_keys(s); !bad.empty()) {
    std::string msg = "unknown setting(s):";
    for (const auto& k : bad) {
      msg += " " + k;
    }
    throw UsageError(msg);
  }
  return s;
}

std::pair<Dataset, std::optional<Dataset>> load_data(const std::string& train_path, const std::string& val_path,
                                                     bool normalize) {
  require_file(train_path);
  if (!val_path.empty()) {
    require_file(val_path);
  }
  Dataset train = load_libsvm(train_path);
  std::optional<Dataset> val;
  if (!val_path.empty()) {
    // Validation rows may not touch the highest training index; pad both.
    Dataset v = load_libsvm(val_path);
    const std::size_t p = std::max(train.dim(), v.dim());
    if (train.dim() != p) {
      train = load_libsvm(train_path, p);
    }
    if (v.dim() != p) {
      v = load_libsvm(val_path, p);
    }
    val = std::move(v);
  }
  if (normalize) {
    const auto scales = feature_scales(train);
    train = apply_scales(train, scales);
    if (val) {
      val = apply_scales(*val, scales);
    }
  }
  return {std::move(train), std::move(val)};
}

nlohmann::json stage_json(const StageRecord& r) {
  return {{"stage", r.stage},
          {"beta", r.beta},
          {"g0", r.g0},
          {"K", r.K},
          {"omega_size", r.omega_size},
          {"d", r.d},
          {"path_sparsity_pct", r.path_sparsity},
          {"relative_change", r.relative_change},
          {"samples_per_path", r.samples_per_path}};
}

struct TrainOptions {
  CommonOptions common;
  std::string algo = "stabilized";
  std::string data, val, model, history, trace;
};

int cmd_train(const TrainOptions& o, std::ostream& out) {
  const Settings settings = collect_settings(o.common);
  AlgorithmSpec spec;
  try {
    spec = make_algorithm(o.algo, settings);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  const LossKind loss = parse_loss(o.common.loss);
  auto [train, val] = load_data(o.data, o.val, o.common.normalize);
  const fs::path dir = ensure_dir(o.common.out_dir);

  DenseVector w;
  std::optional<std::size_t> omega_size;
  if (o.algo == "stabilized") {
    TrainConfig cfg = spec.train;
    cfg.record_trace = !o.trace.empty();
    const TrainResult result = stabsgd::train(train, loss, cfg);
    w = result.w_bar;
    omega_size = result.omega_hat.size();
    auto hist = open_out(o.history.empty() ? dir / "history.jsonl" : fs::path(o.history));
    for (const auto& r : result.history) {
      hist << stage_json(r).dump() << '\n';
    }
    if (!o.trace.empty()) {
      auto tr = open_out(o.trace);
      for (const auto& t : result.traces) {
        write_stage_trace(tr, t);
      }
    }
    out << "stages: " << result.history.size() << (result.converged ? " (converged)" : "") << '\n';
  } else {
    w = run_baseline(train, loss, spec.baseline);
  }

  const fs::path model_path = o.model.empty() ? dir / "model.txt" : fs::path(o.model);
  save_model(model_path.string(), w);

  out << "algorithm: " << o.algo << '\n';
  if (val) {
    out << "validation error %: " << 100.0 * test_error(w, *val) << '\n';
  }
  out << "training error %: " << 100.0 * test_error(w, train) << '\n';
  out << "nonzero %: " << sparsity_pct(w) << '\n';
  if (omega_size) {
    out << "stable set size: " << *omega_size << '\n';
  }
  out << "model: " << model_path.string() << '\n';
  return kExitOk;
}

struct BenchmarkOptions {
  CommonOptions common;
  std::string data, val;
  double split_fraction = 0.7;
  std::string algos = "stabilized,truncated";
  std::size_t B = 10;
  std::size_t threads = 1;
};

int cmd_benchmark(const BenchmarkOptions& o, std::ostream& out) {
  const Settings settings = collect_settings(o.common);
  if (o.B < 1) {
    throw UsageError("-B must be at least 1");
  }
  std::vector<AlgorithmSpec> algos;
  {
    std::stringstream list(o.algos);
    std::string name;
    while (std::getline(list, name, ',')) {
      if (name.empty()) {
        continue;
      }
      try {
        algos.push_back(make_algorithm(name, settings));
      } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
      }
    }
  }
  if (algos.empty()) {
    throw UsageError("no algorithms given");
  }
  const LossKind loss = parse_loss(o.common.loss);
  const std::uint64_t seed_base = o.common.seed.value_or(1);

  Dataset train, val;
  if (o.val.empty()) {
    require_file(o.data);
    auto [tr, va] = split(load_libsvm(o.data), o.split_fraction, seed_base);
    if (o.common.normalize) {
      const auto scales = feature_scales(tr);
      tr = apply_scales(tr, scales);
      va = apply_scales(va, scales);
    }
    train = std::move(tr);
    val = std::move(va);
  } else {
    auto [tr, va] = load_data(o.data, o.val, o.common.normalize);
    train = std::move(tr);
    val = std::move(*va);
  }

  const BenchmarkResult result = run_benchmark(train, val, loss, algos, o.B, seed_base, o.threads);
  const fs::path dir = ensure_dir(o.common.out_dir);
  {
    auto f = open_out(dir / "runs.csv");
    write_runs_csv(f, result.runs);
  }
  {
    auto f = open_out(dir / "aggregate.csv");
    write_aggregate_csv(f, result.aggregate);
  }
  {
    auto f = open_out(dir / "aggregate.txt");
    write_aggregate_table(f, result.aggregate);
  }
  write_aggregate_table(out, result.aggregate);
  return kExitOk;
}

struct ProfileOptions {
  std::string model, data, out_csv;
  std::size_t bins = 20;
  std::string out_dir = default_output_dir();
};

int cmd_profile(const ProfileOptions& o, std::ostream& out) {
  require_file(o.model);
  require_file(o.data);
  if (o.bins < 1) {
    throw UsageError("--bins must be at least 1");
  }
  const DenseVector w = load_model(o.model);
  const Dataset data = load_libsvm(o.data, w.size());
  const auto bins = selection_by_density(selected_set(w), data, o.bins);
  const fs::path path = o.out_csv.empty() ? ensure_dir(o.out_dir) / "profile.csv" : fs::path(o.out_csv);
  auto f = open_out(path);
  f << "density_lo,density_hi,features,selected,selected_fraction\n";
  f.precision(10);
  for (const auto& b : bins) {
    f << b.lo << ',' << b.hi << ',' << b.count << ',' << b.selected << ',' << b.fraction << '\n';
  }
  out << "bins: " << bins.size() << '\n';
  out << "spearman(density, selected fraction): " << density_selection_correlation(bins) << '\n';
  out << "profile: " << path.string() << '\n';
  return kExitOk;
}

struct SynthOptions {
  SynthConfig cfg;
  std::size_t n_val = 0;
  std::string prefix;
  std::string out_dir = default_output_dir();
};

int cmd_synth(const SynthOptions& o, std::ostream& out) {
  try {
    o.cfg.validate();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  const SynthProblem problem = make_problem(o.cfg);
  const fs::path prefix = o.prefix.empty() ? ensure_dir(o.out_dir) / "synth" : fs::path(o.prefix);
  if (prefix.has_parent_path()) {
    fs::create_directories(prefix.parent_path());
  }
  const Dataset train = problem.sample(o.cfg.n, o.cfg.seed, o.cfg.noise);
  save_libsvm(prefix.string() + "_train.svm", train);
  if (o.n_val > 0) {
    const Dataset val = problem.sample(o.n_val, o.cfg.seed + 0x1000193ULL, o.cfg.noise);
    save_libsvm(prefix.string() + "_val.svm", val);
  }
  {
    auto f = open_out(prefix.string() + "_support.txt");
    f << "# index (0-based) weight density\n";
    for (Index j : problem.support) {
      f << j << ' ' << problem.w_star[j] << ' ' << problem.densities[j] << '\n';
    }
  }
  out << "wrote " << prefix.string() << "_train.svm" << (o.n_val > 0 ? " and _val.svm" : "")
      << " (p=" << o.cfg.p << ", n=" << o.cfg.n << ", density " << train.density() << ")\n";
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Sparse online learning with stabilized truncated SGD", "stabsgd"};
  app.require_subcommand(1);

  TrainOptions train_opts;
  auto* train = app.add_subcommand("train", "train one model");
  add_common(train, train_opts.common);
  train->add_option("--algo", train_opts.algo, "stabilized, sgd, truncated, rda or fobos")
      ->check(CLI::IsMember({"stabilized", "sgd", "truncated", "rda", "fobos"}));
  train->add_option("--data", train_opts.data, "training data (LIBSVM)")->required();
  train->add_option("--val", train_opts.val, "validation data (LIBSVM)");
  train->add_option("--model", train_opts.model, "model output path (default <out-dir>/model.txt)");
  train->add_option("--history", train_opts.history, "stage history path (default <out-dir>/history.jsonl)");
  train->add_option("--trace", train_opts.trace, "write per-stage burst traces (JSON lines)");

  BenchmarkOptions bench_opts;
  auto* bench = app.add_subcommand("benchmark", "B permutations per algorithm with aggregate tables");
  add_common(bench, bench_opts.common);
  bench->add_option("--data", bench_opts.data, "training data, or the full data when --val is absent")->required();
  bench->add_option("--val", bench_opts.val, "validation data");
  bench->add_option("--split", bench_opts.split_fraction, "training fraction when --val is absent");
  bench->add_option("--algos", bench_opts.algos, "comma-separated algorithm list");
  bench->add_option("-B", bench_opts.B, "permutations per algorithm");
  bench->add_option("--threads", bench_opts.threads, "worker threads (0 = all cores)");

  ProfileOptions prof_opts;
  auto* prof = app.add_subcommand("profile", "selected fraction by feature density");
  prof->add_option("--model", prof_opts.model, "model file")->required();
  prof->add_option("--data", prof_opts.data, "training data (LIBSVM)")->required();
  prof->add_option("--bins", prof_opts.bins, "equal-width density bins");
  prof->add_option("--out", prof_opts.out_csv, "CSV output path (default <out-dir>/profile.csv)");
  prof->add_option("--out-dir", prof_opts.out_dir, "output directory");

  SynthOptions synth_opts;
  auto* synth = app.add_subcommand("synth", "generate a planted-support sparse dataset");
  synth->add_option("--p", synth_opts.cfg.p, "features");
  synth->add_option("--n", synth_opts.cfg.n, "training samples");
  synth->add_option("--n-val", synth_opts.n_val, "validation samples");
  synth->add_option("--density-lo", synth_opts.cfg.density_lo, "lowest feature density");
  synth->add_option("--density-hi", synth_opts.cfg.density_hi, "highest feature density");
  synth->add_option("--support", synth_opts.cfg.support, "number of true features");
  synth->add_option("--noise", synth_opts.cfg.noise, "label noise standard deviation");
  synth->add_option("--seed", synth_opts.cfg.seed, "random seed");
  synth->add_option("--out", synth_opts.prefix, "output path prefix (default <out-dir>/synth)");
  synth->add_option("--out-dir", synth_opts.out_dir, "output directory");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }

  try {
    if (train->parsed()) {
      return cmd_train(train_opts, out);
    }
    if (bench->parsed()) {
      return cmd_benchmark(bench_opts, out);
    }
    if (prof->parsed()) {
      return cmd_profile(prof_opts, out);
    }
    if (synth->parsed()) {
      return cmd_synth(synth_opts, out);
    }
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitUsage;
}

}  // namespace stabsgd
