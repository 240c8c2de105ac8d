#include "stabsgd/trainer.hpp"

#include <cmath>
#include <exception>
#include <limits>
#include <stdexcept>
#include <string>
#include <thread>

#include "stabsgd/data_io.hpp"
#include "stabsgd/metrics.hpp"

namespace stabsgd {

AnnealArgument parse_anneal_argument(std::string_view name) {
  if (name == "purged") {
    return AnnealArgument::PurgedFraction;
  }
  if (name == "stable") {
    return AnnealArgument::StableFraction;
  }
  throw std::invalid_argument("unknown anneal argument '" + std::string(name) + "' (expected purged or stable)");
}

std::string_view anneal_argument_name(AnnealArgument arg) {
  return arg == AnnealArgument::PurgedFraction ? "purged" : "stable";
}

void TrainConfig::validate() const {
  if (M < 1) {
    throw std::invalid_argument("M must be at least 1");
  }
  if (n_K < 1) {
    throw std::invalid_argument("n_K must be at least 1");
  }
  if (K < 1) {
    throw std::invalid_argument("K must be at least 1");
  }
  if (!(eta > 0.0) || !std::isfinite(eta)) {
    throw std::invalid_argument("eta must be positive");
  }
  if (!(pi0 >= 0.0 && pi0 <= 1.0)) {
    throw std::invalid_argument("pi0 must lie in [0, 1]");
  }
  if (!(beta0 >= 0.0 && beta0 <= 1.0)) {
    throw std::invalid_argument("beta0 must lie in [0, 1]");
  }
  if (!std::isfinite(gamma)) {
    throw std::invalid_argument("gamma must be finite");
  }
  if (!(delta_K >= 0.0)) {
    throw std::invalid_argument("delta_K must be nonnegative");
  }
  if (!(g0_init >= 0.0)) {
    throw std::invalid_argument("g0_init must be nonnegative");
  }
  if (max_stages < 1) {
    throw std::invalid_argument("max_stages must be at least 1");
  }
  if (!(alpha >= 0.0)) {
    throw std::invalid_argument("alpha must be nonnegative");
  }
  if (K_max < K) {
    throw std::invalid_argument("K_max must be at least K");
  }
  if (!(passes >= 0.0)) {
    throw std::invalid_argument("passes must be nonnegative");
  }
  if (!(convergence_tol >= 0.0)) {
    throw std::invalid_argument("convergence_tol must be nonnegative");
  }
}

std::vector<Dataset> make_paths(const Dataset& data, std::size_t M, std::uint64_t seed) {
  std::vector<Dataset> paths;
  paths.reserve(M);
  for (std::size_t m = 0; m < M; ++m) {
    paths.push_back(permute(data, path_seed(seed, m)));
  }
  return paths;
}

namespace {

struct PathStage {
  StageTally tally;
  std::vector<BurstOutput> bursts;
  std::exception_ptr error;
};

template <typename Fn>
void for_each_path(std::size_t M, std::size_t threads, Fn&& fn) {
  if (threads <= 1 || M <= 1) {
    for (std::size_t m = 0; m < M; ++m) {
      fn(m);
    }
    return;
  }
  const std::size_t workers = std::min(threads, M);
  std::vector<std::jthread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (std::size_t m = w; m < M; m += workers) {
        fn(m);
      }
    });
  }
}

double l2_distance(const DenseVector& a, const DenseVector& b) {
  double s = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) {
    const double d = a[j] - b[j];
    s += d * d;
  }
  return std::sqrt(s);
}

double l2_norm(const DenseVector& a) {
  double s = 0.0;
  for (double v : a) {
    s += v * v;
  }
  return std::sqrt(s);
}

}  // namespace

TrainResult train(const Dataset& data, LossKind loss, const TrainConfig& cfg) {
  cfg.validate();
  if (data.empty()) {
    throw std::invalid_argument("train: dataset is empty");
  }
  const std::size_t p = data.dim();
  const std::size_t M = cfg.M;
  std::size_t threads = cfg.threads;
  if (threads == 0) {
    threads = std::max<std::size_t>(1, std::thread::hardware_concurrency());
  }

  AnnealConfig anneal;
  anneal.beta0 = cfg.beta0;
  anneal.gamma = cfg.gamma;
  anneal.K0 = cfg.K;
  anneal.alpha = cfg.alpha > 0.0 ? cfg.alpha : 1.0;
  anneal.K_max = cfg.K_max;

  const std::vector<Dataset> paths = make_paths(data, M, cfg.seed);
  std::vector<SampleStream> streams;
  streams.reserve(M);
  for (const auto& d : paths) {
    streams.emplace_back(d, /*cyclic=*/true);
  }
  std::vector<DenseVector> weights(M, DenseVector(p, 0.0));

  const double budget = cfg.passes > 0.0 ? cfg.passes * static_cast<double>(data.size())
                                         : std::numeric_limits<double>::infinity();

  TrainResult result;
  result.omega_hat = FeatureSet::full(p);
  result.w_bar.assign(p, 0.0);
  SelectionStats stats(p, cfg.prob_unit);

  double beta = cfg.beta0;
  double g0 = cfg.g0_init;
  std::size_t K = cfg.K;
  std::uint64_t consumed = 0;

  for (std::size_t s = 1; s <= cfg.max_stages; ++s) {
    const auto stage_samples = static_cast<std::uint64_t>(cfg.n_K * K);
    if (static_cast<double>(consumed + stage_samples) > budget) {
      if (s == 1) {
        throw std::invalid_argument("train: pass budget is smaller than a single stage");
      }
      break;
    }

    const BurstParams params{loss, cfg.eta, K};
    const FeatureSet& omega = result.omega_hat;
    std::vector<PathStage> stage(M, PathStage{StageTally(p), {}, nullptr});
    for_each_path(M, threads, [&](std::size_t m) {
      try {
        for (std::size_t tau = 0; tau < cfg.n_K; ++tau) {
          BurstOutput out = burst_stable(weights[m], g0, omega, streams[m], params);
          stage[m].tally.add(out);
          weights[m] = out.w_hat;
          if (cfg.record_trace) {
            stage[m].bursts.push_back(std::move(out));
          }
        }
      } catch (...) {
        stage[m].error = std::current_exception();
      }
    });
    for (std::size_t m = 0; m < M; ++m) {
      if (stage[m].error) {
        try {
          std::rethrow_exception(stage[m].error);
        } catch (const DivergenceError& e) {
          throw DivergenceError("stage " + std::to_string(s) + ", path " + std::to_string(m) + ": " + e.what());
        }
      }
    }
    consumed += stage_samples;

    StageTally pooled(p);
    for (const auto& ps : stage) {
      pooled.merge(ps.tally);
    }
    const DenseVector prob = cfg.carryover ? selection_probability_carryover(stats, pooled, cfg.delta_K)
                                           : selection_probability(pooled);
    FeatureSet next_omega = stable_set(prob, cfg.pi0, result.omega_hat);

    StageRecord rec;
    rec.stage = s;
    rec.beta = beta;
    rec.g0 = g0;
    rec.K = K;
    for (auto& w : weights) {
      w = purge(w, next_omega);
      rec.path_sparsity.push_back(sparsity_pct(w));
    }

    DenseVector w_bar(p, 0.0);
    for (const auto& w : weights) {
      for (Index j : next_omega.members()) {
        w_bar[j] += w[j];
      }
    }
    for (Index j : next_omega.members()) {
      w_bar[j] /= static_cast<double>(M);
    }

    const double d = static_cast<double>(next_omega.size()) / static_cast<double>(p);
    const double anneal_at = cfg.anneal_argument == AnnealArgument::PurgedFraction ? 1.0 - d : d;
    const double next_beta = anneal_rejection(anneal_at, anneal);
    const std::size_t next_K = cfg.alpha > 0.0 ? anneal_burst_size(d, anneal) : cfg.K;
    const double next_g0 = adaptive_gravity(gravity_candidates(pooled, next_omega), next_beta, g0);

    const double change = l2_distance(w_bar, result.w_bar) /
                          std::max(l2_norm(result.w_bar), std::numeric_limits<double>::epsilon());

    if (cfg.record_trace) {
      StageTrace trace;
      trace.stage = s;
      trace.g0 = g0;
      for (auto& ps : stage) {
        trace.bursts.push_back(std::move(ps.bursts));
      }
      trace.probability = prob;
      trace.omega = next_omega.members();
      result.traces.push_back(std::move(trace));
    }

    rec.omega_size = next_omega.size();
    rec.d = d;
    rec.relative_change = change;
    rec.samples_per_path = consumed;
    result.history.push_back(std::move(rec));

    result.omega_hat = std::move(next_omega);
    result.w_bar = std::move(w_bar);
    beta = next_beta;
    g0 = next_g0;
    K = next_K;

    if (change < cfg.convergence_tol) {
      result.converged = true;
      break;
    }
  }
  return result;
}

}  // namespace stabsgd
