#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

#include "stabsgd/feature_set.hpp"
#include "stabsgd/losses.hpp"
#include "stabsgd/schedule.hpp"
#include "stabsgd/stability.hpp"

namespace stabsgd {

/// Which quantity feeds the rejection-rate annealing function.
///
/// PurgedFraction passes 1 - |omega| / p, so the rate starts at beta0 while
/// the stable set is still full and decays to 0 as features are purged.
/// StableFraction passes |omega| / p unchanged.
enum class AnnealArgument { PurgedFraction, StableFraction };

AnnealArgument parse_anneal_argument(std::string_view name);
std::string_view anneal_argument_name(AnnealArgument arg);

struct TrainConfig {
  double beta0 = 0.7;
  double gamma = 0.0;
  double pi0 = 0.75;
  std::size_t K = 5;        // initial burst size K0
  double alpha = 0.0;       // burst-size annealing rate; 0 keeps K fixed
  std::size_t K_max = 1000;
  std::size_t n_K = 5;      // bursts per path per stage
  std::size_t M = 16;       // parallel paths
  double eta = 0.1;
  double delta_K = 3.0;
  double g0_init = 0.0;
  std::size_t max_stages = 100000;
  double convergence_tol = 1e-4;
  double passes = 0.0;      // per-path budget in passes over the data; 0 = unlimited
  std::uint64_t seed = 1;
  bool carryover = true;
  ProbabilityUnit prob_unit = ProbabilityUnit::Bursts;
  AnnealArgument anneal_argument = AnnealArgument::PurgedFraction;
  std::size_t threads = 1;  // 0 = hardware concurrency
  bool record_trace = false;

  void validate() const;
};

struct StageRecord {
  std::size_t stage = 0;
  double beta = 0.0;       // rejection rate used for this stage's gravity
  double g0 = 0.0;         // base gravity used during the stage
  std::size_t K = 0;       // burst size used during the stage
  std::size_t omega_size = 0;
  double d = 0.0;          // |omega| / p after the stage
  std::vector<double> path_sparsity;  // % nonzero per path after purging
  double relative_change = 0.0;
  std::uint64_t samples_per_path = 0; // cumulative
};

struct TrainResult {
  DenseVector w_bar;
  FeatureSet omega_hat;
  std::vector<StageRecord> history;
  std::vector<StageTrace> traces;  // filled when record_trace is set
  bool converged = false;
};

/// Seed used for path m; path 0 uses `seed` itself.
constexpr std::uint64_t path_seed(std::uint64_t seed, std::size_t m) {
  return seed + 0x9e3779b97f4a7c15ULL * static_cast<std::uint64_t>(m);
}

/// M seeded permutations of `data`.
std::vector<Dataset> make_paths(const Dataset& data, std::size_t M, std::uint64_t seed);

/// Stabilized truncated SGD: M paths of informative bursts restricted to
/// the stable set, stability purging at each stage barrier, adaptive
/// gravity from the annealed rejection rate, and averaging over paths.
TrainResult train(const Dataset& data, LossKind loss, const TrainConfig& cfg);

}  // namespace stabsgd
