#pragma once

#include <cstdint>
#include <istream>
#include <ostream>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "stabsgd/feature_set.hpp"
#include "stabsgd/sgd_core.hpp"

namespace stabsgd {

/// Per-feature counts gathered from the bursts of one stage.
struct StageTally {
  explicit StageTally(std::size_t dim = 0)
      : informative_bursts(dim, 0), survived_bursts(dim, 0), informative_updates(dim, 0) {}

  std::vector<std::uint64_t> informative_bursts;   // bursts with k_j > 0
  std::vector<std::uint64_t> survived_bursts;      // ... and |w_hat_j| > 0
  std::vector<std::uint64_t> informative_updates;  // sum of k_j
  /// (j, |delta_w_j| / k_j) for every informative (burst, feature) pair,
  /// in the order the bursts were added.
  std::vector<std::pair<Index, double>> update_magnitudes;
  std::size_t bursts = 0;

  std::size_t dim() const { return informative_bursts.size(); }
  void add(const BurstOutput& burst);
  /// Appends `other`; merging in a fixed order keeps results reproducible.
  void merge(const StageTally& other);
};

/// Single-stage estimate over all bursts of all paths: survived / informative
/// bursts, and 1 for features with no informative update.
DenseVector selection_probability(std::span<const BurstOutput> bursts);
DenseVector selection_probability(const StageTally& tally);

/// Denominator used by the carry-over estimate.
enum class ProbabilityUnit { Bursts, Updates };

ProbabilityUnit parse_probability_unit(std::string_view name);
std::string_view probability_unit_name(ProbabilityUnit unit);

/// Carried-over counters. Invariant: survivals <= informative count.
struct SelectionStats {
  explicit SelectionStats(std::size_t dim = 0, ProbabilityUnit unit = ProbabilityUnit::Bursts)
      : kappa_acc(dim, 0), b_acc(dim, 0), unit(unit) {}

  std::vector<std::uint64_t> kappa_acc;
  std::vector<std::uint64_t> b_acc;
  ProbabilityUnit unit;
};

/// Folds one stage into `stats` and returns the carry-over estimate:
///   kappa~ = kappa~_prev * [kappa~_prev < delta_K] + kappa_s, same for b~,
///   prob_j = b~_j / kappa~_j if kappa~_j > delta_K, else 1.
DenseVector selection_probability_carryover(SelectionStats& stats, const StageTally& stage, double delta_K);

/// previous ∩ {j : prob_j >= pi0}. Intersection keeps purges permanent.
FeatureSet stable_set(std::span<const double> probability, double pi0, const FeatureSet& previous);

/// Zeroes every weight outside omega.
DenseVector purge(std::span<const double> w, const FeatureSet& omega);

/// Burst outcomes of one stage, as written to the trace log.
struct StageTrace {
  std::size_t stage = 0;
  double g0 = 0.0;
  std::vector<std::vector<BurstOutput>> bursts;  // [path][burst]
  DenseVector probability;
  std::vector<Index> omega;
};

/// One JSON object per line.
void write_stage_trace(std::ostream& out, const StageTrace& trace);
std::vector<StageTrace> read_stage_traces(std::istream& in);

}  // namespace stabsgd
