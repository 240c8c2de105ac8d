#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include "stabsgd/baselines.hpp"
#include "stabsgd/config.hpp"
#include "stabsgd/trainer.hpp"

namespace stabsgd {

/// One algorithm under test: "stabilized" or a baseline name.
struct AlgorithmSpec {
  std::string name;
  TrainConfig train;         // used when name == "stabilized"
  BaselineConfig baseline;   // used otherwise
};

AlgorithmSpec make_algorithm(const std::string& name, const Settings& settings);

/// Trains one model; `seed` replaces the configured seed.
DenseVector fit(const AlgorithmSpec& algo, const Dataset& train, LossKind loss, std::uint64_t seed);

struct RunRecord {
  std::string algo;
  std::size_t run = 0;
  std::uint64_t seed = 0;
  double error_pct = 0.0;
  double sparsity_pct = 0.0;
  std::size_t nonzeros = 0;
  FeatureSet selected;
};

struct AggregateRow {
  std::string algo;
  std::size_t runs = 0;
  double mean_error_pct = 0.0;
  double std_error_pct = 0.0;
  double mean_sparsity_pct = 0.0;
  double std_sparsity_pct = 0.0;
  double stability = 0.0;  // NaN when runs < 2
};

struct BenchmarkResult {
  std::vector<RunRecord> runs;  // ordered by (algorithm, run)
  std::vector<AggregateRow> aggregate;
};

/// B runs per algorithm with seeds seed_base, seed_base + 1, ...; each run
/// trains on its own ordering of `train` and is scored on `val`.
BenchmarkResult run_benchmark(const Dataset& train, const Dataset& val, LossKind loss,
                              const std::vector<AlgorithmSpec>& algos, std::size_t B, std::uint64_t seed_base,
                              std::size_t threads = 1);

AggregateRow aggregate_runs(const std::string& algo, const std::vector<RunRecord>& runs);

void write_runs_csv(std::ostream& out, const std::vector<RunRecord>& runs);
void write_aggregate_csv(std::ostream& out, const std::vector<AggregateRow>& rows);
/// Aligned plain-text rendering of the aggregate table.
void write_aggregate_table(std::ostream& out, const std::vector<AggregateRow>& rows);

}  // namespace stabsgd
