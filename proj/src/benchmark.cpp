#include "stabsgd/benchmark.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <iomanip>
#include <limits>
#include <sstream>
#include <thread>

#include "stabsgd/metrics.hpp"

namespace stabsgd {

AlgorithmSpec make_algorithm(const std::string& name, const Settings& settings) {
  AlgorithmSpec spec;
  spec.name = name;
  const Settings s = settings_for(settings, name);
  if (name == "stabilized") {
    apply_settings(spec.train, s);
    spec.train.validate();
  } else {
    spec.baseline.kind = parse_baseline(name);
    apply_settings(spec.baseline, s);
    spec.baseline.validate();
  }
  return spec;
}

DenseVector fit(const AlgorithmSpec& algo, const Dataset& train, LossKind loss, std::uint64_t seed) {
  if (algo.name == "stabilized") {
    TrainConfig cfg = algo.train;
    cfg.seed = seed;
    return stabsgd::train(train, loss, cfg).w_bar;
  }
  BaselineConfig cfg = algo.baseline;
  cfg.seed = seed;
  return run_baseline(train, loss, cfg);
}

AggregateRow aggregate_runs(const std::string& algo, const std::vector<RunRecord>& runs) {
  AggregateRow row;
  row.algo = algo;
  std::vector<double> err, sp;
  std::vector<FeatureSet> sets;
  for (const auto& r : runs) {
    if (r.algo != algo) {
      continue;
    }
    err.push_back(r.error_pct);
    sp.push_back(r.sparsity_pct);
    sets.push_back(r.selected);
  }
  row.runs = err.size();
  row.mean_error_pct = mean(err);
  row.std_error_pct = stddev(err);
  row.mean_sparsity_pct = mean(sp);
  row.std_sparsity_pct = stddev(sp);
  row.stability = sets.size() >= 2 ? stability_score(sets) : std::numeric_limits<double>::quiet_NaN();
  return row;
}

BenchmarkResult run_benchmark(const Dataset& train, const Dataset& val, LossKind loss,
                              const std::vector<AlgorithmSpec>& algos, std::size_t B, std::uint64_t seed_base,
                              std::size_t threads) {
  if (B < 1) {
    throw std::invalid_argument("benchmark: B must be at least 1");
  }
  const std::size_t jobs = algos.size() * B;
  BenchmarkResult result;
  result.runs.resize(jobs);
  std::vector<std::exception_ptr> errors(jobs);

  auto run_job = [&](std::size_t i) {
    const auto& algo = algos[i / B];
    const std::size_t b = i % B;
    try {
      RunRecord rec;
      rec.algo = algo.name;
      rec.run = b;
      rec.seed = seed_base + b;
      const DenseVector w = fit(algo, train, loss, rec.seed);
      rec.error_pct = 100.0 * test_error(w, val);
      rec.sparsity_pct = sparsity_pct(w);
      rec.selected = selected_set(w);
      rec.nonzeros = rec.selected.size();
      result.runs[i] = std::move(rec);
    } catch (...) {
      errors[i] = std::current_exception();
    }
  };

  if (threads == 0) {
    threads = std::max<std::size_t>(1, std::thread::hardware_concurrency());
  }
  if (threads <= 1) {
    for (std::size_t i = 0; i < jobs; ++i) {
      run_job(i);
    }
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < std::min(threads, jobs); ++t) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < jobs; i = next++) {
          run_job(i);
        }
      });
    }
  }
  for (auto& e : errors) {
    if (e) {
      std::rethrow_exception(e);
    }
  }
  for (const auto& algo : algos) {
    result.aggregate.push_back(aggregate_runs(algo.name, result.runs));
  }
  return result;
}

namespace {

std::string fixed(double v, int digits) {
  if (std::isnan(v)) {
    return "nan";
  }
  std::ostringstream s;
  s << std::fixed << std::setprecision(digits) << v;
  return s.str();
}

}  // namespace

void write_runs_csv(std::ostream& out, const std::vector<RunRecord>& runs) {
  out << "algorithm,run,seed,error_pct,sparsity_pct,nonzeros\n";
  for (const auto& r : runs) {
    out << r.algo << ',' << r.run << ',' << r.seed << ',' << fixed(r.error_pct, 6) << ','
        << fixed(r.sparsity_pct, 6) << ',' << r.nonzeros << '\n';
  }
}

void write_aggregate_csv(std::ostream& out, const std::vector<AggregateRow>& rows) {
  out << "algorithm,runs,mean_error_pct,std_error_pct,mean_sparsity_pct,std_sparsity_pct,stability\n";
  for (const auto& r : rows) {
    out << r.algo << ',' << r.runs << ',' << fixed(r.mean_error_pct, 6) << ',' << fixed(r.std_error_pct, 6) << ','
        << fixed(r.mean_sparsity_pct, 6) << ',' << fixed(r.std_sparsity_pct, 6) << ',' << fixed(r.stability, 6)
        << '\n';
  }
}

void write_aggregate_table(std::ostream& out, const std::vector<AggregateRow>& rows) {
  const std::vector<std::string> header = {"algorithm", "runs", "error %", "(std)", "nonzero %", "(std)", "kappa"};
  std::vector<std::vector<std::string>> cells;
  for (const auto& r : rows) {
    cells.push_back({r.algo, std::to_string(r.runs), fixed(r.mean_error_pct, 2), fixed(r.std_error_pct, 2),
                     fixed(r.mean_sparsity_pct, 2), fixed(r.std_sparsity_pct, 2), fixed(r.stability, 2)});
  }
  std::vector<std::size_t> width(header.size());
  for (std::size_t c = 0; c < header.size(); ++c) {
    width[c] = header[c].size();
    for (const auto& row : cells) {
      width[c] = std::max(width[c], row[c].size());
    }
  }
  auto emit = [&](const std::vector<std::string>& row) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c == 0) {
        out << std::left << std::setw(static_cast<int>(width[c])) << row[c];
      } else {
        out << "  " << std::right << std::setw(static_cast<int>(width[c])) << row[c];
      }
    }
    out << '\n';
  };
  emit(header);
  std::size_t total = 0;
  for (auto w : width) {
    total += w + 2;
  }
  out << std::string(total - 2, '-') << '\n';
  for (const auto& row : cells) {
    emit(row);
  }
}

}  // namespace stabsgd
