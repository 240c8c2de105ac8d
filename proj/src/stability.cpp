#include "stabsgd/stability.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include <nlohmann/json.hpp>

namespace stabsgd {

void StageTally::add(const BurstOutput& burst) {
  const std::size_t p = dim();
  if (burst.k_tilde.size() != p || burst.w_hat.size() != p || burst.delta_w.size() != p) {
    throw std::invalid_argument("StageTally: burst dimension mismatch");
  }
  for (std::size_t j = 0; j < p; ++j) {
    const std::uint32_t k = burst.k_tilde[j];
    if (k == 0) {
      continue;
    }
    ++informative_bursts[j];
    informative_updates[j] += k;
    if (std::fabs(burst.w_hat[j]) > 0.0) {
      ++survived_bursts[j];
    }
    update_magnitudes.emplace_back(static_cast<Index>(j), std::fabs(burst.delta_w[j]) / static_cast<double>(k));
  }
  ++bursts;
}

void StageTally::merge(const StageTally& other) {
  if (other.dim() != dim()) {
    throw std::invalid_argument("StageTally: merge dimension mismatch");
  }
  for (std::size_t j = 0; j < dim(); ++j) {
    informative_bursts[j] += other.informative_bursts[j];
    survived_bursts[j] += other.survived_bursts[j];
    informative_updates[j] += other.informative_updates[j];
  }
  update_magnitudes.insert(update_magnitudes.end(), other.update_magnitudes.begin(), other.update_magnitudes.end());
  bursts += other.bursts;
}

DenseVector selection_probability(const StageTally& tally) {
  DenseVector prob(tally.dim(), 1.0);
  for (std::size_t j = 0; j < tally.dim(); ++j) {
    if (tally.informative_updates[j] > 0) {
      prob[j] = static_cast<double>(tally.survived_bursts[j]) / static_cast<double>(tally.informative_bursts[j]);
    }
  }
  return prob;
}

DenseVector selection_probability(std::span<const BurstOutput> bursts) {
  if (bursts.empty()) {
    throw std::invalid_argument("selection_probability: no bursts");
  }
  StageTally tally(bursts.front().w_hat.size());
  for (const auto& b : bursts) {
    tally.add(b);
  }
  return selection_probability(tally);
}

ProbabilityUnit parse_probability_unit(std::string_view name) {
  if (name == "bursts") {
    return ProbabilityUnit::Bursts;
  }
  if (name == "updates") {
    return ProbabilityUnit::Updates;
  }
  throw std::invalid_argument("unknown probability unit '" + std::string(name) + "' (expected bursts or updates)");
}

std::string_view probability_unit_name(ProbabilityUnit unit) {
  return unit == ProbabilityUnit::Bursts ? "bursts" : "updates";
}

DenseVector selection_probability_carryover(SelectionStats& stats, const StageTally& stage, double delta_K) {
  if (!(delta_K >= 0.0)) {
    throw std::invalid_argument("selection_probability_carryover: delta_K must be nonnegative");
  }
  const std::size_t p = stage.dim();
  if (stats.kappa_acc.size() != p || stats.b_acc.size() != p) {
    throw std::invalid_argument("selection_probability_carryover: dimension mismatch");
  }
  const auto& kappa_stage =
      stats.unit == ProbabilityUnit::Bursts ? stage.informative_bursts : stage.informative_updates;
  DenseVector prob(p, 1.0);
  for (std::size_t j = 0; j < p; ++j) {
    const bool carry = static_cast<double>(stats.kappa_acc[j]) < delta_K;
    stats.kappa_acc[j] = (carry ? stats.kappa_acc[j] : 0) + kappa_stage[j];
    stats.b_acc[j] = (carry ? stats.b_acc[j] : 0) + stage.survived_bursts[j];
    if (static_cast<double>(stats.kappa_acc[j]) > delta_K && stats.kappa_acc[j] > 0) {
      prob[j] = static_cast<double>(stats.b_acc[j]) / static_cast<double>(stats.kappa_acc[j]);
    }
  }
  return prob;
}

FeatureSet stable_set(std::span<const double> probability, double pi0, const FeatureSet& previous) {
  if (!(pi0 >= 0.0 && pi0 <= 1.0)) {
    throw std::invalid_argument("stable_set: pi0 must lie in [0, 1]");
  }
  if (probability.size() != previous.dim()) {
    throw std::invalid_argument("stable_set: probability length differs from feature dimension");
  }
  std::vector<Index> keep;
  keep.reserve(previous.size());
  for (Index j : previous.members()) {
    if (probability[j] >= pi0) {
      keep.push_back(j);
    }
  }
  return FeatureSet(previous.dim(), std::move(keep));
}

DenseVector purge(std::span<const double> w, const FeatureSet& omega) {
  if (w.size() != omega.dim()) {
    throw std::invalid_argument("purge: weight length differs from feature dimension");
  }
  DenseVector out(w.size(), 0.0);
  for (Index j : omega.members()) {
    out[j] = w[j];
  }
  return out;
}

namespace {

// Bursts are stored sparsely: only features with k > 0 or a nonzero weight.
nlohmann::json burst_to_json(const BurstOutput& b) {
  nlohmann::json entries = nlohmann::json::array();
  for (std::size_t j = 0; j < b.w_hat.size(); ++j) {
    if (b.k_tilde[j] != 0 || b.w_hat[j] != 0.0 || b.delta_w[j] != 0.0) {
      entries.push_back({j, b.k_tilde[j], b.w_hat[j], b.delta_w[j]});
    }
  }
  return entries;
}

BurstOutput burst_from_json(const nlohmann::json& j, std::size_t p) {
  BurstOutput b;
  b.w_hat.assign(p, 0.0);
  b.delta_w.assign(p, 0.0);
  b.k_tilde.assign(p, 0);
  for (const auto& e : j) {
    const auto idx = e.at(0).get<std::size_t>();
    if (idx >= p) {
      throw std::runtime_error("stage trace: feature index out of range");
    }
    b.k_tilde[idx] = e.at(1).get<std::uint32_t>();
    b.w_hat[idx] = e.at(2).get<double>();
    b.delta_w[idx] = e.at(3).get<double>();
  }
  return b;
}

}  // namespace

void write_stage_trace(std::ostream& out, const StageTrace& trace) {
  nlohmann::json j;
  j["stage"] = trace.stage;
  j["g0"] = trace.g0;
  j["dim"] = trace.probability.size();
  nlohmann::json paths = nlohmann::json::array();
  for (const auto& path : trace.bursts) {
    nlohmann::json bursts = nlohmann::json::array();
    for (const auto& b : path) {
      bursts.push_back(burst_to_json(b));
    }
    paths.push_back(std::move(bursts));
  }
  j["paths"] = std::move(paths);
  j["probability"] = trace.probability;
  j["omega"] = trace.omega;
  out << j.dump() << '\n';
}

std::vector<StageTrace> read_stage_traces(std::istream& in) {
  std::vector<StageTrace> traces;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) {
      continue;
    }
    const auto j = nlohmann::json::parse(line);
    StageTrace t;
    t.stage = j.at("stage").get<std::size_t>();
    t.g0 = j.at("g0").get<double>();
    const auto p = j.at("dim").get<std::size_t>();
    for (const auto& path : j.at("paths")) {
      std::vector<BurstOutput> bursts;
      for (const auto& b : path) {
        bursts.push_back(burst_from_json(b, p));
      }
      t.bursts.push_back(std::move(bursts));
    }
    t.probability = j.at("probability").get<DenseVector>();
    t.omega = j.at("omega").get<std::vector<Index>>();
    traces.push_back(std::move(t));
  }
  return traces;
}

}  // namespace stabsgd
