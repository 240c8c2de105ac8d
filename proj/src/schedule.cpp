#include "stabsgd/schedule.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace stabsgd {

void AnnealConfig::validate() const {
  if (!(beta0 >= 0.0 && beta0 <= 1.0)) {
    throw std::invalid_argument("beta0 must lie in [0, 1]");
  }
  if (!std::isfinite(gamma)) {
    throw std::invalid_argument("gamma must be finite");
  }
  if (K0 < 1) {
    throw std::invalid_argument("K0 must be at least 1");
  }
  if (!(alpha > 0.0)) {
    throw std::invalid_argument("alpha must be positive");
  }
  if (K_max < K0) {
    throw std::invalid_argument("K_max must be at least K0");
  }
}

double anneal_rejection(double d, double beta0, double gamma) {
  if (!(d >= 0.0 && d <= 1.0)) {
    throw std::invalid_argument("anneal_rejection: d must lie in [0, 1]");
  }
  double beta = 0.0;
  if (gamma >= 0.0) {
    beta = beta0 * (std::exp(-gamma * d) - d * std::exp(-gamma));
  } else {
    beta = beta0 * std::log1p(-gamma * (1.0 - d)) / std::log1p(-gamma);
  }
  // Rounding can leave a tiny negative residue at d = 1.
  return std::clamp(beta, 0.0, beta0);
}

double adaptive_gravity(std::span<const double> magnitudes, double beta, double fallback) {
  if (!(beta >= 0.0 && beta <= 1.0)) {
    throw std::invalid_argument("adaptive_gravity: beta must lie in [0, 1]");
  }
  if (magnitudes.empty()) {
    return fallback;
  }
  if (beta == 0.0) {
    return 0.0;
  }
  const std::size_t n = magnitudes.size();
  const auto covers = [&](std::size_t k) { return static_cast<double>(k) / static_cast<double>(n) >= beta; };
  // Smallest k with k / n >= beta, robust to rounding in beta * n.
  auto k = static_cast<std::size_t>(std::ceil(beta * static_cast<double>(n)));
  k = std::clamp<std::size_t>(k, 1, n);
  while (k > 1 && covers(k - 1)) {
    --k;
  }
  while (k < n && !covers(k)) {
    ++k;
  }
  std::vector<double> sorted(magnitudes.begin(), magnitudes.end());
  std::nth_element(sorted.begin(), sorted.begin() + static_cast<std::ptrdiff_t>(k - 1), sorted.end());
  return sorted[k - 1];
}

std::vector<double> gravity_candidates(const StageTally& tally, const FeatureSet& omega) {
  std::vector<double> out;
  out.reserve(tally.update_magnitudes.size());
  for (const auto& [j, m] : tally.update_magnitudes) {
    if (omega.contains(j)) {
      out.push_back(m);
    }
  }
  return out;
}

std::size_t anneal_burst_size(double d_prev, const AnnealConfig& cfg) {
  if (!(d_prev >= 0.0 && d_prev <= 1.0)) {
    throw std::invalid_argument("anneal_burst_size: d must lie in [0, 1]");
  }
  if (d_prev == 0.0) {
    return cfg.K_max;
  }
  const double raw = static_cast<double>(cfg.K0) * std::log(1.0 / (cfg.alpha * d_prev));
  // Absorb last-bit noise so exact integers (e.g. d = 1/e) do not round up.
  const double k = std::ceil(raw - 1e-9);
  if (!(k > static_cast<double>(cfg.K0))) {
    return cfg.K0;
  }
  if (k >= static_cast<double>(cfg.K_max)) {
    return cfg.K_max;
  }
  return static_cast<std::size_t>(k);
}

}  // namespace stabsgd
