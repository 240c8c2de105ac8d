#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "stabsgd/feature_set.hpp"
#include "stabsgd/stability.hpp"

namespace stabsgd {

struct AnnealConfig {
  double beta0 = 0.7;  // maximum rejection rate, in [0, 1]
  double gamma = 0.0;  // annealing rate; >0 exponential, 0 linear, <0 logarithmic
  std::size_t K0 = 5;  // initial burst size
  double alpha = 1.0;  // burst-size annealing rate, > 0
  std::size_t K_max = 1000;

  void validate() const;
};

/// Rejection-rate annealing function phi(d):
///   gamma >= 0: beta0 * (exp(-gamma d) - d exp(-gamma))
///   gamma <  0: beta0 * log(1 - gamma (1 - d)) / log(1 - gamma)
/// phi(0) = beta0 and phi(1) = 0.
double anneal_rejection(double d, double beta0, double gamma);
inline double anneal_rejection(double d, const AnnealConfig& cfg) {
  return anneal_rejection(d, cfg.beta0, cfg.gamma);
}

/// Lower empirical beta-quantile of `magnitudes`: the smallest element q
/// with |{m <= q}| / |S| >= beta. beta == 0 gives 0; an empty set gives
/// `fallback`.
double adaptive_gravity(std::span<const double> magnitudes, double beta, double fallback);

/// Collects the per-update magnitudes of features inside `omega`.
std::vector<double> gravity_candidates(const StageTally& tally, const FeatureSet& omega);

/// max(K0, ceil(K0 log(1 / (alpha d)))), capped at K_max; d == 0 gives K_max.
std::size_t anneal_burst_size(double d_prev, const AnnealConfig& cfg);

}  // namespace stabsgd
