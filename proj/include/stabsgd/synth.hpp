#pragma once

#include <cstdint>
#include <vector>

#include "stabsgd/sparse.hpp"

namespace stabsgd {

/// Planted-support sparse classification problem.
struct SynthConfig {
  std::size_t p = 1000;
  std::size_t n = 500;
  double density_lo = 0.005;  // per-feature density, log-uniform in [lo, hi]
  double density_hi = 0.5;
  std::size_t support = 10;   // true features, weights +-1
  double noise = 0.1;         // sd of Gaussian label noise on w*^T x
  std::uint64_t seed = 1;

  void validate() const;
};

struct SynthProblem {
  std::vector<double> densities;  // per feature
  std::vector<Index> support;     // sorted
  DenseVector w_star;

  /// Draws n samples: x_j ~ Bernoulli(density_j) * N(0, 1), and
  /// y = sign(w*^T x + noise * N(0, 1)) with sign(0) = +1.
  Dataset sample(std::size_t n, std::uint64_t seed, double noise) const;
};

/// Draws densities and the planted support.
SynthProblem make_problem(const SynthConfig& cfg);

/// make_problem(cfg).sample(cfg.n, ...).
Dataset synthesize(const SynthConfig& cfg);

}  // namespace stabsgd
