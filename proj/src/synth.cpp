#include "stabsgd/synth.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "stabsgd/rng.hpp"

namespace stabsgd {

void SynthConfig::validate() const {
  if (p == 0) {
    throw std::invalid_argument("synth: p must be positive");
  }
  if (!(density_lo > 0.0 && density_lo <= density_hi && density_hi <= 1.0)) {
    throw std::invalid_argument("synth: density range must satisfy 0 < lo <= hi <= 1");
  }
  if (support > p) {
    throw std::invalid_argument("synth: support larger than p");
  }
  if (!(noise >= 0.0)) {
    throw std::invalid_argument("synth: noise must be nonnegative");
  }
}

SynthProblem make_problem(const SynthConfig& cfg) {
  cfg.validate();
  Rng rng(mix_seed(cfg.seed));
  SynthProblem prob;
  prob.densities.resize(cfg.p);
  const double log_lo = std::log(cfg.density_lo);
  const double log_hi = std::log(cfg.density_hi);
  for (double& d : prob.densities) {
    d = cfg.density_lo == cfg.density_hi ? cfg.density_lo : std::exp(rng.uniform(log_lo, log_hi));
  }
  // Partial Fisher-Yates for the support.
  std::vector<Index> all(cfg.p);
  for (std::size_t j = 0; j < cfg.p; ++j) {
    all[j] = static_cast<Index>(j);
  }
  for (std::size_t i = 0; i < cfg.support; ++i) {
    const auto r = i + static_cast<std::size_t>(rng.uniform_index(cfg.p - i));
    std::swap(all[i], all[r]);
  }
  prob.support.assign(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(cfg.support));
  std::sort(prob.support.begin(), prob.support.end());
  prob.w_star.assign(cfg.p, 0.0);
  for (Index j : prob.support) {
    prob.w_star[j] = rng.bernoulli(0.5) ? 1.0 : -1.0;
  }
  return prob;
}

Dataset SynthProblem::sample(std::size_t n, std::uint64_t seed, double noise) const {
  const std::size_t p = densities.size();
  Rng rng(mix_seed(seed ^ 0x5851f42d4c957f2dULL));
  std::vector<Sample> samples;
  samples.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    SparseVector x(p);
    double f = 0.0;
    for (std::size_t j = 0; j < p; ++j) {
      if (densities[j] >= 1.0 || rng.bernoulli(densities[j])) {
        double v = rng.normal();
        while (v == 0.0) {
          v = rng.normal();
        }
        x.push_back(static_cast<Index>(j), v);
        f += w_star[j] * v;
      }
    }
    if (noise > 0.0) {
      f += noise * rng.normal();
    }
    samples.push_back(Sample{std::move(x), f >= 0.0 ? Label::Positive : Label::Negative});
  }
  return Dataset(std::move(samples), p);
}

Dataset synthesize(const SynthConfig& cfg) {
  return make_problem(cfg).sample(cfg.n, cfg.seed, cfg.noise);
}

}  // namespace stabsgd
