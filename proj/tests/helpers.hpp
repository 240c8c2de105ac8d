#pragma once

#include <cstdint>
#include <vector>

#include "stabsgd/rng.hpp"
#include "stabsgd/sparse.hpp"

namespace stabsgd::testing {

// Random sparse data; each entry present with probability `density`.
inline Dataset random_dataset(std::size_t n, std::size_t p, double density, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<Sample> samples;
  samples.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    SparseVector x(p);
    for (std::size_t j = 0; j < p; ++j) {
      if (rng.bernoulli(density)) {
        x.push_back(static_cast<Index>(j), rng.normal());
      }
    }
    const Label y = rng.bernoulli(0.5) ? Label::Positive : Label::Negative;
    samples.push_back({std::move(x), y});
  }
  return Dataset(std::move(samples), p);
}

// Labels follow a planted linear rule so learners have signal.
inline Dataset planted_dataset(std::size_t n, std::size_t p, double density, std::uint64_t seed) {
  Rng rng(seed);
  DenseVector w(p, 0.0);
  for (std::size_t j = 0; j < p; j += 7) {
    w[j] = rng.bernoulli(0.5) ? 1.0 : -1.0;
  }
  std::vector<Sample> samples;
  for (std::size_t i = 0; i < n; ++i) {
    SparseVector x(p);
    double f = 0.0;
    for (std::size_t j = 0; j < p; ++j) {
      if (rng.bernoulli(density)) {
        const double v = rng.normal();
        x.push_back(static_cast<Index>(j), v);
        f += w[j] * v;
      }
    }
    f += 0.1 * rng.normal();
    samples.push_back({std::move(x), f >= 0.0 ? Label::Positive : Label::Negative});
  }
  return Dataset(std::move(samples), p);
}

inline DenseVector random_dense(std::size_t p, std::uint64_t seed, double zero_fraction = 0.0) {
  Rng rng(seed);
  DenseVector w(p);
  for (auto& v : w) {
    v = rng.bernoulli(zero_fraction) ? 0.0 : rng.normal();
  }
  return w;
}

}  // namespace stabsgd::testing
