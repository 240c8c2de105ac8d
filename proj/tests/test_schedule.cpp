#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "helpers.hpp"
#include "stabsgd/schedule.hpp"

using namespace stabsgd;

namespace {

// Smallest element whose at-or-below fraction reaches beta.
double scan_quantile(const std::vector<double>& s, double beta) {
  if (beta == 0.0) return 0.0;
  double best = INFINITY;
  for (double q : s) {
    std::size_t below = 0;
    for (double m : s) below += m <= q ? 1 : 0;
    if (static_cast<double>(below) / static_cast<double>(s.size()) >= beta) best = std::min(best, q);
  }
  return best;
}

}  // namespace

TEST_CASE("annealing examples") {
  for (double gamma : {-7.0, -3.0, 0.0, 2.0}) {
    CHECK(anneal_rejection(0.0, 0.7, gamma) == doctest::Approx(0.7).epsilon(1e-12));
    CHECK(std::fabs(anneal_rejection(1.0, 0.7, gamma)) < 1e-12);
  }
  CHECK(anneal_rejection(0.4, 0.7, 0.0) == doctest::Approx(0.42).epsilon(1e-12));
  CHECK(anneal_rejection(0.5, 0.8, -1.0) == doctest::Approx(0.8 * std::log(1.5) / std::log(2.0)).epsilon(1e-12));
  CHECK(anneal_rejection(0.5, 0.8, 1.0) ==
        doctest::Approx(0.8 * (std::exp(-0.5) - 0.5 * std::exp(-1.0))).epsilon(1e-12));
  CHECK_THROWS_AS(anneal_rejection(1.5, 0.7, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(anneal_rejection(-0.1, 0.7, 0.0), std::invalid_argument);
}

TEST_CASE("annealing stays within bounds and is continuous") {
  for (double gamma : {-7.0, -5.0, -3.0, -1.0, 0.0, 1.0, 3.0}) {
    double prev = anneal_rejection(0.0, 0.9, gamma);
    for (int i = 1; i <= 1000; ++i) {
      const double b = anneal_rejection(i / 1000.0, 0.9, gamma);
      CHECK(b >= 0.0);
      CHECK(b <= 0.9);
      CHECK(std::fabs(b - prev) < 0.05);
      prev = b;
    }
  }
}

TEST_CASE("adaptive gravity examples") {
  const std::vector<double> s{0.1, 0.2, 0.3, 0.4};
  CHECK(adaptive_gravity(s, 0.5, 9.0) == 0.2);
  CHECK(adaptive_gravity(s, 0.0, 9.0) == 0.0);
  CHECK(adaptive_gravity(s, 1.0, 9.0) == 0.4);
  CHECK(adaptive_gravity({}, 0.5, 0.03) == 0.03);
  CHECK_THROWS_AS(adaptive_gravity(s, 1.2, 0.0), std::invalid_argument);
}

TEST_CASE("adaptive gravity matches an exhaustive scan") {
  Rng rng(17);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 1 + rng.uniform_index(40);
    std::vector<double> s(n);
    for (auto& v : s) v = rng.bernoulli(0.2) ? 0.0 : std::round(rng.uniform(0.0, 10.0)) / 10.0;
    const double beta = rng.bernoulli(0.2) ? static_cast<double>(rng.uniform_index(n + 1)) / n : rng.uniform01();
    const double g = adaptive_gravity(s, beta, -1.0);
    CHECK(g == scan_quantile(s, beta));
    CHECK((g == 0.0 || std::find(s.begin(), s.end(), g) != s.end()));
  }
}

TEST_CASE("gravity candidates filter on the stable set") {
  StageTally t(3);
  t.update_magnitudes = {{0, 0.1}, {1, 0.2}, {2, 0.3}, {0, 0.4}};
  const auto c = gravity_candidates(t, FeatureSet(3, {0, 2}));
  CHECK(c == std::vector<double>{0.1, 0.3, 0.4});
}

TEST_CASE("burst size annealing examples") {
  AnnealConfig cfg;
  cfg.K0 = 5;
  cfg.alpha = 1.0;
  CHECK(anneal_burst_size(1.0, cfg) == 5);
  CHECK(anneal_burst_size(std::exp(-1.0), cfg) == 5);
  CHECK(anneal_burst_size(0.05, cfg) == 15);
  CHECK(anneal_burst_size(0.0, cfg) == cfg.K_max);
  cfg.K_max = 10;
  CHECK(anneal_burst_size(0.05, cfg) == 10);
}

TEST_CASE("burst size is non-increasing in d and at least K0") {
  AnnealConfig cfg;
  cfg.K0 = 3;
  cfg.alpha = 0.5;
  std::size_t prev = anneal_burst_size(0.0, cfg);
  for (int i = 1; i <= 1000; ++i) {
    const std::size_t k = anneal_burst_size(i / 1000.0, cfg);
    CHECK(k >= cfg.K0);
    CHECK(k <= prev);
    prev = k;
  }
}

TEST_CASE("anneal config validation") {
  AnnealConfig cfg;
  CHECK_NOTHROW(cfg.validate());
  cfg.beta0 = 1.5;
  CHECK_THROWS(cfg.validate());
  cfg = AnnealConfig{};
  cfg.K0 = 0;
  CHECK_THROWS(cfg.validate());
  cfg = AnnealConfig{};
  cfg.alpha = 0.0;
  CHECK_THROWS(cfg.validate());
}
