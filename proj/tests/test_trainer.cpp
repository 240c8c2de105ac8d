#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "helpers.hpp"
#include "stabsgd/baselines.hpp"
#include "stabsgd/data_io.hpp"
#include "stabsgd/trainer.hpp"

using namespace stabsgd;

namespace {

TrainConfig degenerate() {
  TrainConfig cfg;
  cfg.M = 1;
  cfg.n_K = 1;
  cfg.pi0 = 0.0;
  cfg.beta0 = 0.0;
  cfg.g0_init = 0.0;
  cfg.convergence_tol = 0.0;
  return cfg;
}

}  // namespace

TEST_CASE("paths are seeded permutations") {
  const Dataset d = testing::random_dataset(30, 6, 0.4, 1);
  const auto one = make_paths(d, 1, 7);
  REQUIRE(one.size() == 1);
  CHECK(one[0] == permute(d, 7));
  CHECK(make_paths(d, 4, 7) == make_paths(d, 4, 7));
  const auto many = make_paths(d, 16, 3);
  REQUIRE(many.size() == 16);
  auto key = [](const Dataset& x) {
    std::vector<std::vector<Index>> rows;
    for (const auto& s : x.samples()) rows.emplace_back(s.x.indices().begin(), s.x.indices().end());
    std::sort(rows.begin(), rows.end());
    return rows;
  };
  for (std::size_t m = 1; m < many.size(); ++m) {
    CHECK_FALSE(many[m] == many[0]);
    CHECK(key(many[m]) == key(many[0]));
  }
}

TEST_CASE("degenerate single stage equals plain sgd") {
  const Dataset d = testing::planted_dataset(50, 20, 0.3, 2);
  TrainConfig cfg = degenerate();
  cfg.max_stages = 1;
  cfg.seed = 5;
  const TrainResult r = train(d, LossKind::Hinge, cfg);
  DenseVector w(20, 0.0);
  const Dataset path = permute(d, 5);
  for (std::size_t t = 0; t < cfg.K; ++t) sgd_step(w, path[t], cfg.eta, LossKind::Hinge);
  CHECK(r.w_bar == w);
  CHECK(r.history.size() == 1);
}

TEST_CASE("degenerate multi-pass run equals standard sgd") {
  const Dataset d = testing::planted_dataset(100, 30, 0.2, 3);
  TrainConfig cfg = degenerate();
  cfg.passes = 3;
  cfg.seed = 11;
  BaselineConfig base;
  base.passes = 3;
  base.seed = 11;
  base.eta = cfg.eta;
  CHECK(train(d, LossKind::Logistic, cfg).w_bar == standard_sgd(d, LossKind::Logistic, base));
}

TEST_CASE("without purging or gravity the trainer averages independent sgd runs") {
  const Dataset d = testing::planted_dataset(60, 25, 0.25, 4);
  TrainConfig cfg = degenerate();
  cfg.M = 4;
  cfg.n_K = 3;
  cfg.passes = 2;
  const TrainResult r = train(d, LossKind::Hinge, cfg);
  DenseVector mean(25, 0.0);
  for (std::size_t m = 0; m < cfg.M; ++m) {
    BaselineConfig base;
    base.passes = 2;
    base.eta = cfg.eta;
    base.seed = path_seed(cfg.seed, m);
    const DenseVector w = standard_sgd(d, LossKind::Hinge, base);
    for (std::size_t j = 0; j < w.size(); ++j) mean[j] += w[j] / static_cast<double>(cfg.M);
  }
  for (std::size_t j = 0; j < mean.size(); ++j) CHECK(r.w_bar[j] == doctest::Approx(mean[j]).epsilon(1e-12));
}

TEST_CASE("stable sets shrink and bound the model support") {
  const Dataset d = testing::planted_dataset(200, 60, 0.15, 5);
  TrainConfig cfg;
  cfg.M = 4;
  cfg.g0_init = 0.01;
  cfg.passes = 10;
  cfg.record_trace = true;
  const TrainResult r = train(d, LossKind::Hinge, cfg);
  REQUIRE(r.traces.size() == r.history.size());
  FeatureSet prev = FeatureSet::full(60);
  for (const auto& t : r.traces) {
    const FeatureSet cur(60, t.omega);
    CHECK(cur.is_subset_of(prev));
    prev = cur;
  }
  CHECK(prev == r.omega_hat);
  CHECK(r.omega_hat.size() < 60);
  for (std::size_t j = 0; j < 60; ++j) {
    if (r.w_bar[j] != 0.0) CHECK(r.omega_hat.contains(static_cast<Index>(j)));
  }
  for (const auto& h : r.history) {
    CHECK(h.samples_per_path <= 10 * d.size());
    CHECK(h.beta >= 0.0);
    CHECK(h.beta <= cfg.beta0);
    CHECK(h.path_sparsity.size() == cfg.M);
  }
}

TEST_CASE("results do not depend on thread count") {
  const Dataset d = testing::planted_dataset(120, 40, 0.2, 6);
  TrainConfig cfg;
  cfg.M = 6;
  cfg.g0_init = 0.01;
  cfg.passes = 5;
  cfg.threads = 1;
  const TrainResult a = train(d, LossKind::Logistic, cfg);
  cfg.threads = 4;
  const TrainResult b = train(d, LossKind::Logistic, cfg);
  CHECK(a.w_bar == b.w_bar);
  CHECK(a.omega_hat == b.omega_hat);
  CHECK(a.history.size() == b.history.size());
}

TEST_CASE("convergence stops early") {
  const Dataset d = testing::planted_dataset(80, 20, 0.3, 7);
  TrainConfig cfg;
  cfg.M = 2;
  cfg.eta = 1e-3;
  cfg.convergence_tol = 0.5;
  const TrainResult r = train(d, LossKind::Hinge, cfg);
  CHECK(r.converged);
  CHECK(r.history.back().relative_change < 0.5);
}

TEST_CASE("annealed burst sizes") {
  const Dataset d = testing::planted_dataset(150, 50, 0.2, 8);
  TrainConfig cfg;
  cfg.M = 2;
  cfg.alpha = 1.0;
  cfg.g0_init = 0.02;
  cfg.pi0 = 0.9;
  cfg.passes = 20;
  const TrainResult r = train(d, LossKind::Hinge, cfg);
  for (std::size_t s = 1; s < r.history.size(); ++s) {
    CHECK(r.history[s].K >= cfg.K);
    CHECK(r.history[s].K >= r.history[s - 1].K);
  }
}

TEST_CASE("invalid configurations") {
  const Dataset d = testing::planted_dataset(20, 5, 0.5, 9);
  TrainConfig cfg;
  cfg.M = 0;
  CHECK_THROWS_AS(train(d, LossKind::Hinge, cfg), std::invalid_argument);
  cfg = TrainConfig{};
  cfg.pi0 = 1.1;
  CHECK_THROWS_AS(train(d, LossKind::Hinge, cfg), std::invalid_argument);
  cfg = TrainConfig{};
  cfg.eta = 0.0;
  CHECK_THROWS_AS(train(d, LossKind::Hinge, cfg), std::invalid_argument);
  cfg = TrainConfig{};
  cfg.passes = 0.1;
  CHECK_THROWS_AS(train(d, LossKind::Hinge, cfg), std::invalid_argument);
  CHECK_THROWS_AS(train(Dataset{}, LossKind::Hinge, TrainConfig{}), std::invalid_argument);
}

TEST_CASE("divergence is reported") {
  const Dataset d = parse_libsvm("+1 1:1e300\n-1 1:1e300\n");
  TrainConfig cfg;
  cfg.M = 1;
  cfg.eta = 1e10;
  cfg.max_stages = 5;
  CHECK_THROWS_AS(train(d, LossKind::Hinge, cfg), DivergenceError);
}
