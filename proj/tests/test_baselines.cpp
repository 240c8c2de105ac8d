#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "stabsgd/baselines.hpp"
#include "stabsgd/data_io.hpp"
#include "stabsgd/sgd_core.hpp"

using namespace stabsgd;

TEST_CASE("standard sgd examples") {
  const Dataset d = testing::planted_dataset(40, 10, 0.3, 1);
  BaselineConfig cfg;
  cfg.passes = 0;
  CHECK(standard_sgd(d, LossKind::Hinge, cfg) == DenseVector(10, 0.0));

  // After the first step the single sample sits outside the margin.
  const Dataset one = parse_libsvm("+1 1:2\n");
  cfg.passes = 1;
  cfg.eta = 1.0;
  const DenseVector w1 = standard_sgd(one, LossKind::Hinge, cfg);
  cfg.passes = 5;
  CHECK(standard_sgd(one, LossKind::Hinge, cfg) == w1);
  CHECK(w1[0] == 2.0);

  cfg = BaselineConfig{};
  cfg.passes = 2;
  cfg.seed = 4;
  DenseVector w(10, 0.0);
  const Dataset order = permute(d, 4);
  for (int pass = 0; pass < 2; ++pass) {
    for (const auto& z : order.samples()) sgd_step(w, z, cfg.eta, LossKind::Hinge);
  }
  CHECK(standard_sgd(d, LossKind::Hinge, cfg) == w);
}

TEST_CASE("truncated gradient examples") {
  const Dataset d = testing::planted_dataset(60, 15, 0.3, 2);
  BaselineConfig cfg;
  cfg.passes = 3;
  cfg.g0 = 0.0;
  CHECK(truncated_gradient(d, LossKind::Logistic, cfg) == standard_sgd(d, LossKind::Logistic, cfg));

  // Two disjoint samples: steps give [0.5, -0.5], then shrink by g0*K = 0.2.
  const Dataset two = parse_libsvm("+1 1:1\n-1 2:1\n");
  BaselineConfig hand;
  hand.eta = 0.5;
  hand.g0 = 0.1;
  hand.K = 2;
  hand.passes = 1;
  const DenseVector w = truncated_gradient(two, LossKind::Hinge, hand);
  CHECK(w[0] == doctest::Approx(0.3).epsilon(1e-15));
  CHECK(w[1] == doctest::Approx(-0.3).epsilon(1e-15));

  cfg.g0 = 0.01;
  const DenseVector sparse = truncated_gradient(d, LossKind::Hinge, cfg);
  const DenseVector dense = standard_sgd(d, LossKind::Hinge, cfg);
  auto nnz = [](const DenseVector& v) { return std::count_if(v.begin(), v.end(), [](double x) { return x != 0.0; }); };
  CHECK(nnz(sparse) < nnz(dense));
}

TEST_CASE("truncated gradient shrinks a trailing partial burst by its length") {
  const Dataset three = parse_libsvm("+1 1:1\n-1 2:1\n+1 3:1\n");
  BaselineConfig cfg;
  cfg.eta = 0.5;
  cfg.g0 = 0.1;
  cfg.K = 2;
  cfg.passes = 1;
  const DenseVector w = truncated_gradient(three, LossKind::Hinge, cfg);
  // Whichever sample lands last is shrunk by g0 * 1 only.
  int shrunk_once = 0;
  for (double v : w) shrunk_once += std::fabs(std::fabs(v) - 0.4) < 1e-12 ? 1 : 0;
  CHECK(shrunk_once == 1);
}

TEST_CASE("rda closed form") {
  CHECK(rda_weights(DenseVector(3, 0.0), 1, 0.01, 1.0, 0.01) == DenseVector(3, 0.0));
  const DenseVector w = rda_weights(DenseVector{-1.0, 0.001}, 1, 0.01, 1.0, 0.01);
  CHECK(w[0] == doctest::Approx(0.98).epsilon(1e-12));
  CHECK(w[1] == 0.0);
  CHECK_THROWS_AS(rda_weights(DenseVector{1.0}, 1, 0.01, 0.0, 0.01), std::invalid_argument);
  Rng rng(3);
  for (int i = 0; i < 200; ++i) {
    const DenseVector g{rng.uniform(-0.1, 0.1)};
    const std::size_t t = 1 + rng.uniform_index(50);
    const double lt = 1e-3 + 5.0 * 0.005 / std::sqrt(static_cast<double>(t));
    CHECK((rda_weights(g, t, 1e-3, 5.0, 0.005)[0] == 0.0) == (std::fabs(g[0]) <= lt));
  }
}

TEST_CASE("rda running average matches direct summation") {
  const Dataset d = testing::planted_dataset(25, 8, 0.4, 3);
  BaselineConfig cfg;
  cfg.kind = BaselineKind::Rda;
  cfg.gamma_rda = 50.0;
  cfg.rho = 0.005;
  cfg.lambda = 1e-3;
  cfg.passes = 2;
  const Dataset order = permute(d, cfg.seed);
  std::vector<DenseVector> grads;
  DenseVector w(8, 0.0);
  for (std::size_t t = 1; t <= 50; ++t) {
    const Sample& z = order[(t - 1) % order.size()];
    const double G = loss_subgradient_scale(LossKind::Logistic, margin(w, z.x), z.y);
    DenseVector g(8, 0.0);
    for (std::size_t k = 0; k < z.x.nnz(); ++k) g[z.x.indices()[k]] = G * z.x.values()[k];
    grads.push_back(g);
    DenseVector mean(8, 0.0);
    for (const auto& gi : grads) {
      for (std::size_t j = 0; j < 8; ++j) mean[j] += gi[j];
    }
    for (double& m : mean) m /= static_cast<double>(t);
    w = rda_weights(mean, t, cfg.lambda, cfg.gamma_rda, cfg.rho);
  }
  const DenseVector got = rda_l1(d, LossKind::Logistic, cfg);
  for (std::size_t j = 0; j < 8; ++j) CHECK(got[j] == doctest::Approx(w[j]).epsilon(1e-12).scale(1e-12));
}

TEST_CASE("rda on all-zero data stays zero") {
  const Dataset d = parse_libsvm("+1\n-1\n+1\n", 4);
  BaselineConfig cfg;
  cfg.passes = 3;
  CHECK(rda_l1(d, LossKind::Logistic, cfg) == DenseVector(4, 0.0));
  cfg.gamma_rda = -1.0;
  CHECK_THROWS_AS(rda_l1(d, LossKind::Logistic, cfg), std::invalid_argument);
}

TEST_CASE("fobos examples") {
  const Dataset one = parse_libsvm("+1 1:1\n");
  BaselineConfig cfg;
  cfg.lambda_fobos = 0.1;
  cfg.passes = 1;
  CHECK(fobos_l1(one, LossKind::Hinge, cfg)[0] == doctest::Approx(1.0 - 0.1 / std::sqrt(2.0)).epsilon(1e-12));
  CHECK(fobos_l1(one, LossKind::Hinge, cfg)[0] == doctest::Approx(0.92929).epsilon(1e-5));

  const Dataset far = parse_libsvm("+1\n", 1);
  CHECK(fobos_l1(far, LossKind::Hinge, cfg)[0] == 0.0);

  // lambda = 0 reduces to sgd with a 1/sqrt(t) rate.
  const Dataset d = testing::planted_dataset(30, 6, 0.4, 4);
  cfg.lambda_fobos = 0.0;
  cfg.passes = 2;
  DenseVector w(6, 0.0);
  const Dataset order = permute(d, cfg.seed);
  for (std::size_t t = 1; t <= 60; ++t) sgd_step(w, order[(t - 1) % 30], 1.0 / std::sqrt(double(t)), LossKind::Logistic);
  CHECK(fobos_l1(d, LossKind::Logistic, cfg) == w);
}

TEST_CASE("fobos steps satisfy the prox condition") {
  const Dataset d = testing::planted_dataset(20, 5, 0.5, 5);
  const Dataset order = permute(d, 1);
  const double lambda = 0.05;
  DenseVector w(5, 0.0);
  for (std::size_t t = 1; t <= 20; ++t) {
    DenseVector half = w;
    sgd_step(half, order[t - 1], 1.0 / std::sqrt(double(t)), LossKind::Hinge);
    const double s = lambda / std::sqrt(double(t + 1));
    BaselineConfig cfg;
    cfg.lambda_fobos = lambda;
    cfg.passes = static_cast<double>(t) / 20.0;
    const DenseVector next = fobos_l1(d, LossKind::Hinge, cfg);
    for (std::size_t j = 0; j < 5; ++j) {
      auto obj = [&](double v) { return 0.5 * (v - half[j]) * (v - half[j]) + s * std::fabs(v); };
      for (double delta : {-1e-3, -1e-6, 1e-6, 1e-3}) CHECK(obj(next[j]) <= obj(next[j] + delta) + 1e-15);
    }
    w = next;
  }
}

TEST_CASE("baselines are deterministic and dispatch by kind") {
  const Dataset d = testing::planted_dataset(40, 12, 0.3, 6);
  for (const char* name : {"sgd", "truncated", "rda", "fobos"}) {
    BaselineConfig cfg;
    cfg.kind = parse_baseline(name);
    cfg.passes = 2;
    CHECK(baseline_name(cfg.kind) == name);
    CHECK(run_baseline(d, LossKind::Hinge, cfg) == run_baseline(d, LossKind::Hinge, cfg));
  }
  CHECK_THROWS_AS(parse_baseline("adagrad"), std::invalid_argument);
  BaselineConfig bad;
  bad.K = 0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}
