#pragma once

#include <cstdint>
#include <span>
#include <string_view>

#include "stabsgd/losses.hpp"
#include "stabsgd/sgd_core.hpp"

namespace stabsgd {

enum class BaselineKind { Sgd, Truncated, Rda, Fobos };

BaselineKind parse_baseline(std::string_view name);
std::string_view baseline_name(BaselineKind kind);

/// Interim FOBOS step size: eta0/sqrt(t+1) (Next) or eta0/sqrt(t) (Current).
enum class FobosHalfStep { Next, Current };

struct BaselineConfig {
  BaselineKind kind = BaselineKind::Sgd;
  double eta = 0.1;          // sgd, truncated
  double g0 = 0.005;         // truncated: base gravity
  std::size_t K = 5;         // truncated: burst size
  double lambda = 1e-4;      // rda
  double gamma_rda = 5000.0; // rda
  double rho = 0.005;        // rda
  double lambda_fobos = 1e-4;
  double fobos_eta0 = 1.0;   // fobos: eta_t = fobos_eta0 / sqrt(t)
  FobosHalfStep fobos_half_step = FobosHalfStep::Next;
  double passes = 1.0;
  std::uint64_t seed = 1;

  void validate() const;
};

/// passes * n plain SGD steps over permute(data, seed), cycling.
DenseVector standard_sgd(const Dataset& data, LossKind loss, const BaselineConfig& cfg);

/// Repeated uniform-gravity bursts of K steps; a trailing partial burst of
/// K' < K steps is truncated with g0 * K'.
DenseVector truncated_gradient(const Dataset& data, LossKind loss, const BaselineConfig& cfg);

/// Closed-form L1 RDA weights for average subgradient `gbar` after t steps:
///   w_j = 0 if |gbar_j| <= lambda_t, else -(sqrt(t)/gamma)(gbar_j - lambda_t sgn(gbar_j)),
/// with lambda_t = lambda + gamma * rho / sqrt(t).
DenseVector rda_weights(std::span<const double> gbar, std::size_t t, double lambda, double gamma, double rho);

/// Regularized dual averaging with the enhanced L1 regularizer.
DenseVector rda_l1(const Dataset& data, LossKind loss, const BaselineConfig& cfg);

/// Forward-backward splitting with eta_t = fobos_eta0 / sqrt(t).
DenseVector fobos_l1(const Dataset& data, LossKind loss, const BaselineConfig& cfg);

DenseVector run_baseline(const Dataset& data, LossKind loss, const BaselineConfig& cfg);

}  // namespace stabsgd
