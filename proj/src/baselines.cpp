#include "stabsgd/baselines.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "stabsgd/data_io.hpp"

namespace stabsgd {

BaselineKind parse_baseline(std::string_view name) {
  if (name == "sgd") return BaselineKind::Sgd;
  if (name == "truncated") return BaselineKind::Truncated;
  if (name == "rda") return BaselineKind::Rda;
  if (name == "fobos") return BaselineKind::Fobos;
  throw std::invalid_argument("unknown baseline '" + std::string(name) + "'");
}

std::string_view baseline_name(BaselineKind kind) {
  switch (kind) {
    case BaselineKind::Sgd: return "sgd";
    case BaselineKind::Truncated: return "truncated";
    case BaselineKind::Rda: return "rda";
    case BaselineKind::Fobos: return "fobos";
  }
  return "?";
}

void BaselineConfig::validate() const {
  if (!(eta > 0.0)) throw std::invalid_argument("eta must be positive");
  if (!(g0 >= 0.0)) throw std::invalid_argument("g0 must be nonnegative");
  if (K < 1) throw std::invalid_argument("K must be at least 1");
  if (!(lambda >= 0.0)) throw std::invalid_argument("lambda must be nonnegative");
  if (!(gamma_rda > 0.0)) throw std::invalid_argument("gamma_rda must be positive");
  if (!(rho >= 0.0)) throw std::invalid_argument("rho must be nonnegative");
  if (!(lambda_fobos >= 0.0)) throw std::invalid_argument("lambda_fobos must be nonnegative");
  if (!(fobos_eta0 > 0.0)) throw std::invalid_argument("fobos_eta0 must be positive");
  if (!(passes >= 0.0)) throw std::invalid_argument("passes must be nonnegative");
}

namespace {

std::uint64_t total_steps(const Dataset& data, double passes) {
  return static_cast<std::uint64_t>(std::llround(passes * static_cast<double>(data.size())));
}

}  // namespace

DenseVector standard_sgd(const Dataset& data, LossKind loss, const BaselineConfig& cfg) {
  cfg.validate();
  DenseVector w(data.dim(), 0.0);
  const std::uint64_t steps = total_steps(data, cfg.passes);
  if (steps == 0) {
    return w;
  }
  const Dataset order = permute(data, cfg.seed);
  SampleStream stream(order);
  for (std::uint64_t t = 0; t < steps; ++t) {
    sgd_step(w, stream.next(), cfg.eta, loss);
  }
  return w;
}

DenseVector truncated_gradient(const Dataset& data, LossKind loss, const BaselineConfig& cfg) {
  cfg.validate();
  DenseVector w(data.dim(), 0.0);
  std::uint64_t remaining = total_steps(data, cfg.passes);
  if (remaining == 0) {
    return w;
  }
  const Dataset order = permute(data, cfg.seed);
  SampleStream stream(order);
  while (remaining > 0) {
    const std::size_t k = remaining < cfg.K ? static_cast<std::size_t>(remaining) : cfg.K;
    w = burst_uniform(w, cfg.g0, stream, BurstParams{loss, cfg.eta, k}).w_hat;
    remaining -= k;
  }
  return w;
}

DenseVector rda_weights(std::span<const double> gbar, std::size_t t, double lambda, double gamma, double rho) {
  if (!(gamma > 0.0)) {
    throw std::invalid_argument("rda: gamma must be positive");
  }
  if (t == 0) {
    throw std::invalid_argument("rda: t must be at least 1");
  }
  const double sqrt_t = std::sqrt(static_cast<double>(t));
  const double lambda_t = lambda + gamma * rho / sqrt_t;
  DenseVector w(gbar.size(), 0.0);
  for (std::size_t j = 0; j < gbar.size(); ++j) {
    const double g = gbar[j];
    if (std::fabs(g) > lambda_t) {
      w[j] = -(sqrt_t / gamma) * (g - lambda_t * (g > 0.0 ? 1.0 : -1.0));
    }
  }
  return w;
}

DenseVector rda_l1(const Dataset& data, LossKind loss, const BaselineConfig& cfg) {
  cfg.validate();
  const std::size_t p = data.dim();
  DenseVector w(p, 0.0);
  const std::uint64_t steps = total_steps(data, cfg.passes);
  if (steps == 0) {
    return w;
  }
  const Dataset order = permute(data, cfg.seed);
  SampleStream stream(order);
  DenseVector gbar(p, 0.0);
  DenseVector g(p, 0.0);
  for (std::uint64_t t = 1; t <= steps; ++t) {
    const Sample& z = stream.next();
    const double G = loss_subgradient_scale(loss, margin(w, z.x), z.y);
    const auto idx = z.x.indices();
    const auto val = z.x.values();
    for (std::size_t k = 0; k < idx.size(); ++k) {
      g[idx[k]] = G * val[k];
    }
    const double td = static_cast<double>(t);
    for (std::size_t j = 0; j < p; ++j) {
      gbar[j] = ((td - 1.0) / td) * gbar[j] + g[j] / td;
    }
    for (Index j : idx) {
      g[j] = 0.0;
    }
    w = rda_weights(gbar, static_cast<std::size_t>(t), cfg.lambda, cfg.gamma_rda, cfg.rho);
    for (Index j : idx) {
      if (!std::isfinite(w[j])) {
        throw DivergenceError("rda: non-finite weight at feature " + std::to_string(j));
      }
    }
  }
  return w;
}

DenseVector fobos_l1(const Dataset& data, LossKind loss, const BaselineConfig& cfg) {
  cfg.validate();
  const std::size_t p = data.dim();
  DenseVector w(p, 0.0);
  const std::uint64_t steps = total_steps(data, cfg.passes);
  if (steps == 0) {
    return w;
  }
  const Dataset order = permute(data, cfg.seed);
  SampleStream stream(order);
  for (std::uint64_t t = 1; t <= steps; ++t) {
    const double td = static_cast<double>(t);
    const double eta_t = cfg.fobos_eta0 / std::sqrt(td);
    sgd_step(w, stream.next(), eta_t, loss);
    const double eta_half =
        cfg.fobos_half_step == FobosHalfStep::Next ? cfg.fobos_eta0 / std::sqrt(td + 1.0) : eta_t;
    const double shrink = eta_half * cfg.lambda_fobos;
    for (double& wj : w) {
      wj = soft_threshold(wj, shrink);
    }
  }
  return w;
}

DenseVector run_baseline(const Dataset& data, LossKind loss, const BaselineConfig& cfg) {
  switch (cfg.kind) {
    case BaselineKind::Sgd: return standard_sgd(data, loss, cfg);
    case BaselineKind::Truncated: return truncated_gradient(data, loss, cfg);
    case BaselineKind::Rda: return rda_l1(data, loss, cfg);
    case BaselineKind::Fobos: return fobos_l1(data, loss, cfg);
  }
  throw std::invalid_argument("unknown baseline kind");
}

}  // namespace stabsgd
