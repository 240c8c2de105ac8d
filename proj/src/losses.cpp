#include "stabsgd/losses.hpp"

#include <cmath>

namespace stabsgd {

LossKind parse_loss(std::string_view name) {
  if (name == "hinge") {
    return LossKind::Hinge;
  }
  if (name == "logistic") {
    return LossKind::Logistic;
  }
  throw std::invalid_argument("unknown loss '" + std::string(name) + "' (expected hinge or logistic)");
}

std::string_view loss_name(LossKind kind) {
  return kind == LossKind::Hinge ? "hinge" : "logistic";
}

double margin(std::span<const double> w, const SparseVector& x) {
  if (w.size() != x.dim()) {
    throw std::invalid_argument("margin: weight dimension " + std::to_string(w.size()) +
                                " differs from sample dimension " + std::to_string(x.dim()));
  }
  const auto idx = x.indices();
  const auto val = x.values();
  double f = 0.0;
  for (std::size_t k = 0; k < idx.size(); ++k) {
    f += w[idx[k]] * val[k];
  }
  return f;
}

double loss_value(LossKind kind, double f, Label y) {
  const double fy = f * label_value(y);
  if (kind == LossKind::Hinge) {
    return fy < 1.0 ? 1.0 - fy : 0.0;
  }
  // log(1 + e^z) = max(z, 0) + log1p(e^{-|z|})
  const double z = -fy;
  return (z > 0.0 ? z : 0.0) + std::log1p(std::exp(-std::fabs(z)));
}

double loss_subgradient_scale(LossKind kind, double f, Label y) {
  const double yv = label_value(y);
  const double fy = f * yv;
  if (kind == LossKind::Hinge) {
    return fy < 1.0 ? -yv : 0.0;
  }
  // -y / (1 + e^{fy}), written to avoid overflow for large |fy|.
  if (fy >= 0.0) {
    const double e = std::exp(-fy);
    return -yv * e / (1.0 + e);
  }
  return -yv / (1.0 + std::exp(fy));
}

Label predict(std::span<const double> w, const SparseVector& x) {
  return margin(w, x) >= 0.0 ? Label::Positive : Label::Negative;
}

}  // namespace stabsgd
