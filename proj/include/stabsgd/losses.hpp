#pragma once

#include <span>
#include <stdexcept>
#include <string>
#include <string_view>

#include "stabsgd/sparse.hpp"

namespace stabsgd {

enum class LossKind { Hinge, Logistic };

LossKind parse_loss(std::string_view name);
std::string_view loss_name(LossKind kind);

/// Sparse dot product w^T x.
double margin(std::span<const double> w, const SparseVector& x);

/// hinge: max(1 - fy, 0); logistic: log(1 + exp(-fy)), overflow safe.
double loss_value(LossKind kind, double f, Label y);

/// Scalar G with dL/dw = G * x. The hinge subgradient at fy == 1 is 0.
double loss_subgradient_scale(LossKind kind, double f, Label y);

/// sign(w^T x), with a zero margin predicting Positive.
Label predict(std::span<const double> w, const SparseVector& x);

}  // namespace stabsgd
