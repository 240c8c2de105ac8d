#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "stabsgd/feature_set.hpp"
#include "stabsgd/losses.hpp"
#include "stabsgd/sparse.hpp"

namespace stabsgd {

/// Raised when an update produces a non-finite weight.
class DivergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Sequential, optionally cyclic cursor over a dataset.
class SampleStream {
 public:
  explicit SampleStream(const Dataset& data, bool cyclic = true) : data_(&data), cyclic_(cyclic) {}

  /// Throws std::out_of_range when a non-cyclic stream is exhausted.
  const Sample& next();

  /// Total samples drawn so far, wraps included.
  std::uint64_t consumed() const { return consumed_; }
  std::size_t remaining() const;
  const Dataset& data() const { return *data_; }

 private:
  const Dataset* data_;
  bool cyclic_;
  std::size_t pos_ = 0;
  std::uint64_t consumed_ = 0;
};

struct BurstParams {
  LossKind loss = LossKind::Hinge;
  double eta = 0.1;
  std::size_t K = 5;
};

/// Result of one burst, always expanded to the full dimension.
struct BurstOutput {
  DenseVector w_hat;                  // weights after truncation
  std::vector<std::uint32_t> k_tilde; // informative-update counters
  DenseVector delta_w;                // w_K - w_0, before truncation
};

/// T(w, g): sign(w) * max(|w| - g, 0).
inline double soft_threshold(double w, double g) {
  if (w > 0.0) {
    return w - g > 0.0 ? w - g : 0.0;
  }
  return w + g < 0.0 ? w + g : 0.0;
}

/// Componentwise soft threshold. Throws on length mismatch or negative g.
DenseVector soft_threshold(std::span<const double> w, std::span<const double> g);

/// One SGD step w <- w - eta * G * x, touching only indices stored in x.
/// Returns G. Throws DivergenceError if a weight becomes non-finite.
double sgd_step(std::span<double> w, const Sample& z, double eta, LossKind loss);

/// K steps, then truncation with uniform gravity g0 * K.
BurstOutput burst_uniform(std::span<const double> w0, double g0, SampleStream& stream, const BurstParams& params);

/// K steps, then truncation with per-feature gravity g0 * k_tilde.
BurstOutput burst_informative(std::span<const double> w0, double g0, SampleStream& stream,
                              const BurstParams& params);

/// Informative burst restricted to `omega`: samples are projected onto the
/// stable coordinates and only those weights and counters move. `w0` must
/// be zero outside `omega`.
BurstOutput burst_stable(std::span<const double> w0, double g0, const FeatureSet& omega, SampleStream& stream,
                         const BurstParams& params);

}  // namespace stabsgd
