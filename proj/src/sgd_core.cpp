#include "stabsgd/sgd_core.hpp"

#include <cmath>

namespace stabsgd {

const Sample& SampleStream::next() {
  if (pos_ >= data_->size()) {
    if (!cyclic_ || data_->empty()) {
      throw std::out_of_range("sample stream exhausted after " + std::to_string(consumed_) + " samples");
    }
    pos_ = 0;
  }
  ++consumed_;
  return (*data_)[pos_++];
}

std::size_t SampleStream::remaining() const {
  return data_->size() - pos_;
}

DenseVector soft_threshold(std::span<const double> w, std::span<const double> g) {
  if (w.size() != g.size()) {
    throw std::invalid_argument("soft_threshold: gravity length differs from weight length");
  }
  DenseVector out(w.size());
  for (std::size_t j = 0; j < w.size(); ++j) {
    if (!(g[j] >= 0.0)) {
      throw std::invalid_argument("soft_threshold: negative gravity at index " + std::to_string(j));
    }
    out[j] = soft_threshold(w[j], g[j]);
  }
  return out;
}

double sgd_step(std::span<double> w, const Sample& z, double eta, LossKind loss) {
  const double f = margin(w, z.x);
  const double G = loss_subgradient_scale(loss, f, z.y);
  if (G == 0.0) {
    return G;
  }
  const double scale = eta * G;
  const auto idx = z.x.indices();
  const auto val = z.x.values();
  for (std::size_t k = 0; k < idx.size(); ++k) {
    double& wj = w[idx[k]];
    wj -= scale * val[k];
    if (!std::isfinite(wj)) {
      throw DivergenceError("non-finite weight at feature " + std::to_string(idx[k]));
    }
  }
  return G;
}

namespace {

void check_params(std::span<const double> w0, const SampleStream& stream, const BurstParams& params, double g0) {
  if (w0.size() != stream.data().dim()) {
    throw std::invalid_argument("burst: weight dimension differs from data dimension");
  }
  if (!(params.eta > 0.0)) {
    throw std::invalid_argument("burst: learning rate must be positive");
  }
  if (params.K == 0) {
    throw std::invalid_argument("burst: K must be at least 1");
  }
  if (!(g0 >= 0.0)) {
    throw std::invalid_argument("burst: base gravity must be nonnegative");
  }
}

DenseVector difference(const DenseVector& a, std::span<const double> b) {
  DenseVector d(a.size());
  for (std::size_t j = 0; j < a.size(); ++j) {
    d[j] = a[j] - b[j];
  }
  return d;
}

}  // namespace

BurstOutput burst_uniform(std::span<const double> w0, double g0, SampleStream& stream, const BurstParams& params) {
  check_params(w0, stream, params, g0);
  const std::size_t p = w0.size();
  DenseVector w(w0.begin(), w0.end());
  std::vector<std::uint32_t> k(p, 0);
  for (std::size_t t = 0; t < params.K; ++t) {
    const Sample& z = stream.next();
    sgd_step(w, z, params.eta, params.loss);
    for (Index j : z.x.indices()) {
      ++k[j];
    }
  }
  const double gravity = g0 * static_cast<double>(params.K);
  BurstOutput out;
  out.delta_w = difference(w, w0);
  out.w_hat.resize(p);
  for (std::size_t j = 0; j < p; ++j) {
    out.w_hat[j] = soft_threshold(w[j], gravity);
  }
  out.k_tilde = std::move(k);
  return out;
}

BurstOutput burst_informative(std::span<const double> w0, double g0, SampleStream& stream,
                              const BurstParams& params) {
  check_params(w0, stream, params, g0);
  const std::size_t p = w0.size();
  DenseVector w(w0.begin(), w0.end());
  std::vector<std::uint32_t> k(p, 0);
  for (std::size_t t = 0; t < params.K; ++t) {
    const Sample& z = stream.next();
    sgd_step(w, z, params.eta, params.loss);
    for (Index j : z.x.indices()) {
      ++k[j];
    }
  }
  BurstOutput out;
  out.delta_w = difference(w, w0);
  out.w_hat.resize(p);
  for (std::size_t j = 0; j < p; ++j) {
    out.w_hat[j] = soft_threshold(w[j], g0 * static_cast<double>(k[j]));
  }
  out.k_tilde = std::move(k);
  return out;
}

BurstOutput burst_stable(std::span<const double> w0, double g0, const FeatureSet& omega, SampleStream& stream,
                         const BurstParams& params) {
  check_params(w0, stream, params, g0);
  const std::size_t p = w0.size();
  if (omega.dim() != p) {
    throw std::invalid_argument("burst_stable: stable set dimension differs from weight dimension");
  }
  for (std::size_t j = 0; j < p; ++j) {
    if (w0[j] != 0.0 && !omega.contains(static_cast<Index>(j))) {
      throw std::invalid_argument("burst_stable: initial weight nonzero outside the stable set at feature " +
                                  std::to_string(j));
    }
  }
  const auto& members = omega.members();
  const std::size_t q = members.size();

  DenseVector v(q);
  for (std::size_t c = 0; c < q; ++c) {
    v[c] = w0[members[c]];
  }
  const DenseVector v0 = v;
  std::vector<std::uint32_t> k(q, 0);

  for (std::size_t t = 0; t < params.K; ++t) {
    const Sample& z = stream.next();
    const auto idx = z.x.indices();
    const auto val = z.x.values();
    double f = 0.0;
    for (std::size_t e = 0; e < idx.size(); ++e) {
      const auto c = omega.position(idx[e]);
      if (c != FeatureSet::kAbsent) {
        f += v[static_cast<std::size_t>(c)] * val[e];
      }
    }
    const double G = loss_subgradient_scale(params.loss, f, z.y);
    const double scale = params.eta * G;
    for (std::size_t e = 0; e < idx.size(); ++e) {
      const auto c = omega.position(idx[e]);
      if (c == FeatureSet::kAbsent) {
        continue;
      }
      const auto cc = static_cast<std::size_t>(c);
      ++k[cc];
      if (G != 0.0) {
        v[cc] -= scale * val[e];
        if (!std::isfinite(v[cc])) {
          throw DivergenceError("non-finite weight at feature " + std::to_string(idx[e]));
        }
      }
    }
  }

  BurstOutput out;
  out.w_hat.assign(p, 0.0);
  out.delta_w.assign(p, 0.0);
  out.k_tilde.assign(p, 0);
  for (std::size_t c = 0; c < q; ++c) {
    const Index j = members[c];
    out.w_hat[j] = soft_threshold(v[c], g0 * static_cast<double>(k[c]));
    out.delta_w[j] = v[c] - v0[c];
    out.k_tilde[j] = k[c];
  }
  return out;
}

}  // namespace stabsgd
