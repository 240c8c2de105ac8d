#include "stabsgd/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace stabsgd {

double test_error(std::span<const double> w, const Dataset& data) {
  if (data.empty()) {
    return 0.0;
  }
  std::size_t wrong = 0;
  for (const Sample& s : data.samples()) {
    if (predict(w, s.x) != s.y) {
      ++wrong;
    }
  }
  return static_cast<double>(wrong) / static_cast<double>(data.size());
}

double sparsity_pct(std::span<const double> w) {
  if (w.empty()) {
    return 0.0;
  }
  const auto nz = std::count_if(w.begin(), w.end(), [](double v) { return std::fabs(v) > 0.0; });
  return 100.0 * static_cast<double>(nz) / static_cast<double>(w.size());
}

FeatureSet selected_set(std::span<const double> w) {
  std::vector<Index> members;
  for (std::size_t j = 0; j < w.size(); ++j) {
    if (std::fabs(w[j]) > 0.0) {
      members.push_back(static_cast<Index>(j));
    }
  }
  return FeatureSet(w.size(), std::move(members));
}

double cohens_kappa(const FeatureSet& s1, const FeatureSet& s2) {
  if (s1.dim() != s2.dim()) {
    throw std::invalid_argument("cohens_kappa: sets are over different dimensions");
  }
  const auto p = static_cast<double>(s1.dim());
  if (p == 0.0) {
    return 1.0;
  }
  std::size_t both = 0;
  for (Index j : s1.members()) {
    if (s2.contains(j)) {
      ++both;
    }
  }
  const auto p11 = static_cast<double>(both);
  const auto p12 = static_cast<double>(s1.size() - both);
  const auto p21 = static_cast<double>(s2.size() - both);
  const double p22 = p - p11 - p12 - p21;
  const double q_o = (p11 + p22) / p;
  const double q_e = ((p11 + p12) * (p11 + p21) + (p12 + p22) * (p21 + p22)) / (p * p);
  if (q_e >= 1.0) {
    return 1.0;
  }
  return (q_o - q_e) / (1.0 - q_e);
}

double stability_score(std::span<const FeatureSet> sets) {
  const std::size_t B = sets.size();
  if (B < 2) {
    throw std::invalid_argument("stability_score: need at least two selected sets");
  }
  double total = 0.0;
  for (std::size_t i = 0; i < B; ++i) {
    for (std::size_t j = 0; j < B; ++j) {
      if (i != j) {
        total += cohens_kappa(sets[i], sets[j]);
      }
    }
  }
  return total / static_cast<double>(B * (B - 1));
}

std::vector<DensityBin> selection_by_density(const FeatureSet& selected, const Dataset& data, std::size_t bins) {
  if (bins == 0) {
    throw std::invalid_argument("selection_by_density: bins must be positive");
  }
  if (selected.dim() != data.dim()) {
    throw std::invalid_argument("selection_by_density: selected set dimension differs from data");
  }
  std::vector<DensityBin> out(bins);
  for (std::size_t b = 0; b < bins; ++b) {
    out[b].lo = static_cast<double>(b) / static_cast<double>(bins);
    out[b].hi = static_cast<double>(b + 1) / static_cast<double>(bins);
  }
  const auto nnz = data.nnz_per_feature();
  const double n = static_cast<double>(std::max<std::size_t>(1, data.size()));
  for (std::size_t j = 0; j < data.dim(); ++j) {
    const double density = static_cast<double>(nnz[j]) / n;
    auto b = static_cast<std::size_t>(density * static_cast<double>(bins));
    b = std::min(b, bins - 1);
    ++out[b].count;
    if (selected.contains(static_cast<Index>(j))) {
      ++out[b].selected;
    }
  }
  for (auto& bin : out) {
    bin.fraction = bin.count > 0 ? static_cast<double>(bin.selected) / static_cast<double>(bin.count) : 0.0;
  }
  return out;
}

namespace {

std::vector<double> average_ranks(std::span<const double> v) {
  std::vector<std::size_t> order(v.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
  std::vector<double> rank(v.size());
  for (std::size_t i = 0; i < order.size();) {
    std::size_t k = i;
    while (k + 1 < order.size() && v[order[k + 1]] == v[order[i]]) {
      ++k;
    }
    const double r = 0.5 * static_cast<double>(i + k) + 1.0;
    for (std::size_t t = i; t <= k; ++t) {
      rank[order[t]] = r;
    }
    i = k + 1;
  }
  return rank;
}

}  // namespace

double spearman(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) {
    throw std::invalid_argument("spearman: length mismatch");
  }
  if (x.size() < 2) {
    return 0.0;
  }
  const auto rx = average_ranks(x);
  const auto ry = average_ranks(y);
  const double mx = mean(rx);
  const double my = mean(ry);
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < rx.size(); ++i) {
    sxy += (rx[i] - mx) * (ry[i] - my);
    sxx += (rx[i] - mx) * (rx[i] - mx);
    syy += (ry[i] - my) * (ry[i] - my);
  }
  if (sxx == 0.0 || syy == 0.0) {
    return 0.0;
  }
  return sxy / std::sqrt(sxx * syy);
}

double density_selection_correlation(std::span<const DensityBin> bins) {
  std::vector<double> mid, frac;
  for (const auto& b : bins) {
    if (b.count > 0) {
      mid.push_back(0.5 * (b.lo + b.hi));
      frac.push_back(b.fraction);
    }
  }
  return spearman(mid, frac);
}

double mean(std::span<const double> v) {
  if (v.empty()) {
    return 0.0;
  }
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double stddev(std::span<const double> v) {
  if (v.size() < 2) {
    return 0.0;
  }
  const double m = mean(v);
  double s = 0.0;
  for (double x : v) {
    s += (x - m) * (x - m);
  }
  return std::sqrt(s / static_cast<double>(v.size() - 1));
}

}  // namespace stabsgd
