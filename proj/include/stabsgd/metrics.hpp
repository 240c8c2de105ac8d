#pragma once

#include <span>
#include <vector>

#include "stabsgd/feature_set.hpp"
#include "stabsgd/losses.hpp"
#include "stabsgd/sparse.hpp"

namespace stabsgd {

/// Fraction of samples misclassified by sign(w^T x).
double test_error(std::span<const double> w, const Dataset& data);

/// 100 * |{j : |w_j| > 0}| / p.
double sparsity_pct(std::span<const double> w);

/// {j : |w_j| > 0}.
FeatureSet selected_set(std::span<const double> w);

/// Cohen's kappa between two selected sets over the same p features.
/// Degenerate marginals (expected agreement 1) return 1.
double cohens_kappa(const FeatureSet& s1, const FeatureSet& s2);

/// Mean kappa over all ordered pairs of distinct sets. Needs B >= 2.
double stability_score(std::span<const FeatureSet> sets);

struct DensityBin {
  double lo = 0.0;
  double hi = 0.0;
  std::size_t count = 0;     // features whose density falls in [lo, hi)
  std::size_t selected = 0;  // ... and that are in the selected set
  double fraction = 0.0;     // selected / count, 0 for empty bins
};

/// Buckets features by nonzero fraction into equal-width bins on [0, 1]
/// (the last bin is closed) and reports the selected fraction per bin.
std::vector<DensityBin> selection_by_density(const FeatureSet& selected, const Dataset& data, std::size_t bins = 20);

/// Spearman rank correlation with average ranks for ties. Returns 0 when
/// either side is constant.
double spearman(std::span<const double> x, std::span<const double> y);

/// Spearman correlation between bin midpoint and selected fraction over
/// the nonempty bins.
double density_selection_correlation(std::span<const DensityBin> bins);

double mean(std::span<const double> v);
/// Sample standard deviation (n - 1 denominator); 0 for fewer than 2 values.
double stddev(std::span<const double> v);

}  // namespace stabsgd
