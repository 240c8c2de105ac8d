#include "stabsgd/feature_set.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace stabsgd {

FeatureSet::FeatureSet(std::size_t dim, std::vector<Index> members)
    : members_(std::move(members)), position_(dim, kAbsent) {
  std::sort(members_.begin(), members_.end());
  for (std::size_t c = 0; c < members_.size(); ++c) {
    const Index j = members_[c];
    if (j >= dim) {
      throw std::invalid_argument("FeatureSet: index " + std::to_string(j) + " out of range");
    }
    if (c > 0 && members_[c - 1] == j) {
      throw std::invalid_argument("FeatureSet: duplicate index " + std::to_string(j));
    }
    position_[j] = static_cast<std::int64_t>(c);
  }
}

FeatureSet FeatureSet::full(std::size_t dim) {
  std::vector<Index> all(dim);
  for (std::size_t j = 0; j < dim; ++j) {
    all[j] = static_cast<Index>(j);
  }
  return FeatureSet(dim, std::move(all));
}

bool FeatureSet::is_subset_of(const FeatureSet& other) const {
  if (dim() != other.dim()) {
    return false;
  }
  return std::all_of(members_.begin(), members_.end(), [&](Index j) { return other.contains(j); });
}

}  // namespace stabsgd
