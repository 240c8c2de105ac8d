#pragma once

#include <cstdint>
#include <vector>

#include "stabsgd/sparse.hpp"

namespace stabsgd {

/// Sorted subset of {0..dim-1} with O(1) membership and a compact
/// coordinate map onto {0..size-1}.
class FeatureSet {
 public:
  static constexpr std::int64_t kAbsent = -1;

  FeatureSet() = default;
  /// `members` need not be sorted; duplicates are rejected.
  FeatureSet(std::size_t dim, std::vector<Index> members);

  static FeatureSet full(std::size_t dim);
  static FeatureSet empty(std::size_t dim) { return FeatureSet(dim, {}); }

  std::size_t dim() const { return position_.size(); }
  std::size_t size() const { return members_.size(); }
  bool contains(Index j) const { return position_[j] != kAbsent; }
  /// Compact coordinate of j, or kAbsent.
  std::int64_t position(Index j) const { return position_[j]; }
  const std::vector<Index>& members() const { return members_; }

  bool is_subset_of(const FeatureSet& other) const;

  bool operator==(const FeatureSet& other) const { return members_ == other.members_ && dim() == other.dim(); }

 private:
  std::vector<Index> members_;
  std::vector<std::int64_t> position_;
};

}  // namespace stabsgd
