#include "stabsgd/sparse.hpp"

#include <cmath>
#include <string>
#include <utility>

namespace stabsgd {

SparseVector::SparseVector(std::size_t dim, std::vector<Index> indices, std::vector<double> values)
    : dim_(dim), indices_(std::move(indices)), values_(std::move(values)) {
  if (indices_.size() != values_.size()) {
    throw std::invalid_argument("SparseVector: index/value length mismatch");
  }
  for (std::size_t k = 0; k < indices_.size(); ++k) {
    if (indices_[k] >= dim_) {
      throw std::invalid_argument("SparseVector: index " + std::to_string(indices_[k]) +
                                  " out of range for dim " + std::to_string(dim_));
    }
    if (k > 0 && indices_[k] <= indices_[k - 1]) {
      throw std::invalid_argument("SparseVector: indices must be strictly increasing");
    }
    if (values_[k] == 0.0) {
      throw std::invalid_argument("SparseVector: stored zero at index " + std::to_string(indices_[k]));
    }
  }
}

void SparseVector::push_back(Index index, double value) {
  if (index >= dim_) {
    throw std::invalid_argument("SparseVector: index " + std::to_string(index) + " out of range");
  }
  if (!indices_.empty() && index <= indices_.back()) {
    throw std::invalid_argument("SparseVector: indices must be strictly increasing");
  }
  if (value == 0.0) {
    return;
  }
  indices_.push_back(index);
  values_.push_back(value);
}

void SparseVector::set_dim(std::size_t dim) {
  if (!indices_.empty() && indices_.back() >= dim) {
    throw std::invalid_argument("SparseVector: dimension " + std::to_string(dim) +
                                " too small for stored index " + std::to_string(indices_.back()));
  }
  dim_ = dim;
}

Dataset::Dataset(std::vector<Sample> samples, std::size_t dim)
    : samples_(std::move(samples)), dim_(dim), nnz_per_feature_(dim, 0) {
  for (auto& s : samples_) {
    if (s.x.dim() != dim_) {
      s.x.set_dim(dim_);
    }
    for (Index j : s.x.indices()) {
      ++nnz_per_feature_[j];
    }
  }
}

double Dataset::density() const {
  if (dim_ == 0 || samples_.empty()) {
    return 0.0;
  }
  double total = 0.0;
  for (std::size_t c : nnz_per_feature_) {
    total += static_cast<double>(c);
  }
  return total / (static_cast<double>(dim_) * static_cast<double>(samples_.size()));
}

}  // namespace stabsgd
