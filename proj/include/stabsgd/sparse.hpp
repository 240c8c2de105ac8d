#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

namespace stabsgd {

using Index = std::uint32_t;
using DenseVector = std::vector<double>;

/// Sparse vector over a fixed dimension. Indices are 0-based and strictly
/// increasing, and no stored value is zero.
class SparseVector {
 public:
  SparseVector() = default;
  explicit SparseVector(std::size_t dim) : dim_(dim) {}

  /// Validating constructor. Throws std::invalid_argument when the
  /// invariants do not hold.
  SparseVector(std::size_t dim, std::vector<Index> indices, std::vector<double> values);

  /// Appends an entry. The index must be larger than every stored index.
  void push_back(Index index, double value);

  std::size_t dim() const { return dim_; }
  std::size_t nnz() const { return indices_.size(); }
  bool empty() const { return indices_.empty(); }

  std::span<const Index> indices() const { return indices_; }
  std::span<const double> values() const { return values_; }
  std::span<double> mutable_values() { return values_; }

  // Raises the dimension (used when a dataset fixes p after parsing).
  void set_dim(std::size_t dim);

  bool operator==(const SparseVector&) const = default;

 private:
  std::size_t dim_ = 0;
  std::vector<Index> indices_;
  std::vector<double> values_;
};

enum class Label : int { Negative = -1, Positive = 1 };

inline double label_value(Label y) { return static_cast<double>(static_cast<int>(y)); }

struct Sample {
  SparseVector x;
  Label y = Label::Positive;

  bool operator==(const Sample&) const = default;
};

/// Immutable-after-construction collection of labelled sparse samples.
class Dataset {
 public:
  Dataset() = default;
  Dataset(std::vector<Sample> samples, std::size_t dim);

  std::size_t size() const { return samples_.size(); }
  bool empty() const { return samples_.empty(); }
  std::size_t dim() const { return dim_; }

  const Sample& operator[](std::size_t i) const { return samples_[i]; }
  std::span<const Sample> samples() const { return samples_; }

  /// Number of samples holding a stored entry at each feature.
  std::span<const std::size_t> nnz_per_feature() const { return nnz_per_feature_; }

  /// Column-wise average fraction of nonzero entries.
  double density() const;

  bool operator==(const Dataset& other) const {
    return dim_ == other.dim_ && samples_ == other.samples_;
  }

 private:
  std::vector<Sample> samples_;
  std::size_t dim_ = 0;
  std::vector<std::size_t> nnz_per_feature_;
};

}  // namespace stabsgd
