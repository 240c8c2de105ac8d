#pragma once

#include <cstdint>
#include <istream>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "stabsgd/sparse.hpp"

namespace stabsgd {

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line), detail_(what) {}
  std::size_t line() const { return line_; }
  const std::string& detail() const { return detail_; }

 private:
  std::size_t line_;
  std::string detail_;
};

/// Parses LIBSVM text (`<label> <idx>:<val> ...`, 1-based indices).
/// Labels 0 and -1 map to Negative, +1 to Positive. The dimension is the
/// largest index seen unless `dim` is given, in which case it must cover
/// every index.
Dataset parse_libsvm(std::istream& in, std::optional<std::size_t> dim = std::nullopt);
Dataset parse_libsvm(std::string_view text, std::optional<std::size_t> dim = std::nullopt);
Dataset load_libsvm(const std::string& path, std::optional<std::size_t> dim = std::nullopt);

void write_libsvm(std::ostream& out, const Dataset& data);
void save_libsvm(const std::string& path, const Dataset& data);

/// Per-feature population standard deviation over all samples, implicit
/// zeros included.
std::vector<double> feature_scales(const Dataset& data);

/// Divides each feature by its scale; zero scales leave the column as is.
/// Never centres, so the sparsity pattern is preserved.
Dataset apply_scales(const Dataset& data, const std::vector<double>& scales);

/// Scales each feature column to unit population variance.
Dataset normalize_unit_variance(const Dataset& data);

/// Seeded Fisher-Yates reordering of the samples.
Dataset permute(const Dataset& data, std::uint64_t seed);

/// The permutation used by `permute`, as sample positions.
std::vector<std::size_t> permutation(std::size_t n, std::uint64_t seed);

/// Random disjoint split with round(n * train_fraction) training samples.
std::pair<Dataset, Dataset> split(const Dataset& data, double train_fraction, std::uint64_t seed);

}  // namespace stabsgd
