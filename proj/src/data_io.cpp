#include "stabsgd/data_io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "stabsgd/rng.hpp"

namespace stabsgd {
namespace {

struct RawRow {
  Label y;
  std::vector<Index> idx;
  std::vector<double> val;
};

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) {
    return {};
  }
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double parse_double(std::string_view tok, std::size_t line, const char* what) {
  // from_chars for double is missing on some libstdc++ builds; strtod is fine here.
  std::string buf(tok);
  char* end = nullptr;
  errno = 0;
  const double v = std::strtod(buf.c_str(), &end);
  if (buf.empty() || end != buf.c_str() + buf.size()) {
    throw ParseError(line, std::string("malformed ") + what + " '" + buf + "'");
  }
  if (!std::isfinite(v)) {
    throw ParseError(line, std::string("non-finite ") + what + " '" + buf + "'");
  }
  return v;
}

RawRow parse_row(std::string_view body, std::size_t line) {
  RawRow row;
  std::size_t pos = 0;
  auto next_token = [&]() -> std::string_view {
    while (pos < body.size() && (body[pos] == ' ' || body[pos] == '\t')) {
      ++pos;
    }
    const std::size_t start = pos;
    while (pos < body.size() && body[pos] != ' ' && body[pos] != '\t') {
      ++pos;
    }
    return body.substr(start, pos - start);
  };

  const std::string_view label_tok = next_token();
  const double label = parse_double(label_tok, line, "label");
  if (label == 1.0) {
    row.y = Label::Positive;
  } else if (label == -1.0 || label == 0.0) {
    row.y = Label::Negative;
  } else {
    throw ParseError(line, "label must be one of {-1, 0, +1}, got '" + std::string(label_tok) + "'");
  }

  for (std::string_view tok = next_token(); !tok.empty(); tok = next_token()) {
    const auto colon = tok.find(':');
    if (colon == std::string_view::npos || colon == 0 || colon + 1 == tok.size()) {
      throw ParseError(line, "expected <index>:<value>, got '" + std::string(tok) + "'");
    }
    std::uint64_t file_index = 0;
    const auto idx_tok = tok.substr(0, colon);
    const auto [ptr, ec] = std::from_chars(idx_tok.data(), idx_tok.data() + idx_tok.size(), file_index);
    if (ec != std::errc() || ptr != idx_tok.data() + idx_tok.size()) {
      throw ParseError(line, "malformed index '" + std::string(idx_tok) + "'");
    }
    if (file_index == 0 || file_index > std::uint64_t{0xffffffff}) {
      throw ParseError(line, "index out of range '" + std::string(idx_tok) + "' (indices are 1-based)");
    }
    const double v = parse_double(tok.substr(colon + 1), line, "value");
    row.idx.push_back(static_cast<Index>(file_index - 1));
    row.val.push_back(v);
  }

  // Sort by index, then reject duplicates and drop explicit zeros.
  std::vector<std::size_t> order(row.idx.size());
  for (std::size_t k = 0; k < order.size(); ++k) {
    order[k] = k;
  }
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return row.idx[a] < row.idx[b]; });
  RawRow sorted{row.y, {}, {}};
  for (std::size_t k = 0; k < order.size(); ++k) {
    const Index j = row.idx[order[k]];
    if (k > 0 && j == row.idx[order[k - 1]]) {
      throw ParseError(line, "duplicate index " + std::to_string(j + 1));
    }
    if (row.val[order[k]] != 0.0) {
      sorted.idx.push_back(j);
      sorted.val.push_back(row.val[order[k]]);
    }
  }
  return sorted;
}

}  // namespace

Dataset parse_libsvm(std::istream& in, std::optional<std::size_t> dim) {
  std::vector<RawRow> rows;
  std::size_t max_index = 0;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view body = line;
    if (const auto hash = body.find('#'); hash != std::string_view::npos) {
      body = body.substr(0, hash);
    }
    body = trim(body);
    if (body.empty()) {
      continue;
    }
    RawRow row = parse_row(body, line_no);
    if (!row.idx.empty()) {
      max_index = std::max<std::size_t>(max_index, row.idx.back() + 1);
    }
    rows.push_back(std::move(row));
  }

  std::size_t p = max_index;
  if (dim) {
    if (*dim < max_index) {
      throw ParseError(line_no, "index " + std::to_string(max_index) + " exceeds requested dimension " +
                                    std::to_string(*dim));
    }
    p = *dim;
  }

  std::vector<Sample> samples;
  samples.reserve(rows.size());
  for (auto& r : rows) {
    samples.push_back(Sample{SparseVector(p, std::move(r.idx), std::move(r.val)), r.y});
  }
  return Dataset(std::move(samples), p);
}

Dataset parse_libsvm(std::string_view text, std::optional<std::size_t> dim) {
  std::istringstream in{std::string(text)};
  return parse_libsvm(in, dim);
}

Dataset load_libsvm(const std::string& path, std::optional<std::size_t> dim) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open " + path);
  }
  try {
    return parse_libsvm(in, dim);
  } catch (const ParseError& e) {
    throw ParseError(e.line(), e.detail() + " (in " + path + ")");
  }
}

void write_libsvm(std::ostream& out, const Dataset& data) {
  const auto old_precision = out.precision();
  out << std::setprecision(17);
  for (const Sample& s : data.samples()) {
    out << (s.y == Label::Positive ? "+1" : "-1");
    const auto idx = s.x.indices();
    const auto val = s.x.values();
    for (std::size_t k = 0; k < idx.size(); ++k) {
      out << ' ' << (idx[k] + 1) << ':' << val[k];
    }
    out << '\n';
  }
  out.precision(old_precision);
}

void save_libsvm(const std::string& path, const Dataset& data) {
  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error("cannot write " + path);
  }
  write_libsvm(out, data);
}

std::vector<double> feature_scales(const Dataset& data) {
  const std::size_t p = data.dim();
  std::vector<double> sum(p, 0.0), sum_sq(p, 0.0);
  for (const Sample& s : data.samples()) {
    const auto idx = s.x.indices();
    const auto val = s.x.values();
    for (std::size_t k = 0; k < idx.size(); ++k) {
      sum[idx[k]] += val[k];
      sum_sq[idx[k]] += val[k] * val[k];
    }
  }
  std::vector<double> sigma(p, 0.0);
  if (data.empty()) {
    return sigma;
  }
  const double n = static_cast<double>(data.size());
  for (std::size_t j = 0; j < p; ++j) {
    const double mean = sum[j] / n;
    const double var = sum_sq[j] / n - mean * mean;
    sigma[j] = var > 0.0 ? std::sqrt(var) : 0.0;
  }
  return sigma;
}

Dataset apply_scales(const Dataset& data, const std::vector<double>& scales) {
  if (scales.size() != data.dim()) {
    throw std::invalid_argument("apply_scales: scale vector length differs from dataset dimension");
  }
  std::vector<Sample> out(data.samples().begin(), data.samples().end());
  for (Sample& s : out) {
    const auto idx = s.x.indices();
    auto val = s.x.mutable_values();
    for (std::size_t k = 0; k < idx.size(); ++k) {
      const double sigma = scales[idx[k]];
      if (sigma > 0.0) {
        val[k] /= sigma;
      }
    }
  }
  return Dataset(std::move(out), data.dim());
}

Dataset normalize_unit_variance(const Dataset& data) {
  return apply_scales(data, feature_scales(data));
}

std::vector<std::size_t> permutation(std::size_t n, std::uint64_t seed) {
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) {
    order[i] = i;
  }
  Rng rng(seed);
  rng.shuffle(std::span<std::size_t>(order));
  return order;
}

Dataset permute(const Dataset& data, std::uint64_t seed) {
  const auto order = permutation(data.size(), seed);
  std::vector<Sample> out;
  out.reserve(order.size());
  for (std::size_t i : order) {
    out.push_back(data[i]);
  }
  return Dataset(std::move(out), data.dim());
}

std::pair<Dataset, Dataset> split(const Dataset& data, double train_fraction, std::uint64_t seed) {
  if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
    throw std::invalid_argument("split: train fraction must lie in (0, 1)");
  }
  const auto order = permutation(data.size(), seed);
  const auto n_train = static_cast<std::size_t>(std::llround(static_cast<double>(data.size()) * train_fraction));
  std::vector<Sample> train, val;
  train.reserve(n_train);
  val.reserve(data.size() - n_train);
  for (std::size_t k = 0; k < order.size(); ++k) {
    (k < n_train ? train : val).push_back(data[order[k]]);
  }
  return {Dataset(std::move(train), data.dim()), Dataset(std::move(val), data.dim())};
}

}  // namespace stabsgd
