#include "stabsgd/model_io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <stdexcept>

namespace stabsgd {

void write_model(std::ostream& out, const DenseVector& w) {
  out << "p=" << w.size() << '\n';
  out << std::setprecision(17);
  for (std::size_t j = 0; j < w.size(); ++j) {
    if (w[j] != 0.0) {
      out << j << ':' << w[j] << '\n';
    }
  }
}

DenseVector read_model(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || !line.starts_with("p=")) {
    throw std::runtime_error("model: missing p=<dim> header");
  }
  std::size_t p = 0;
  {
    const auto [ptr, ec] = std::from_chars(line.data() + 2, line.data() + line.size(), p);
    if (ec != std::errc() || ptr != line.data() + line.size()) {
      throw std::runtime_error("model: malformed header '" + line + "'");
    }
  }
  DenseVector w(p, 0.0);
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) {
      continue;
    }
    const auto colon = line.find(':');
    std::size_t j = 0;
    const auto [ptr, ec] = std::from_chars(line.data(), line.data() + (colon == std::string::npos ? 0 : colon), j);
    if (colon == std::string::npos || ec != std::errc() || ptr != line.data() + colon || j >= p) {
      throw std::runtime_error("model line " + std::to_string(line_no) + ": malformed entry '" + line + "'");
    }
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(line.substr(colon + 1), &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != line.size() - colon - 1 || !std::isfinite(v)) {
      throw std::runtime_error("model line " + std::to_string(line_no) + ": malformed weight '" + line + "'");
    }
    w[j] = v;
  }
  return w;
}

void save_model(const std::string& path, const DenseVector& w) {
  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error("cannot write " + path);
  }
  write_model(out, w);
}

DenseVector load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open " + path);
  }
  return read_model(in);
}

}  // namespace stabsgd
