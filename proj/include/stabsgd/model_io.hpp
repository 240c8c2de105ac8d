#pragma once

#include <istream>
#include <ostream>
#include <string>

#include "stabsgd/sparse.hpp"

namespace stabsgd {

// Model file: a `p=<dim>` header, then one `index:weight` line per nonzero
// weight (0-based index, 17 significant digits).
void write_model(std::ostream& out, const DenseVector& w);
DenseVector read_model(std::istream& in);
void save_model(const std::string& path, const DenseVector& w);
DenseVector load_model(const std::string& path);

}  // namespace stabsgd
