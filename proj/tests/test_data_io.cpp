#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "helpers.hpp"
#include "stabsgd/data_io.hpp"

using namespace stabsgd;

TEST_CASE("sparse vector invariants") {
  SparseVector v(5, {0, 3}, {1.0, -2.0});
  CHECK(v.nnz() == 2);
  CHECK_THROWS_AS(SparseVector(5, {3, 1}, {1.0, 1.0}), std::invalid_argument);
  CHECK_THROWS_AS(SparseVector(5, {1, 1}, {1.0, 1.0}), std::invalid_argument);
  CHECK_THROWS_AS(SparseVector(5, {5}, {1.0}), std::invalid_argument);
  CHECK_THROWS_AS(SparseVector(5, {1}, {0.0}), std::invalid_argument);
  SparseVector w(4);
  w.push_back(1, 0.0);
  CHECK(w.empty());
}

TEST_CASE("dataset counts nonzeros per feature") {
  const Dataset d = parse_libsvm("+1 1:1 3:2\n-1 3:4\n+1 2:1\n");
  REQUIRE(d.dim() == 3);
  const auto nnz = d.nnz_per_feature();
  CHECK(nnz[0] == 1);
  CHECK(nnz[1] == 1);
  CHECK(nnz[2] == 2);
  CHECK(d.density() == doctest::Approx(4.0 / 9.0));
}

TEST_CASE("parse libsvm line") {
  const Dataset d = parse_libsvm("+1 3:0.5 7:-1.2\n");
  REQUIRE(d.size() == 1);
  CHECK(d.dim() == 7);
  CHECK(d[0].y == Label::Positive);
  const auto idx = d[0].x.indices();
  const auto val = d[0].x.values();
  REQUIRE(idx.size() == 2);
  CHECK(idx[0] == 2);
  CHECK(idx[1] == 6);
  CHECK(val[0] == 0.5);
  CHECK(val[1] == -1.2);
}

TEST_CASE("zero labels map to negative") {
  const Dataset d = parse_libsvm("0 1:1\n1 1:2\n-1 1:3\n");
  CHECK(d[0].y == Label::Negative);
  CHECK(d[1].y == Label::Positive);
  CHECK(d[2].y == Label::Negative);
}

TEST_CASE("empty input and caller dimension") {
  const Dataset d = parse_libsvm("");
  CHECK(d.size() == 0);
  CHECK(d.dim() == 0);
  CHECK(parse_libsvm("", 12).dim() == 12);
  CHECK(parse_libsvm("+1 2:1\n", 10).dim() == 10);
  CHECK_THROWS_AS(parse_libsvm("+1 11:1\n", 10), ParseError);
}

TEST_CASE("comments, blank lines and explicit zeros") {
  const Dataset d = parse_libsvm("# header\n\n+1 1:0 2:3 # trailing\n");
  REQUIRE(d.size() == 1);
  CHECK(d[0].x.nnz() == 1);
  CHECK(d[0].x.indices()[0] == 1);
}

TEST_CASE("malformed input reports the line") {
  auto line_of = [](std::string_view text) {
    try {
      parse_libsvm(text);
    } catch (const ParseError& e) {
      return e.line();
    }
    return std::size_t{0};
  };
  CHECK(line_of("+1 1:1\n+1 x:1\n") == 2);
  CHECK(line_of("+1 1:1\n+1 1:1\n+1 0:1\n") == 3);
  CHECK(line_of("2 1:1\n") == 1);
  CHECK(line_of("+1 1:nan\n") == 1);
  CHECK(line_of("+1 1:inf\n") == 1);
  CHECK(line_of("+1 2:1 2:3\n") == 1);
  CHECK(line_of("+1 1\n") == 1);
  CHECK(line_of("+1 1:\n") == 1);
}

TEST_CASE("unsorted indices are sorted") {
  const Dataset d = parse_libsvm("+1 3:1 2:3\n");
  CHECK(d[0].x.indices()[0] == 1);
  CHECK(d[0].x.values()[0] == 3.0);
}

TEST_CASE("write and parse round trip") {
  const Dataset d = testing::random_dataset(30, 17, 0.3, 5);
  std::stringstream ss;
  write_libsvm(ss, d);
  CHECK(parse_libsvm(ss, d.dim()) == d);
}

TEST_CASE("unit-variance scaling matches direct summation") {
  const Dataset d = parse_libsvm("+1 1:1\n-1 1:-1\n+1 2:5\n-1 2:5\n", 3);
  const auto scales = feature_scales(d);
  CHECK(scales[0] == doctest::Approx(std::sqrt(0.5)).epsilon(1e-12));
  const Dataset s = apply_scales(d, scales);
  CHECK(s[0].x.values()[0] == doctest::Approx(1.41421356237).epsilon(1e-9));
  CHECK(s[1].x.values()[0] == doctest::Approx(-1.41421356237).epsilon(1e-9));
  // Constant-zero column passes through.
  CHECK(scales[2] == 0.0);

  // Oracle: recompute sigma per column from the dense view.
  const Dataset r = testing::random_dataset(40, 9, 0.4, 11);
  const auto sr = feature_scales(r);
  for (std::size_t j = 0; j < r.dim(); ++j) {
    double m1 = 0.0, m2 = 0.0;
    for (std::size_t i = 0; i < r.size(); ++i) {
      double v = 0.0;
      const auto idx = r[i].x.indices();
      for (std::size_t k = 0; k < idx.size(); ++k) {
        if (idx[k] == j) v = r[i].x.values()[k];
      }
      m1 += v;
      m2 += v * v;
    }
    m1 /= static_cast<double>(r.size());
    m2 /= static_cast<double>(r.size());
    CHECK(sr[j] == doctest::Approx(std::sqrt(m2 - m1 * m1)).epsilon(1e-12));
  }
  const Dataset n = normalize_unit_variance(r);
  const auto again = feature_scales(n);
  for (double s2 : again) {
    if (s2 != 0.0) CHECK(s2 == doctest::Approx(1.0).epsilon(1e-12));
  }
  const Dataset twice = normalize_unit_variance(n);
  for (std::size_t i = 0; i < n.size(); ++i) {
    for (std::size_t k = 0; k < n[i].x.nnz(); ++k) {
      CHECK(std::fabs(twice[i].x.values()[k] - n[i].x.values()[k]) < 1e-12);
    }
  }
}

TEST_CASE("permutation determinism and invariants") {
  const Dataset d = testing::random_dataset(50, 8, 0.3, 2);
  CHECK(permute(d, 7) == permute(d, 7));
  CHECK_FALSE(permute(d, 7) == permute(d, 8));
  auto idx = permutation(50, 3);
  std::sort(idx.begin(), idx.end());
  for (std::size_t i = 0; i < idx.size(); ++i) CHECK(idx[i] == i);
  const Dataset one = parse_libsvm("+1 1:1\n");
  CHECK(permute(one, 99) == one);
  auto positives = [](const Dataset& x) {
    return std::count_if(x.samples().begin(), x.samples().end(), [](const Sample& s) { return s.y == Label::Positive; });
  };
  CHECK(positives(permute(d, 4)) == positives(d));
}

TEST_CASE("split sizes and determinism") {
  const Dataset d = testing::random_dataset(10, 4, 0.5, 1);
  auto [a, b] = split(d, 0.7, 3);
  CHECK(a.size() == 7);
  CHECK(b.size() == 3);
  auto [a2, b2] = split(d, 0.7, 3);
  CHECK(a == a2);
  CHECK(b == b2);
  CHECK(a.dim() == d.dim());
  CHECK_THROWS_AS(split(d, 0.0, 1), std::invalid_argument);
  CHECK_THROWS_AS(split(d, 1.0, 1), std::invalid_argument);
}
