#pragma once

#include <initializer_list>

#include "doctest.h"

#include "dsaddle/block_system.hpp"
#include "dsaddle/instance_gen.hpp"

namespace dsaddle::test {

inline Matrix mat(std::initializer_list<std::initializer_list<double>> rows) {
  return Matrix(rows);
}

inline Vector vec(std::initializer_list<double> xs) {
  Vector v(static_cast<Index>(xs.size()));
  Index i = 0;
  for (double x : xs) v(i++) = x;
  return v;
}

inline double max_abs_diff(const Matrix& x, const Matrix& y) {
  REQUIRE(x.rows() == y.rows());
  REQUIRE(x.cols() == y.cols());
  return x.size() == 0 ? 0.0 : (x - y).cwiseAbs().maxCoeff();
}

// A = diag(0,1), B = [1 0], C = (1), D = (0), E = (2).
inline BlockSystem running_example(double e = 2.0) {
  return BlockSystem(mat({{0, 0}, {0, 1}}), mat({{1, 0}}), mat({{1}}),
                     mat({{0}}), mat({{e}}));
}

inline Matrix running_example_inverse() {
  return mat({{0.5, 0, 1, -0.5}, {0, 1, 0, 0}, {1, 0, 0, 0}, {-0.5, 0, 0, 0.5}});
}

// n = m = p = 1 with A = (2), B = (1), C = (1), D = (0), E = (3).
inline BlockSystem scalar_example() {
  return BlockSystem(mat({{2}}), mat({{1}}), mat({{1}}), mat({{0}}), mat({{3}}));
}

inline GeneratorSpec spec(Index n, Index m, Index p, std::uint64_t seed) {
  GeneratorSpec s;
  s.n = n;
  s.m = m;
  s.p = p;
  s.rank_B = std::min(n, m);
  s.rank_C = std::min(p, m);
  s.seed = seed;
  return s;
}

}  // namespace dsaddle::test
