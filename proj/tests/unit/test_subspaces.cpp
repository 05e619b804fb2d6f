#include <vector>

#include <Eigen/QR>

#include "support.hpp"

#include "dsaddle/subspaces.hpp"

using namespace dsaddle;
using dsaddle::test::mat;
using dsaddle::test::vec;

namespace {
const ToleranceConfig tol;
}

TEST_CASE("kernel_basis examples") {
  CHECK(kernel_basis(Matrix::Identity(3, 3), tol).dim() == 0);
  CHECK(kernel_basis(Matrix::Identity(3, 3), tol).ambient_dim() == 3);
  CHECK(kernel_basis(Matrix::Zero(2, 2), tol).dim() == 2);

  const auto z = kernel_basis(mat({{1, 0}}), tol);
  REQUIRE(z.dim() == 1);
  CHECK(std::abs(z.basis()(0, 0)) < 1e-15);
  CHECK(std::abs(std::abs(z.basis()(1, 0)) - 1.0) < 1e-15);
}

TEST_CASE("kernel_basis of empty matrices") {
  CHECK(kernel_basis(Matrix(0, 3), tol).dim() == 3);
  CHECK(kernel_basis(Matrix(3, 0), tol).dim() == 0);
}

TEST_CASE("intersection_kernels examples") {
  CHECK(intersection_kernels({Matrix::Identity(2, 2), Matrix::Zero(2, 2)}, tol).dim() == 0);
  CHECK(intersection_kernels({mat({{1, 0}}), mat({{0, 1}})}, tol).dim() == 0);
  CHECK(intersection_kernels({Matrix::Zero(3, 3), Matrix::Zero(3, 3)}, tol).dim() == 3);
}

TEST_CASE("intersection_kernels rejects bad input") {
  CHECK_THROWS_AS(intersection_kernels({Matrix::Zero(2, 2), Matrix::Zero(2, 3)}, tol),
                  DimensionError);
  CHECK_THROWS_AS(intersection_kernels(std::span<const Matrix>{}, tol), DimensionError);
}

TEST_CASE("range_intersection_trivial examples") {
  CHECK(range_intersection_trivial(mat({{1}, {0}}), mat({{0}, {1}}), tol).trivial);

  const auto same = range_intersection_trivial(mat({{1}, {0}}), mat({{2}, {0}}), tol);
  CHECK_FALSE(same.trivial);
  CHECK(same.dim == 1);
  REQUIRE(same.witness);
  CHECK(((*same.witness) - vec({1, 0})).norm() < 1e-14);

  const auto r = range_intersection_trivial(Matrix::Identity(2, 2), mat({{1}, {1}}), tol);
  CHECK_FALSE(r.trivial);
  REQUIRE(r.witness);
  CHECK(std::abs(r.witness->norm() - 1.0) < 1e-14);
}

TEST_CASE("range_intersection_trivial rejects a row mismatch") {
  CHECK_THROWS_AS(range_intersection_trivial(Matrix::Identity(2, 2), Matrix::Identity(3, 3), tol),
                  DimensionError);
}

TEST_CASE("is_direct_sum examples") {
  const SubspaceBasis e1(mat({{1}, {0}}));
  const SubspaceBasis e2(mat({{0}, {1}}));
  const SubspaceBasis diag(mat({{1 / std::sqrt(2.0)}, {1 / std::sqrt(2.0)}}));
  CHECK(is_direct_sum(e1, e2, tol));
  CHECK_FALSE(is_direct_sum(e1, e1, tol));
  CHECK(is_direct_sum(diag, e2, tol));
  CHECK_THROWS_AS(is_direct_sum(e1, SubspaceBasis(3), tol), DimensionError);
}

TEST_CASE("split_direct_sum recovers the components") {
  const SubspaceBasis u(mat({{1 / std::sqrt(2.0)}, {1 / std::sqrt(2.0)}}));
  const SubspaceBasis w(mat({{0}, {1}}));
  const auto [a, b] = split_direct_sum(u, w, vec({2, 5}));
  CHECK((a - vec({2, 2})).norm() < 1e-14);
  CHECK((b - vec({0, 3})).norm() < 1e-14);
}

TEST_CASE("SubspaceBasis rejects non-orthonormal columns") {
  CHECK_THROWS_AS(SubspaceBasis(mat({{1, 1}, {0, 1}})), Error);
  CHECK(SubspaceBasis(4).is_trivial());
}

TEST_CASE("classify_definiteness examples") {
  CHECK(classify_definiteness(Matrix::Identity(3, 3), tol) == Definiteness::PositiveDefinite);
  CHECK(classify_definiteness(mat({{1, 0}, {0, 0}}), tol) == Definiteness::PositiveSemidefinite);
  CHECK(classify_definiteness(mat({{1, 0}, {0, -1}}), tol) == Definiteness::Indefinite);
  CHECK(classify_definiteness(Matrix::Zero(2, 2), tol) == Definiteness::PositiveSemidefinite);
  CHECK(classify_definiteness(mat({{0, 1}, {0, 0}}), tol) == Definiteness::NotSymmetric);
}

TEST_CASE("nullity examples") {
  CHECK(nullity(Matrix::Identity(4, 4), tol) == 0);
  CHECK(nullity(Matrix::Zero(3, 3), tol) == 3);
  CHECK(nullity(mat({{1, 0, 0}, {0, 0, 0}, {0, 0, 2}}), tol) == 1);
}

TEST_CASE("rank policy scales with dimension") {
  // sigma = (1, 5e-10) against the threshold rank_rtol * 2 * sigma_max.
  const Matrix m = mat({{1, 0}, {0, 5e-10}});
  CHECK(rank(m, tol) == 2);
  ToleranceConfig loose;
  loose.rank_rtol = 1e-9;
  CHECK(rank(m, loose) == 1);
  CHECK(is_nonsingular(m, tol));
  CHECK_FALSE(is_nonsingular(Matrix::Identity(2, 3), tol));
}

TEST_CASE("ToleranceConfig validation") {
  CHECK_NOTHROW(tol.validate());
  ToleranceConfig bad;
  bad.rank_rtol = 0.0;
  CHECK_THROWS_AS(bad.validate(), Error);
  bad.rank_rtol = 1.5;
  CHECK_THROWS_AS(bad.validate(), Error);
}

TEST_CASE("is_zero_block and norms") {
  CHECK(is_zero_block(Matrix::Zero(2, 2), 1.0, tol));
  CHECK_FALSE(is_zero_block(mat({{1e-6}}), 1.0, tol));
  CHECK(norm2(mat({{3, 0}, {0, 4}})) == doctest::Approx(4.0));
  CHECK(lambda_max(mat({{1, 0}, {0, -3}})) == doctest::Approx(1.0));
  CHECK(lambda_max(Matrix(0, 0)) == 0.0);
}

TEST_CASE("subspace properties on random matrices") {
  for (std::uint64_t seed = 1; seed <= 40; ++seed) {
    const Index rows = 2 + static_cast<Index>(seed % 5);
    const Index cols = 1 + static_cast<Index>(seed % 7);
    const Index r = static_cast<Index>(seed % (std::min(rows, cols) + 1));
    const Matrix m = gen_rank(rows, cols, r, seed);
    CAPTURE(seed);

    CHECK(rank(m, tol) + nullity(m, tol) == cols);
    CHECK(rank(m, tol) == r);

    const auto z = kernel_basis(m, tol);
    const Matrix& q = z.basis();
    if (!z.is_trivial()) {
      CHECK((q.transpose() * q - Matrix::Identity(z.dim(), z.dim())).norm() <= tol.sym_rtol);
      for (Index j = 0; j < q.cols(); ++j) {
        CHECK((m * q.col(j)).norm() <= tol.residual_rtol * std::max(m.norm(), 1.0));
      }
    }
    CHECK(intersection_kernels({m}, tol).dim() == z.dim());

    const Index other_cols = 1 + static_cast<Index>(seed % 3);
    const Index other_rank = std::min(rows, other_cols) - static_cast<Index>(seed % 2);
    const Matrix other = gen_rank(rows, other_cols, other_rank, seed + 1000);
    const auto ab = range_intersection_trivial(m, other, tol);
    const auto ba = range_intersection_trivial(other, m, tol);
    CHECK(ab.trivial == ba.trivial);
    CHECK(ab.dim == ba.dim);
    if (ab.witness) {
      // The witness lies in both ranges.
      for (const Matrix* side : {&m, &other}) {
        const Vector x = side->completeOrthogonalDecomposition().solve(*ab.witness);
        CHECK(((*side) * x - *ab.witness).norm() <= tol.residual_rtol);
      }
    }

    const auto u = kernel_basis(m, tol);
    const auto w = range_basis(m.transpose(), tol);
    CHECK(is_direct_sum(u, w, tol) == is_direct_sum(w, u, tol));
    CHECK(is_direct_sum(u, w, tol));
  }
}
