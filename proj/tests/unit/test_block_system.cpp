#include <limits>

#include <Eigen/Eigenvalues>

#include "support.hpp"

#include "dsaddle/invertibility.hpp"
#include "dsaddle/structured_inverse.hpp"

using namespace dsaddle;
using dsaddle::test::mat;
using dsaddle::test::running_example;

namespace {

const ToleranceConfig tol;

Vector sorted_eigenvalues(const Matrix& k) {
  Vector ev = Eigen::SelfAdjointEigenSolver<Matrix>(k, Eigen::EigenvaluesOnly).eigenvalues();
  std::sort(ev.begin(), ev.end());
  return ev;
}

}  // namespace

TEST_CASE("assemble examples") {
  const auto k1 = assemble(dsaddle::test::scalar_example());
  CHECK(k1.K == mat({{2, 1, 0}, {1, 0, 1}, {0, 1, 3}}));

  const auto zero = BlockSystem(Matrix::Zero(1, 1), Matrix::Zero(1, 1), Matrix::Zero(1, 1),
                                Matrix::Zero(1, 1), Matrix::Zero(1, 1));
  CHECK(assemble(zero).K == Matrix::Zero(3, 3));

  const auto k4 = assemble(running_example());
  CHECK(k4.K == mat({{0, 0, 1, 0}, {0, 1, 0, 0}, {1, 0, 0, 1}, {0, 0, 1, 2}}));
  CHECK(k4.n == 2);
  CHECK(k4.m == 1);
  CHECK(k4.p == 1);
}

TEST_CASE("assemble negates D") {
  const BlockSystem s(mat({{1}}), mat({{0}}), mat({{0}}), mat({{5}}), mat({{1}}));
  CHECK(assemble(s).K(1, 1) == -5.0);
}

TEST_CASE("BlockSystem validation") {
  CHECK_THROWS_AS(BlockSystem(Matrix::Identity(2, 2), Matrix::Zero(1, 3), Matrix::Zero(1, 1),
                              Matrix::Zero(1, 1), Matrix::Zero(1, 1)),
                  DimensionError);
  CHECK_THROWS_AS(BlockSystem(Matrix(0, 0), Matrix(1, 0), Matrix::Zero(1, 1),
                              Matrix::Zero(1, 1), Matrix::Zero(1, 1)),
                  DimensionError);
  CHECK_THROWS_AS(BlockSystem(mat({{1, 2}, {0, 1}}), Matrix::Zero(1, 2), Matrix::Zero(1, 1),
                              Matrix::Zero(1, 1), Matrix::Zero(1, 1)),
                  Error);
  Matrix nan_block = Matrix::Zero(1, 1);
  nan_block(0, 0) = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(BlockSystem(Matrix::Identity(1, 1), nan_block, Matrix::Zero(1, 1),
                              Matrix::Zero(1, 1), Matrix::Zero(1, 1)),
                  Error);

  const auto s = BlockSystem::without_diagonal_tail(Matrix::Identity(2, 2), Matrix::Zero(3, 2),
                                                    Matrix::Zero(1, 3));
  CHECK(s.m() == 3);
  CHECK(s.p() == 1);
  CHECK(s.D() == Matrix::Zero(3, 3));
  CHECK(s.E() == Matrix::Zero(1, 1));
}

TEST_CASE("permute_similar examples") {
  const auto s = running_example();
  const auto ps = permute_similar(s);
  const Matrix perm = block_reversal(s.n(), s.m(), s.p());
  const Matrix k = assemble(s).K;
  CHECK(assemble(ps).K == perm * k * perm.transpose());
  CHECK(permute_similar(ps) == s);
  CHECK((sorted_eigenvalues(k) - sorted_eigenvalues(assemble(ps).K)).norm() < 1e-14);
}

TEST_CASE("reverse_blocks undoes itself") {
  Vector u(6);
  u << 1, 2, 3, 4, 5, 6;
  const Vector r = reverse_blocks(u, 3, 1, 2);
  Vector expected(6);
  expected << 5, 6, 4, 1, 2, 3;
  CHECK(r == expected);
  CHECK(reverse_blocks(r, 2, 1, 3) == u);
  CHECK_THROWS_AS(reverse_blocks(u, 1, 1, 1), DimensionError);
}

TEST_CASE("congruence_transform examples") {
  const auto s = running_example();
  const auto pair = congruence_transform(s, 1.0);
  CHECK(pair.K_tilde.block(0, 0) == mat({{2, 0}, {0, 1}}));
  const Matrix product = pair.W.K.transpose() * assemble(s).K * pair.W.K;
  CHECK((product - pair.K_tilde.K).norm() == 0.0);

  // D = 0, alpha = 1: K_tilde(1,1) = A + 2 B^T B.
  const auto g = gen_instance(dsaddle::test::spec(4, 2, 2, 3));
  const BlockSystem d0(g.system.A(), g.system.B(), g.system.C(), Matrix::Zero(2, 2),
                       g.system.E());
  const Matrix expected = d0.A() + 2.0 * d0.B().transpose() * d0.B();
  CHECK((congruence_transform(d0, 1.0).K_tilde.block(0, 0) - expected).norm() < 1e-13);

  for (double alpha : {0.1, 0.5, 1.0, 1.9}) {
    const Matrix kt = congruence_transform(g.system, alpha * default_alpha(g.system)).K_tilde.K;
    CHECK((kt - kt.transpose()).norm() < 1e-13 * kt.norm());
  }
}

TEST_CASE("congruence_transform rejects inadmissible alpha") {
  const BlockSystem s(Matrix::Identity(1, 1), mat({{1}}), mat({{1}}), mat({{4}}), mat({{1}}));
  CHECK(alpha_admissible(s, 0.49));
  CHECK_FALSE(alpha_admissible(s, 0.5));
  CHECK_FALSE(alpha_admissible(s, 0.0));
  CHECK_FALSE(alpha_admissible(s, -1.0));
  CHECK(default_alpha(s) == doctest::Approx(0.25));
  CHECK_THROWS_AS(congruence_transform(s, 0.5), PreconditionError);
  try {
    congruence_transform(s, 0.7);
  } catch (const PreconditionError& e) {
    CHECK(std::string(e.what()).find("lambda_max(D)") != std::string::npos);
  }
  // D = 0 leaves the interval unbounded.
  CHECK(alpha_admissible(running_example(), 1e6));
  CHECK(default_alpha(running_example()) == 1.0);
}

TEST_CASE("rescale_middle examples") {
  const auto s = running_example();
  CHECK(rescale_middle(s, 1.0) == s);

  const BlockSystem big(Matrix::Identity(1, 1), mat({{1}}), mat({{1}}), mat({{8}}), mat({{1}}));
  const auto scaled = rescale_middle(big, 0.5);
  CHECK(scaled.D()(0, 0) == 2.0);
  CHECK(lambda_max(scaled.D()) == doctest::Approx(lambda_max(big.D()) * 0.25));

  // A singular system stays singular; the witness maps through diag(I, I/beta, I).
  const auto sing = running_example(0.0);
  const Vector u = diagnose(sing, tol).witness.value();
  const double beta = 3.0;
  Vector mapped = u;
  mapped.segment(sing.n(), sing.m()) /= beta;
  CHECK((assemble(rescale_middle(sing, beta)).K * mapped).norm() < 1e-14);

  CHECK_THROWS_AS(rescale_middle(s, 0.0), PreconditionError);
  CHECK_THROWS_AS(rescale_middle(s, -2.0), PreconditionError);
}

TEST_CASE("saddle_core properties on random instances") {
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    CAPTURE(seed);
    auto sp = dsaddle::test::spec(2 + seed % 5, 1 + seed % 4, 1 + seed % 3, seed);
    sp.null_A = static_cast<Index>(seed % 2);
    const auto s = gen_instance(sp).system;
    const Matrix k = assemble(s).K;
    CHECK((k - k.transpose()).norm() == 0.0);

    CHECK(permute_similar(permute_similar(s)) == s);
    const Matrix perm = block_reversal(s.n(), s.m(), s.p());
    CHECK(assemble(permute_similar(s)).K == perm * k * perm.transpose());

    const Index rk = rank(k, tol);
    const auto pair = congruence_transform(s, default_alpha(s));
    CHECK(rank(pair.K_tilde.K, tol) == rk);
    CHECK(congruence_residual(s, default_alpha(s)) <= tol.residual_rtol);
    for (double beta : {0.1, 2.0, 7.5}) CHECK(rank(assemble(rescale_middle(s, beta)).K, tol) == rk);
  }
}
