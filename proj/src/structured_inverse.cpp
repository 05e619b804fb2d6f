#include "dsaddle/structured_inverse.hpp"

#include <algorithm>
#include <sstream>

#include <Eigen/Cholesky>
#include <Eigen/LU>

#include "dsaddle/invertibility.hpp"

namespace dsaddle {

namespace {

Matrix symmetrized(const Matrix& x) { return 0.5 * (x + x.transpose()); }

void require_square(const Matrix& m, Index size, const char* name) {
  if (m.rows() != size || m.cols() != size) {
    std::ostringstream msg;
    msg << name << " must be " << size << "x" << size << ", got " << m.rows()
        << "x" << m.cols();
    throw DimensionError(msg.str());
  }
}

void require_pair(const Matrix& A, const Matrix& B) {
  require_square(A, A.rows(), "A");
  if (B.cols() != A.rows()) {
    throw DimensionError("B must have as many columns as A has rows");
  }
}

void require_psd(const Matrix& M, const char* name, const ToleranceConfig& tol) {
  if (!is_psd(classify_definiteness(M, tol))) {
    throw PreconditionError(std::string(name) +
                            " is not symmetric positive semidefinite");
  }
}

void require_kernel_pair_trivial(const Matrix& A, const Matrix& B,
                                 const ToleranceConfig& tol) {
  if (!intersection_kernels({A, B}, tol).is_trivial()) {
    throw PreconditionError("ker(A) ∩ ker(B) is not trivial");
  }
}

void require_maximal_deficiency(const Matrix& A, Index m,
                                const ToleranceConfig& tol) {
  const Index na = nullity(A, tol);
  if (na != m) {
    std::ostringstream msg;
    msg << "null(A) = " << na << " but the construction needs null(A) = m = "
        << m;
    throw PreconditionError(msg.str());
  }
}

void require_direct_sum(const Matrix& A, const Matrix& B,
                        const ToleranceConfig& tol) {
  if (!is_direct_sum(kernel_basis(A, tol), kernel_basis(B, tol), tol)) {
    throw PreconditionError("ker(A) ⊕ ker(B) does not equal R^n");
  }
}

void require_conditions_i_to_iii(const BlockSystem& sys,
                                 const ToleranceConfig& tol) {
  require_kernel_pair_trivial(sys.A(), sys.B(), tol);
  if (!intersection_kernels({sys.B().transpose(), sys.D(), sys.C()}, tol)
           .is_trivial()) {
    throw PreconditionError("ker(B^T) ∩ ker(D) ∩ ker(C) is not trivial");
  }
  if (!intersection_kernels({sys.C().transpose(), sys.E()}, tol).is_trivial()) {
    throw PreconditionError("ker(C^T) ∩ ker(E) is not trivial");
  }
}

// R = (B B^T)^-1 B (I - A V), with the Gram solve done by Cholesky.
Matrix constraint_map(const Matrix& A, const Matrix& B, const Matrix& V) {
  const Index n = A.rows();
  const Eigen::LLT<Matrix> gram(B * B.transpose());
  if (gram.info() != Eigen::Success) {
    throw PreconditionError("B B^T is not positive definite");
  }
  return gram.solve(B * (Matrix::Identity(n, n) - A * V));
}

// Preconditions shared by the closed-form inverses.
ReducedHessianProjector maximal_deficiency_projector(
    const Matrix& A, const Matrix& B, const ToleranceConfig& tol) {
  require_pair(A, B);
  require_psd(A, "A", tol);
  require_maximal_deficiency(A, B.rows(), tol);
  require_direct_sum(A, B, tol);
  return reduced_hessian_projector(A, B, tol);
}

}  // namespace

Matrix InverseBlocks::assembled() const {
  const Index n0 = n(), m0 = m(), p0 = p();
  Matrix x(n0 + m0 + p0, n0 + m0 + p0);
  x.block(0, 0, n0, n0) = Z11;
  x.block(0, n0, n0, m0) = Z12;
  x.block(0, n0 + m0, n0, p0) = Z13;
  x.block(n0, 0, m0, n0) = Z12.transpose();
  x.block(n0, n0, m0, m0) = Z22;
  x.block(n0, n0 + m0, m0, p0) = Z23;
  x.block(n0 + m0, 0, p0, n0) = Z13.transpose();
  x.block(n0 + m0, n0, p0, m0) = Z23.transpose();
  x.block(n0 + m0, n0 + m0, p0, p0) = Z33;
  return x;
}

InverseBlocks InverseBlocks::from_dense(const Matrix& x, Index n, Index m,
                                        Index p) {
  if (x.rows() != n + m + p || x.cols() != n + m + p) {
    throw DimensionError("from_dense: matrix does not match the partition");
  }
  return {x.block(0, 0, n, n),         x.block(0, n, n, m),
          x.block(0, n + m, n, p),     x.block(n, n, m, m),
          x.block(n, n + m, m, p),     x.block(n + m, n + m, p, p)};
}

Matrix TwoBlockInverse::assembled() const {
  const Index n = top_left.rows();
  const Index m = bottom_right.rows();
  Matrix x(n + m, n + m);
  x << top_left, top_right, bottom_left, bottom_right;
  return x;
}

ReducedHessianProjector reduced_hessian_projector(const Matrix& A,
                                                  const Matrix& B,
                                                  const ToleranceConfig& tol) {
  require_pair(A, B);
  require_psd(A, "A", tol);
  require_kernel_pair_trivial(A, B, tol);
  auto z = kernel_basis(B, tol);
  const Index n = A.rows();
  if (z.is_trivial()) return {Matrix::Zero(n, n), std::move(z)};
  const Matrix& zb = z.basis();
  const Matrix hessian = zb.transpose() * A * zb;
  if (!is_nonsingular(hessian, tol)) {
    throw PreconditionError("reduced Hessian Z^T A Z is numerically singular");
  }
  const Matrix v = zb * hessian.ldlt().solve(zb.transpose());
  return {symmetrized(v), std::move(z)};
}

double check_A_equals_AVA(const Matrix& A, const Matrix& B, const Matrix& V,
                          const ToleranceConfig& tol) {
  require_pair(A, B);
  require_square(V, A.rows(), "V");
  require_psd(A, "A", tol);
  require_maximal_deficiency(A, B.rows(), tol);
  require_direct_sum(A, B, tol);
  const double scale = A.norm();
  const double diff = (A - A * V * A).norm();
  return scale > 0.0 ? diff / scale : diff;
}

double eg_identity(const Matrix& A, const Matrix& B, const Matrix& W,
                   const ToleranceConfig& tol) {
  require_pair(A, B);
  const Index m = B.rows();
  require_square(W, m, "W");
  require_maximal_deficiency(A, m, tol);
  require_kernel_pair_trivial(A, B, tol);
  if (!is_nonsingular(W, tol)) throw PreconditionError("W is singular");
  const Matrix inner = A + B.transpose() * W.partialPivLu().solve(B);
  if (!is_nonsingular(inner, tol)) {
    throw PreconditionError("A + B^T W^-1 B is numerically singular");
  }
  const Matrix lhs = B * inner.partialPivLu().solve(B.transpose());
  return (lhs - W).norm() / W.norm();
}

double projector_identity_residual(const Matrix& B, const SubspaceBasis& Z,
                                   const ToleranceConfig& tol) {
  const Index n = B.cols();
  if (Z.ambient_dim() != n) {
    throw DimensionError("projector identity: basis lives in the wrong space");
  }
  if (rank(B, tol) != B.rows()) {
    throw PreconditionError("B B^T is singular: B lacks full row rank");
  }
  const Matrix lhs =
      B.transpose() * (B * B.transpose()).llt().solve(B);
  return norm2(lhs - (Matrix::Identity(n, n) - Z.projector()));
}

double vazz_identity_residual(const Matrix& A,
                              const ReducedHessianProjector& proj) {
  const Matrix zz = proj.Z.projector();
  return norm2(zz * A * proj.V - zz);
}

double congruence_residual(const BlockSystem& sys, double alpha) {
  const auto pair = congruence_transform(sys, alpha);
  const Matrix k = assemble(sys).K;
  const Matrix diff = pair.W.K.transpose() * k * pair.W.K - pair.K_tilde.K;
  return diff.norm() / pair.K_tilde.K.norm();
}

Matrix schur_tilde_S(const BlockSystem& sys, double alpha,
                     const ToleranceConfig& tol) {
  require_psd(sys.A(), "A", tol);
  require_psd(sys.D(), "D", tol);
  require_conditions_i_to_iii(sys, tol);
  require_maximal_deficiency(sys.A(), sys.m(), tol);
  if (!alpha_admissible(sys, alpha)) {
    std::ostringstream msg;
    msg << "alpha = " << alpha << " violates 0 < alpha < 2/lambda_max(D)";
    throw PreconditionError(msg.str());
  }
  const Index m = sys.m(), p = sys.p();
  const Matrix M = 2.0 * Matrix::Identity(m, m) - alpha * sys.D();
  if (!is_nonsingular(M, tol)) {
    throw PreconditionError("2I - alpha D is numerically singular");
  }
  const auto lu = M.partialPivLu();
  const Matrix minv = lu.inverse();
  const Matrix minv_ct = lu.solve(sys.C().transpose());
  Matrix s(m + p, m + p);
  s.topLeftCorner(m, m) = -minv / alpha;
  s.topRightCorner(m, p) = minv_ct;
  s.bottomLeftCorner(p, m) = minv_ct.transpose();
  s.bottomRightCorner(p, p) = sys.E() - alpha * sys.C() * minv_ct;
  return s;
}

TildeFactorization factorize_tilde(const BlockSystem& sys,
                                   const ToleranceConfig& tol) {
  const double lmax = lambda_max(sys.D());
  if (!(lmax < 2.0)) {
    std::ostringstream msg;
    msg << "lambda_max(D) = " << lmax
        << " but the alpha = 1 factorisation needs lambda_max(D) < 2";
    throw PreconditionError(msg.str());
  }
  require_psd(sys.A(), "A", tol);
  require_maximal_deficiency(sys.A(), sys.m(), tol);
  require_conditions_i_to_iii(sys, tol);

  const Index n = sys.n(), m = sys.m(), p = sys.p(), l = sys.size();
  const Matrix& B = sys.B();
  const Matrix& C = sys.C();
  const Matrix M = 2.0 * Matrix::Identity(m, m) - sys.D();

  TildeFactorization f;
  f.n = n;
  f.m = m;
  f.p = p;
  f.A1 = sys.A() + B.transpose() * M * B;
  f.B1 = B - sys.D() * B;
  if (!is_nonsingular(f.A1, tol)) {
    throw PreconditionError("A + B^T (2I - D) B is numerically singular");
  }
  const auto a1 = f.A1.ldlt();
  // X A1^-1 = (A1^-1 X^T)^T since A1 is symmetric.
  const Matrix b1_a1inv = a1.solve(f.B1.transpose()).transpose();
  const Matrix cb_a1inv = a1.solve((C * B).transpose()).transpose();

  f.L = Matrix::Identity(l, l);
  f.L.block(n, 0, m, n) = b1_a1inv;
  f.L.block(n + m, 0, p, n) = cb_a1inv;
  f.L.block(n + m, n, p, m) = -C;

  f.mid = Matrix::Zero(l, l);
  f.mid.block(0, 0, n, n) = f.A1;
  f.mid.block(n, n, m, m) = -M.partialPivLu().inverse();
  f.mid.block(n + m, n + m, p, p) = sys.E();
  return f;
}

InverseBlocks inverse_via_factorization(const BlockSystem& sys,
                                        const ToleranceConfig& tol) {
  const auto f = factorize_tilde(sys, tol);
  if (!is_nonsingular(sys.E(), tol)) {
    throw PreconditionError("E is numerically singular");
  }
  const Index n = f.n, m = f.m, p = f.p, l = sys.size();
  const Matrix& B = sys.B();
  const Matrix& C = sys.C();
  const Matrix a1inv = f.A1.ldlt().solve(Matrix::Identity(n, n));

  // Upper factor of the inverse; the lower one is its transpose.
  Matrix upper = Matrix::Identity(l, l);
  upper.block(0, n, n, m) = -a1inv * f.B1.transpose();
  upper.block(0, n + m, n, p) = -a1inv * (B + f.B1).transpose() * C.transpose();
  upper.block(n, n + m, m, p) = C.transpose();

  Matrix middle = Matrix::Zero(l, l);
  middle.block(0, 0, n, n) = a1inv;
  middle.block(n, n, m, m) = -(2.0 * Matrix::Identity(m, m) - sys.D());
  middle.block(n + m, n + m, p, p) =
      sys.E().partialPivLu().solve(Matrix::Identity(p, p));

  const Matrix kt_inv = upper * middle * upper.transpose();
  const Matrix w = congruence_transform(sys, 1.0).W.K;
  return InverseBlocks::from_dense(symmetrized(w * kt_inv * w.transpose()), n,
                                   m, p);
}

TwoBlockInverse two_block_inverse(const Matrix& A, const Matrix& B,
                                  const Matrix& D, const ToleranceConfig& tol) {
  require_square(D, B.rows(), "D");
  const auto proj = maximal_deficiency_projector(A, B, tol);
  const Matrix r = constraint_map(A, B, proj.V);
  const Index m = B.rows();
  return {symmetrized(r.transpose() * D * r + proj.V), r.transpose(), r,
          Matrix::Zero(m, m)};
}

InverseBlocks three_block_inverse(const BlockSystem& sys,
                                  const ToleranceConfig& tol) {
  const auto proj = maximal_deficiency_projector(sys.A(), sys.B(), tol);
  if (!is_nonsingular(sys.E(), tol)) {
    throw PreconditionError("E is numerically singular");
  }
  const Index m = sys.m(), p = sys.p();
  const Matrix r = constraint_map(sys.A(), sys.B(), proj.V);
  const auto e = sys.E().partialPivLu();
  const Matrix einv = e.solve(Matrix::Identity(p, p));
  const Matrix einv_c = e.solve(sys.C());
  const Matrix s = -einv_c * r;

  InverseBlocks out;
  out.Z11 = symmetrized(
      r.transpose() * (sys.D() + sys.C().transpose() * einv_c) * r + proj.V);
  out.Z12 = r.transpose();
  out.Z13 = s.transpose();
  out.Z22 = Matrix::Zero(m, m);
  out.Z23 = Matrix::Zero(m, p);
  out.Z33 = symmetrized(einv);
  return out;
}

InverseBlocks dense_inverse(const BlockSystem& sys,
                            const ToleranceConfig& tol) {
  const Matrix k = assemble(sys).K;
  if (!is_nonsingular(k, tol)) {
    throw PreconditionError("K is numerically singular");
  }
  const Matrix x = k.partialPivLu().inverse();
  return InverseBlocks::from_dense(symmetrized(x), sys.n(), sys.m(), sys.p());
}

bool NullityBoundReport::all_hold() const {
  return general_holds && range_holds.value_or(true) &&
         e_nonsingular_holds.value_or(true) && z22_zero_holds.value_or(true);
}

NullityBoundReport z22_nullity_bounds(const BlockSystem& sys,
                                      const InverseBlocks& inv,
                                      const ToleranceConfig& tol) {
  if (inv.n() != sys.n() || inv.m() != sys.m() || inv.p() != sys.p()) {
    throw DimensionError("inverse blocks do not match the system partition");
  }
  if (!oracle_invertible(sys, tol)) {
    throw PreconditionError("K is numerically singular");
  }
  NullityBoundReport r;
  r.m = sys.m();
  r.null_A = nullity(sys.A(), tol);
  r.null_E = nullity(sys.E(), tol);

  const double xnorm = norm2(inv.assembled());
  const double znorm = norm2(inv.Z22);
  r.z22_relative_norm = xnorm > 0.0 ? znorm / xnorm : 0.0;
  // A middle block at round-off level relative to K^-1 counts as zero.
  const bool zero_block =
      znorm <= tol.rank_threshold(xnorm, sys.size(), sys.size());
  r.null_Z22 = zero_block ? r.m : nullity(inv.Z22, tol);

  r.general_lower = std::min(std::max(r.null_A, r.null_E), r.m);
  r.upper = r.null_A + r.null_E;
  r.general_holds = r.general_lower <= r.null_Z22 && r.null_Z22 <= r.upper;

  r.range_trivial =
      range_intersection_trivial(sys.B(), sys.C().transpose(), tol).trivial;
  r.range_lower = std::min(r.null_A + r.null_E, r.m);
  if (r.range_trivial) {
    r.range_holds = r.range_lower <= r.null_Z22 && r.null_Z22 <= r.upper;
  }
  if (r.null_E == 0) {
    r.e_nonsingular_holds =
        std::min(r.null_A, r.m) <= r.null_Z22 && r.null_Z22 <= r.null_A;
    if (r.null_A == r.m) r.z22_zero_holds = r.z22_relative_norm <= tol.rank_rtol;
  }
  return r;
}

double inverse_residual(const BlockSystem& sys, const InverseBlocks& inv) {
  const Matrix k = assemble(sys).K;
  return norm2(k * inv.assembled() -
               Matrix::Identity(sys.size(), sys.size()));
}

}  // namespace dsaddle
