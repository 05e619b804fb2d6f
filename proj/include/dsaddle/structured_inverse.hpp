#pragma once

#include <optional>
#include <string>

#include "dsaddle/block_system.hpp"

namespace dsaddle {

/// V = Z (Z^T A Z)^-1 Z^T with Z an orthonormal basis of ker(B).
struct ReducedHessianProjector {
  Matrix V;
  SubspaceBasis Z;
};

/// Upper blocks of a symmetric 3x3 partition of K^-1; the lower blocks are
/// the transposes.
struct InverseBlocks {
  Matrix Z11, Z12, Z13, Z22, Z23, Z33;

  Index n() const { return Z11.rows(); }
  Index m() const { return Z22.rows(); }
  Index p() const { return Z33.rows(); }

  Matrix assembled() const;

  /// Splits a dense l x l matrix along (n, m, p), keeping the upper blocks.
  static InverseBlocks from_dense(const Matrix& x, Index n, Index m, Index p);
};

/// Blocks of the inverse of the two-block matrix [[A, B^T], [B, -D]]. The
/// trailing block is zero by construction.
struct TwoBlockInverse {
  Matrix top_left;
  Matrix top_right;
  Matrix bottom_left;
  Matrix bottom_right;

  Matrix assembled() const;
};

/// Unit lower block-triangular factorisation K_tilde = L * mid * L^T of
/// W^T K W for alpha = 1.
struct TildeFactorization {
  Matrix A1;   // A + B^T (2I - D) B
  Matrix B1;   // B - D B
  Matrix L;    // [[I,0,0],[B1 A1^-1, I, 0],[C B A1^-1, -C, I]]
  Matrix mid;  // diag(A1, -(2I - D)^-1, E)
  Index n = 0, m = 0, p = 0;
};

/// Throws PreconditionError unless A is PSD with ker(A) ∩ ker(B) = {0} and
/// Z^T A Z is numerically nonsingular.
ReducedHessianProjector reduced_hessian_projector(const Matrix& A,
                                                  const Matrix& B,
                                                  const ToleranceConfig& tol);

/// ||A - A V A||_F / ||A||_F. Requires A PSD, null(A) = m and
/// ker(A) ⊕ ker(B) = R^n.
double check_A_equals_AVA(const Matrix& A, const Matrix& B, const Matrix& V,
                          const ToleranceConfig& tol);

/// ||B (A + B^T W^-1 B)^-1 B^T - W|| / ||W|| for null(A) = m,
/// ker(A) ∩ ker(B) = {0} and W invertible.
double eg_identity(const Matrix& A, const Matrix& B, const Matrix& W,
                   const ToleranceConfig& tol);

/// ||B^T (B B^T)^-1 B - (I - Z Z^T)||_2 for rank(B) = m. Both sides are
/// orthogonal projectors, so the spectral norm is already relative.
double projector_identity_residual(const Matrix& B, const SubspaceBasis& Z,
                                   const ToleranceConfig& tol);

/// ||Z Z^T A V - Z Z^T||_2 (Z Z^T has unit norm unless ker(B) = {0}).
double vazz_identity_residual(const Matrix& A, const ReducedHessianProjector& proj);

/// ||W^T K W - K_tilde|| / ||K_tilde|| for the given alpha.
double congruence_residual(const BlockSystem& sys, double alpha);

/// The (m+p) x (m+p) matrix
///   [[-(1/alpha) M^-1, M^-1 C^T], [C M^-1, E - alpha C M^-1 C^T]],
/// M = 2I - alpha D, whose nonsingularity is equivalent to that of K under
/// A, D PSD, N1-N3 and null(A) = m.
Matrix schur_tilde_S(const BlockSystem& sys, double alpha,
                     const ToleranceConfig& tol);

TildeFactorization factorize_tilde(const BlockSystem& sys,
                                   const ToleranceConfig& tol);

/// K^-1 = W K_tilde^-1 W^T with K_tilde^-1 taken from the inverted factors.
InverseBlocks inverse_via_factorization(const BlockSystem& sys,
                                        const ToleranceConfig& tol);

TwoBlockInverse two_block_inverse(const Matrix& A, const Matrix& B,
                                  const Matrix& D, const ToleranceConfig& tol);

/// Closed form with Z22 = Z23 = 0 and Z33 = E^-1; D is unrestricted.
InverseBlocks three_block_inverse(const BlockSystem& sys,
                                  const ToleranceConfig& tol);

/// Dense inverse of the assembled matrix. Throws PreconditionError when K
/// is numerically singular.
InverseBlocks dense_inverse(const BlockSystem& sys, const ToleranceConfig& tol);

struct NullityBoundReport {
  Index null_A = 0;
  Index null_E = 0;
  Index null_Z22 = 0;
  Index m = 0;
  Index general_lower = 0;  // min(max(null A, null E), m)
  Index upper = 0;          // null A + null E
  bool general_holds = false;
  bool range_trivial = false;
  Index range_lower = 0;  // min(null A + null E, m)
  // Set only when range_trivial.
  std::optional<bool> range_holds;
  // Set only when null(E) = 0: min(null A, m) <= null Z22 <= null A.
  std::optional<bool> e_nonsingular_holds;
  double z22_relative_norm = 0.0;  // ||Z22|| / ||K^-1||
  // Set only when null(A) = m and null(E) = 0: Z22 is zero.
  std::optional<bool> z22_zero_holds;

  bool all_hold() const;
};

/// Checks the nullity bounds on the middle diagonal block of K^-1.
/// Throws PreconditionError when K is numerically singular.
NullityBoundReport z22_nullity_bounds(const BlockSystem& sys,
                                      const InverseBlocks& inv,
                                      const ToleranceConfig& tol);

/// ||K X - I||_2 for the assembled inverse X.
double inverse_residual(const BlockSystem& sys, const InverseBlocks& inv);

}  // namespace dsaddle
