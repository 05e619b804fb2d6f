#pragma once

#include "dsaddle/subspaces.hpp"

namespace dsaddle {

/// The five blocks of a symmetric double saddle-point matrix
///
///     K = [ A   B^T  0  ]
///         [ B  -D    C^T]
///         [ 0   C    E  ]
///
/// with A (n x n), B (m x n), C (p x m), D (m x m), E (p x p). D is stored
/// as D; the minus sign is applied on assembly.
class BlockSystem {
 public:
  /// Validates shapes (n, m, p >= 1), finiteness and the symmetry of A, D
  /// and E. Throws DimensionError or Error.
  BlockSystem(Matrix a, Matrix b, Matrix c, Matrix d, Matrix e,
              const ToleranceConfig& tol = {});

  /// Zero D and E of the right sizes.
  static BlockSystem without_diagonal_tail(Matrix a, Matrix b, Matrix c,
                                           const ToleranceConfig& tol = {});

  const Matrix& A() const { return a_; }
  const Matrix& B() const { return b_; }
  const Matrix& C() const { return c_; }
  const Matrix& D() const { return d_; }
  const Matrix& E() const { return e_; }

  Index n() const { return a_.rows(); }
  Index m() const { return d_.rows(); }
  Index p() const { return e_.rows(); }
  Index size() const { return n() + m() + p(); }

  /// Exact, bitwise equality of all blocks.
  friend bool operator==(const BlockSystem& x, const BlockSystem& y);

 private:
  Matrix a_, b_, c_, d_, e_;
};

/// Dense l x l matrix with its (n, m, p) partition.
struct AssembledMatrix {
  Matrix K;
  Index n = 0;
  Index m = 0;
  Index p = 0;

  Index size() const { return n + m + p; }
  auto block(int row, int col) { return K.block(offset(row), offset(col), extent(row), extent(col)); }
  auto block(int row, int col) const { return K.block(offset(row), offset(col), extent(row), extent(col)); }

  // 0-based block index -> starting row/column.
  Index offset(int i) const { return i == 0 ? 0 : (i == 1 ? n : n + m); }
  Index extent(int i) const { return i == 0 ? n : (i == 1 ? m : p); }
};

AssembledMatrix assemble(const BlockSystem& sys);

/// Anti-diagonal block permutation P = [[0,0,I],[0,I,0],[I,0,0]] sized for
/// the partition (n, m, p); P maps R^(n+m+p) to R^(p+m+n).
Matrix block_reversal(Index n, Index m, Index p);

/// Reverses the block order of a vector partitioned as (first, mid, last).
Vector reverse_blocks(const Vector& u, Index first, Index mid, Index last);

/// The system whose assembly is P K P: (A, B, C, D, E) -> (E, C^T, B^T, D, A).
BlockSystem permute_similar(const BlockSystem& sys);

struct CongruencePair {
  AssembledMatrix K_tilde;  // W^T K W
  AssembledMatrix W;        // [[I,0,0],[alpha B,I,0],[0,0,I]]
};

/// Admissible step for the congruence: alpha > 0 and, when
/// lambda_max(D) > 0, alpha < 2 / lambda_max(D).
bool alpha_admissible(const BlockSystem& sys, double alpha);

/// Midpoint 1/lambda_max(D) of the admissible interval, or 1 when the
/// interval is unbounded.
double default_alpha(const BlockSystem& sys);

/// Congruence with W = [[I,0,0],[alpha B,I,0],[0,0,I]]; K_tilde is built
/// blockwise. Throws PreconditionError when alpha is not admissible.
CongruencePair congruence_transform(const BlockSystem& sys, double alpha);

/// (A, beta B, beta C, beta^2 D, E), a congruence by diag(I, beta I, I).
BlockSystem rescale_middle(const BlockSystem& sys, double beta);

}  // namespace dsaddle
