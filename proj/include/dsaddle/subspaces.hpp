#pragma once

#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "dsaddle/tolerance.hpp"

namespace dsaddle {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

/// Orthonormal basis of a subspace of R^d. A zero-column basis is the
/// trivial subspace {0}.
class SubspaceBasis {
 public:
  /// The trivial subspace of R^ambient_dim.
  explicit SubspaceBasis(Index ambient_dim);

  /// Wraps columns that are already orthonormal. Throws Error when
  /// ||Q^T Q - I|| exceeds tol.sym_rtol scaled by the column count.
  explicit SubspaceBasis(Matrix orthonormal_columns,
                         const ToleranceConfig& tol = {});

  const Matrix& basis() const { return basis_; }
  Index ambient_dim() const { return basis_.rows(); }
  Index dim() const { return basis_.cols(); }
  bool is_trivial() const { return basis_.cols() == 0; }

  /// Orthogonal projector onto the subspace.
  Matrix projector() const { return basis_ * basis_.transpose(); }

 private:
  Matrix basis_;
};

enum class Definiteness {
  PositiveDefinite,
  PositiveSemidefinite,
  Indefinite,
  NotSymmetric,
};

std::string_view to_string(Definiteness d);

/// True for PositiveDefinite and PositiveSemidefinite.
inline bool is_psd(Definiteness d) {
  return d == Definiteness::PositiveDefinite ||
         d == Definiteness::PositiveSemidefinite;
}

/// Singular values in decreasing order.
Vector singular_values(const Matrix& m);

/// Numerical rank under the global rank policy.
Index rank(const Matrix& m, const ToleranceConfig& tol);

Index nullity(const Matrix& m, const ToleranceConfig& tol);

/// Full rank and square.
bool is_nonsingular(const Matrix& m, const ToleranceConfig& tol);

/// Orthonormal basis of ker(M) from the trailing right singular vectors.
SubspaceBasis kernel_basis(const Matrix& m, const ToleranceConfig& tol);

/// Orthonormal basis of ran(M) from the leading left singular vectors.
SubspaceBasis range_basis(const Matrix& m, const ToleranceConfig& tol);

/// Basis of the intersection of the kernels, taken as the kernel of the
/// vertically stacked matrix. Throws DimensionError on a column mismatch
/// or an empty list.
SubspaceBasis intersection_kernels(std::span<const Matrix> ms,
                                   const ToleranceConfig& tol);

SubspaceBasis intersection_kernels(std::initializer_list<Matrix> ms,
                                   const ToleranceConfig& tol);

struct RangeIntersection {
  bool trivial = true;
  Index dim = 0;
  // Unit vector in ran(first) and ran(second) when the intersection is not
  // trivial.
  std::optional<Vector> witness;
};

/// Decides ran(first) ∩ ran(second) = {0} for two matrices with the same
/// number of rows. Throws DimensionError on a row-count mismatch.
RangeIntersection range_intersection_trivial(const Matrix& first,
                                             const Matrix& second,
                                             const ToleranceConfig& tol);

/// U ⊕ W equals the whole ambient space.
bool is_direct_sum(const SubspaceBasis& u, const SubspaceBasis& w,
                   const ToleranceConfig& tol);

/// Splits x = a + b with a in span(U), b in span(W), assuming U ⊕ W is the
/// ambient space. Returns {a, b}.
std::pair<Vector, Vector> split_direct_sum(const SubspaceBasis& u,
                                           const SubspaceBasis& w,
                                           const Vector& x);

Definiteness classify_definiteness(const Matrix& m, const ToleranceConfig& tol);

/// Largest eigenvalue of a symmetric matrix (0 for an empty one).
double lambda_max(const Matrix& sym);

/// Spectral norm.
double norm2(const Matrix& m);

/// True when ||M||_F <= rank_rtol * scale; used to recognise blocks that
/// are zero relative to the surrounding system.
bool is_zero_block(const Matrix& m, double scale, const ToleranceConfig& tol);

}  // namespace dsaddle
