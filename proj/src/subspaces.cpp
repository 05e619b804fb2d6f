#include "dsaddle/subspaces.hpp"

#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <Eigen/SVD>

#include "linalg_detail.hpp"

namespace dsaddle {

void ToleranceConfig::validate() const {
  auto check = [](double v, const char* name) {
    if (!(v > 0.0 && v < 1.0)) {
      std::ostringstream msg;
      msg << "tolerance " << name << " must lie in (0, 1), got " << v;
      throw Error(msg.str());
    }
  };
  check(rank_rtol, "rank_rtol");
  check(sym_rtol, "sym_rtol");
  check(psd_rtol, "psd_rtol");
  check(residual_rtol, "residual_rtol");
}

SubspaceBasis::SubspaceBasis(Index ambient_dim) : basis_(ambient_dim, 0) {
  if (ambient_dim < 0) throw DimensionError("negative ambient dimension");
}

SubspaceBasis::SubspaceBasis(Matrix orthonormal_columns,
                             const ToleranceConfig& tol)
    : basis_(std::move(orthonormal_columns)) {
  const Index k = basis_.cols();
  if (k > basis_.rows()) {
    throw DimensionError("subspace basis has more columns than rows");
  }
  if (k == 0) return;
  const double defect =
      (basis_.transpose() * basis_ - Matrix::Identity(k, k)).norm();
  if (defect > tol.sym_rtol * static_cast<double>(k)) {
    std::ostringstream msg;
    msg << "basis columns are not orthonormal (||Q^T Q - I||_F = " << defect
        << ")";
    throw Error(msg.str());
  }
}

std::string_view to_string(Definiteness d) {
  switch (d) {
    case Definiteness::PositiveDefinite:
      return "positive_definite";
    case Definiteness::PositiveSemidefinite:
      return "positive_semidefinite";
    case Definiteness::Indefinite:
      return "indefinite";
    case Definiteness::NotSymmetric:
      return "not_symmetric";
  }
  return "unknown";
}

namespace detail {

SvdParts full_svd(const Matrix& m) {
  SvdParts out;
  if (m.rows() == 0 || m.cols() == 0) {
    out.u = Matrix::Identity(m.rows(), m.rows());
    out.v = Matrix::Identity(m.cols(), m.cols());
    out.sigma = Vector(0);
    return out;
  }
  Eigen::BDCSVD<Matrix> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  out.u = svd.matrixU();
  out.v = svd.matrixV();
  out.sigma = svd.singularValues();
  return out;
}

Index count_rank(const Vector& sigma, Index rows, Index cols,
                 const ToleranceConfig& tol) {
  if (sigma.size() == 0) return 0;
  const double smax = sigma(0);
  if (!(smax > 0.0)) return 0;
  const double cut = tol.rank_threshold(smax, rows, cols);
  Index r = 0;
  for (Index i = 0; i < sigma.size(); ++i) {
    if (sigma(i) > cut) ++r;
  }
  return r;
}

void canonicalize_sign(Vector& v) {
  if (v.size() == 0) return;
  Index imax = 0;
  v.cwiseAbs().maxCoeff(&imax);
  if (v(imax) < 0.0) v = -v;
}

Vector unit(const Vector& v) {
  Vector out = v;
  const double nrm = out.norm();
  if (nrm > 0.0) out /= nrm;
  canonicalize_sign(out);
  return out;
}

}  // namespace detail

Vector singular_values(const Matrix& m) {
  if (m.rows() == 0 || m.cols() == 0) return Vector(0);
  Eigen::BDCSVD<Matrix> svd(m);
  return svd.singularValues();
}

Index rank(const Matrix& m, const ToleranceConfig& tol) {
  return detail::count_rank(singular_values(m), m.rows(), m.cols(), tol);
}

Index nullity(const Matrix& m, const ToleranceConfig& tol) {
  return kernel_basis(m, tol).dim();
}

bool is_nonsingular(const Matrix& m, const ToleranceConfig& tol) {
  if (m.rows() != m.cols()) return false;
  return rank(m, tol) == m.rows();
}

SubspaceBasis kernel_basis(const Matrix& m, const ToleranceConfig& tol) {
  const Index cols = m.cols();
  if (m.rows() == 0 || cols == 0) {
    return SubspaceBasis(Matrix(Matrix::Identity(cols, cols)), tol);
  }
  const auto parts = detail::full_svd(m);
  const Index r = detail::count_rank(parts.sigma, m.rows(), cols, tol);
  return SubspaceBasis(Matrix(parts.v.rightCols(cols - r)), tol);
}

SubspaceBasis range_basis(const Matrix& m, const ToleranceConfig& tol) {
  if (m.rows() == 0 || m.cols() == 0) return SubspaceBasis(m.rows());
  const auto parts = detail::full_svd(m);
  const Index r = detail::count_rank(parts.sigma, m.rows(), m.cols(), tol);
  return SubspaceBasis(Matrix(parts.u.leftCols(r)), tol);
}

SubspaceBasis intersection_kernels(std::span<const Matrix> ms,
                                   const ToleranceConfig& tol) {
  if (ms.empty()) throw DimensionError("intersection_kernels: empty list");
  const Index cols = ms.front().cols();
  Index rows = 0;
  for (const auto& m : ms) {
    if (m.cols() != cols) {
      std::ostringstream msg;
      msg << "intersection_kernels: column mismatch (" << m.cols() << " vs "
          << cols << ")";
      throw DimensionError(msg.str());
    }
    rows += m.rows();
  }
  Matrix stacked(rows, cols);
  Index at = 0;
  for (const auto& m : ms) {
    stacked.middleRows(at, m.rows()) = m;
    at += m.rows();
  }
  return kernel_basis(stacked, tol);
}

SubspaceBasis intersection_kernels(std::initializer_list<Matrix> ms,
                                   const ToleranceConfig& tol) {
  return intersection_kernels(std::span<const Matrix>(ms.begin(), ms.size()),
                              tol);
}

RangeIntersection range_intersection_trivial(const Matrix& first,
                                             const Matrix& second,
                                             const ToleranceConfig& tol) {
  if (first.rows() != second.rows()) {
    std::ostringstream msg;
    msg << "range_intersection_trivial: row mismatch (" << first.rows()
        << " vs " << second.rows() << ")";
    throw DimensionError(msg.str());
  }
  RangeIntersection out;
  const auto u1 = range_basis(first, tol);
  const auto u2 = range_basis(second, tol);
  if (u1.is_trivial() || u2.is_trivial()) return out;

  // [U1, -U2] c = 0 pairs up coordinates of a shared vector.
  Matrix joined(first.rows(), u1.dim() + u2.dim());
  joined << u1.basis(), -u2.basis();
  const auto coupling = kernel_basis(joined, tol);
  if (coupling.is_trivial()) return out;

  out.trivial = false;
  out.dim = coupling.dim();
  const Vector coeffs = coupling.basis().col(0).head(u1.dim());
  out.witness = detail::unit(u1.basis() * coeffs);
  return out;
}

bool is_direct_sum(const SubspaceBasis& u, const SubspaceBasis& w,
                   const ToleranceConfig& tol) {
  if (u.ambient_dim() != w.ambient_dim()) {
    throw DimensionError("is_direct_sum: ambient dimension mismatch");
  }
  const Index d = u.ambient_dim();
  if (u.dim() + w.dim() != d) return false;
  if (d == 0) return true;
  Matrix joined(d, d);
  joined << u.basis(), w.basis();
  return rank(joined, tol) == d;
}

std::pair<Vector, Vector> split_direct_sum(const SubspaceBasis& u,
                                           const SubspaceBasis& w,
                                           const Vector& x) {
  const Index d = u.ambient_dim();
  if (w.ambient_dim() != d || x.size() != d || u.dim() + w.dim() != d) {
    throw DimensionError("split_direct_sum: subspaces do not span the space");
  }
  if (d == 0) return {Vector(0), Vector(0)};
  Matrix joined(d, d);
  joined << u.basis(), w.basis();
  const Vector c = joined.partialPivLu().solve(x);
  return {u.basis() * c.head(u.dim()), w.basis() * c.tail(w.dim())};
}

Definiteness classify_definiteness(const Matrix& m,
                                   const ToleranceConfig& tol) {
  if (m.rows() != m.cols()) return Definiteness::NotSymmetric;
  if (m.rows() == 0) return Definiteness::PositiveDefinite;
  const double fro = m.norm();
  if ((m - m.transpose()).norm() > tol.sym_rtol * fro) {
    return Definiteness::NotSymmetric;
  }
  const Matrix sym = 0.5 * (m + m.transpose());
  Eigen::SelfAdjointEigenSolver<Matrix> eig(sym, Eigen::EigenvaluesOnly);
  const Vector& lam = eig.eigenvalues();
  const double scale = lam.cwiseAbs().maxCoeff();
  const double lmin = lam(0);
  if (lmin > tol.psd_rtol * scale) return Definiteness::PositiveDefinite;
  if (lmin >= -tol.psd_rtol * scale) return Definiteness::PositiveSemidefinite;
  return Definiteness::Indefinite;
}

double lambda_max(const Matrix& sym) {
  if (sym.rows() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<Matrix> eig(0.5 * (sym + sym.transpose()),
                                            Eigen::EigenvaluesOnly);
  return eig.eigenvalues()(sym.rows() - 1);
}

double norm2(const Matrix& m) {
  const Vector s = singular_values(m);
  return s.size() == 0 ? 0.0 : s(0);
}

bool is_zero_block(const Matrix& m, double scale, const ToleranceConfig& tol) {
  return m.norm() <= tol.rank_rtol * scale;
}

}  // namespace dsaddle
