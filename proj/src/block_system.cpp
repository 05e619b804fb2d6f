#include "dsaddle/block_system.hpp"

#include <cmath>
#include <sstream>

namespace dsaddle {

namespace {

std::string shape(const Matrix& m) {
  std::ostringstream s;
  s << m.rows() << "x" << m.cols();
  return s.str();
}

void require_shape(const Matrix& m, Index rows, Index cols, const char* name) {
  if (m.rows() != rows || m.cols() != cols) {
    std::ostringstream msg;
    msg << "block " << name << " is " << shape(m) << ", expected " << rows
        << "x" << cols;
    throw DimensionError(msg.str());
  }
}

void require_finite(const Matrix& m, const char* name) {
  if (!m.allFinite()) {
    throw Error(std::string("block ") + name + " has non-finite entries");
  }
}

void require_symmetric(const Matrix& m, const char* name,
                       const ToleranceConfig& tol) {
  if ((m - m.transpose()).norm() > tol.sym_rtol * m.norm()) {
    throw Error(std::string("block ") + name + " is not symmetric");
  }
}

bool same(const Matrix& x, const Matrix& y) {
  return x.rows() == y.rows() && x.cols() == y.cols() && x == y;
}

}  // namespace

BlockSystem::BlockSystem(Matrix a, Matrix b, Matrix c, Matrix d, Matrix e,
                         const ToleranceConfig& tol)
    : a_(std::move(a)),
      b_(std::move(b)),
      c_(std::move(c)),
      d_(std::move(d)),
      e_(std::move(e)) {
  const Index n = a_.rows();
  const Index m = b_.rows();
  const Index p = c_.rows();
  if (n < 1 || m < 1 || p < 1) {
    throw DimensionError("block sizes n, m, p must all be at least 1 (got " +
                         shape(a_) + ", " + shape(b_) + ", " + shape(c_) + ")");
  }
  require_shape(a_, n, n, "A");
  require_shape(b_, m, n, "B");
  require_shape(c_, p, m, "C");
  require_shape(d_, m, m, "D");
  require_shape(e_, p, p, "E");
  require_finite(a_, "A");
  require_finite(b_, "B");
  require_finite(c_, "C");
  require_finite(d_, "D");
  require_finite(e_, "E");
  require_symmetric(a_, "A", tol);
  require_symmetric(d_, "D", tol);
  require_symmetric(e_, "E", tol);
}

BlockSystem BlockSystem::without_diagonal_tail(Matrix a, Matrix b, Matrix c,
                                               const ToleranceConfig& tol) {
  const Index m = b.rows();
  const Index p = c.rows();
  return BlockSystem(std::move(a), std::move(b), std::move(c),
                     Matrix::Zero(m, m), Matrix::Zero(p, p), tol);
}

bool operator==(const BlockSystem& x, const BlockSystem& y) {
  return same(x.a_, y.a_) && same(x.b_, y.b_) && same(x.c_, y.c_) &&
         same(x.d_, y.d_) && same(x.e_, y.e_);
}

AssembledMatrix assemble(const BlockSystem& sys) {
  AssembledMatrix out{Matrix::Zero(sys.size(), sys.size()), sys.n(), sys.m(),
                      sys.p()};
  out.block(0, 0) = sys.A();
  out.block(0, 1) = sys.B().transpose();
  out.block(1, 0) = sys.B();
  out.block(1, 1) = -sys.D();
  out.block(1, 2) = sys.C().transpose();
  out.block(2, 1) = sys.C();
  out.block(2, 2) = sys.E();
  return out;
}

Matrix block_reversal(Index n, Index m, Index p) {
  const Index l = n + m + p;
  Matrix perm = Matrix::Zero(l, l);
  perm.block(0, n + m, p, p).setIdentity();
  perm.block(p, n, m, m).setIdentity();
  perm.block(p + m, 0, n, n).setIdentity();
  return perm;
}

Vector reverse_blocks(const Vector& u, Index first, Index mid, Index last) {
  if (u.size() != first + mid + last) {
    throw DimensionError("reverse_blocks: vector length mismatch");
  }
  Vector out(u.size());
  out.head(last) = u.tail(last);
  out.segment(last, mid) = u.segment(first, mid);
  out.tail(first) = u.head(first);
  return out;
}

BlockSystem permute_similar(const BlockSystem& sys) {
  return BlockSystem(sys.E(), sys.C().transpose(), sys.B().transpose(),
                     sys.D(), sys.A());
}

bool alpha_admissible(const BlockSystem& sys, double alpha) {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) return false;
  const double lmax = lambda_max(sys.D());
  if (lmax > 0.0) return alpha < 2.0 / lmax;
  return true;
}

double default_alpha(const BlockSystem& sys) {
  const double lmax = lambda_max(sys.D());
  return lmax > 0.0 ? 1.0 / lmax : 1.0;
}

CongruencePair congruence_transform(const BlockSystem& sys, double alpha) {
  if (!alpha_admissible(sys, alpha)) {
    const double lmax = lambda_max(sys.D());
    std::ostringstream msg;
    msg << "alpha = " << alpha << " is outside the admissible interval (0, ";
    if (lmax > 0.0) {
      msg << 2.0 / lmax << ") = (0, 2/lambda_max(D))";
    } else {
      msg << "inf)";
    }
    throw PreconditionError(msg.str());
  }
  const Index n = sys.n(), m = sys.m(), p = sys.p();
  const Matrix& A = sys.A();
  const Matrix& B = sys.B();
  const Matrix& C = sys.C();
  const Matrix& D = sys.D();
  const Matrix M = 2.0 * Matrix::Identity(m, m) - alpha * D;

  AssembledMatrix kt{Matrix::Zero(sys.size(), sys.size()), n, m, p};
  const Matrix b1 = B - alpha * D * B;
  const Matrix cb = alpha * C * B;
  kt.block(0, 0) = A + alpha * B.transpose() * M * B;
  kt.block(1, 0) = b1;
  kt.block(0, 1) = b1.transpose();
  kt.block(2, 0) = cb;
  kt.block(0, 2) = cb.transpose();
  kt.block(1, 1) = -D;
  kt.block(2, 1) = C;
  kt.block(1, 2) = C.transpose();
  kt.block(2, 2) = sys.E();

  AssembledMatrix w{Matrix::Identity(sys.size(), sys.size()), n, m, p};
  w.block(1, 0) = alpha * B;
  return {std::move(kt), std::move(w)};
}

BlockSystem rescale_middle(const BlockSystem& sys, double beta) {
  if (!(beta > 0.0) || !std::isfinite(beta)) {
    std::ostringstream msg;
    msg << "rescale_middle: beta must be positive, got " << beta;
    throw PreconditionError(msg.str());
  }
  return BlockSystem(sys.A(), beta * sys.B(), beta * sys.C(),
                     beta * beta * sys.D(), sys.E());
}

}  // namespace dsaddle
