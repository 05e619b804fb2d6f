#pragma once

// Internal helpers shared by the library sources; not installed.

#include "dsaddle/subspaces.hpp"

namespace dsaddle::detail {

struct SvdParts {
  Matrix u;
  Matrix v;
  Vector sigma;
};

SvdParts full_svd(const Matrix& m);

Index count_rank(const Vector& sigma, Index rows, Index cols,
                 const ToleranceConfig& tol);

// Flips v so that its largest-magnitude entry is positive.
void canonicalize_sign(Vector& v);

// Unit-norm copy with canonical sign.
Vector unit(const Vector& v);

}  // namespace dsaddle::detail
