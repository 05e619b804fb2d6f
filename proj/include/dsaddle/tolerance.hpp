#pragma once

#include <algorithm>
#include <Eigen/Core>

#include "dsaddle/error.hpp"

namespace dsaddle {

/// Relative tolerances for every numerical decision the library makes.
///
/// Rank is decided by singular values: sigma_i counts when
/// sigma_i > rank_rtol * max(rows, cols) * sigma_max. The same policy is
/// used for "numerically nonsingular", so one threshold governs the whole
/// decision ladder.
struct ToleranceConfig {
  double rank_rtol = 1e-10;
  double sym_rtol = 1e-10;
  double psd_rtol = 1e-10;
  double residual_rtol = 1e-8;

  // Throws Error unless every field lies in (0, 1).
  void validate() const;

  double rank_threshold(double sigma_max, Eigen::Index rows,
                        Eigen::Index cols) const {
    const auto scale = static_cast<double>(std::max<Eigen::Index>({rows, cols, 1}));
    return rank_rtol * scale * sigma_max;
  }
};

}  // namespace dsaddle
