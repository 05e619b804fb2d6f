#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dsaddle/block_system.hpp"

namespace dsaddle {

enum class Spectrum {
  Semidefinite,  // nonzero eigenvalues in [0.5, 2]
  Indefinite,    // nonzero eigenvalues in ±[0.5, 2], both signs present
};

/// Targets for a random block system. Nullities and ranks are exact under
/// the global rank policy; the flags pin down the subspace relations the
/// rules depend on.
struct GeneratorSpec {
  Index n = 1, m = 1, p = 1;
  Index null_A = 0, null_D = 0, null_E = 0;
  Index rank_B = 1, rank_C = 1;
  bool require_DS1 = false;      // ker(A) ⊕ ker(B) = R^n
  bool require_DS2 = false;      // ker(E) ⊕ ker(C^T) = R^p
  bool require_R = false;        // ran(B) ∩ ran(C^T) = {0}
  bool force_overlap_R = false;  // ran(B) ∩ ran(C^T) ≠ {0}
  Spectrum spectrum_A = Spectrum::Semidefinite;
  Spectrum spectrum_D = Spectrum::Semidefinite;
  Spectrum spectrum_E = Spectrum::Semidefinite;
  double scale_D = 1.0;
  std::uint64_t seed = 0;
  int max_attempts = 32;

  /// Throws Error listing the first conflict found.
  void validate() const;
};

/// What the generated instance provably satisfies, measured after
/// construction.
struct Certificate {
  Index null_A = 0, null_D = 0, null_E = 0;
  Index rank_B = 0, rank_C = 0;
  Definiteness def_A = Definiteness::NotSymmetric;
  Definiteness def_D = Definiteness::NotSymmetric;
  Definiteness def_E = Definiteness::NotSymmetric;
  bool N1 = false, N2 = false, N3 = false;
  bool R = false, DS1 = false, DS2 = false;
  int attempts = 0;
  std::uint64_t seed_used = 0;

  /// Named hypotheses that hold, e.g. "null(A)=m", "rank(B)=m", "DS1".
  std::vector<std::string> hypotheses(Index n, Index m, Index p) const;
};

struct GeneratedInstance {
  BlockSystem system;
  Certificate certificate;
};

/// d x d symmetric PSD matrix with exactly k zero eigenvalues.
Matrix gen_psd_with_nullity(Index d, Index k, std::uint64_t seed);

/// rows x cols matrix of rank r with singular values in [0.5, 2].
Matrix gen_rank(Index rows, Index cols, Index r, std::uint64_t seed);

/// Builds an instance meeting every target, retrying with advanced seeds up
/// to spec.max_attempts times. Throws Error when the spec is infeasible or
/// the retries run out.
GeneratedInstance gen_instance(const GeneratorSpec& spec,
                               const ToleranceConfig& tol = {});

/// Measures a certificate for any system.
Certificate certify(const BlockSystem& sys, const ToleranceConfig& tol);

}  // namespace dsaddle
