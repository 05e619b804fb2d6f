#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dsaddle/block_system.hpp"

namespace dsaddle {

/// Identifiers of the structural conditions evaluated on a block system.
enum class ConditionId {
  N1,   // ker(A) ∩ ker(B) = {0}
  N2,   // ker(B^T) ∩ ker(D) ∩ ker(C) = {0}
  N3,   // ker(C^T) ∩ ker(E) = {0}
  R,    // ran(B) ∩ ran(C^T) = {0}
  DS1,  // ker(A) ⊕ ker(B) = R^n
  DS2,  // ker(E) ⊕ ker(C^T) = R^p
};

std::string_view to_string(ConditionId id);

struct ConditionEntry {
  ConditionId id;
  bool holds = true;
  // Unit vector in the offending intersection for a failed N1/N2/N3/R.
  std::optional<Vector> witness;
};

/// Everything the rules consult, computed once per system.
struct ConditionReport {
  std::vector<ConditionEntry> entries;
  Definiteness def_A = Definiteness::NotSymmetric;
  Definiteness def_D = Definiteness::NotSymmetric;
  Definiteness def_E = Definiteness::NotSymmetric;
  Index rank_B = 0;
  Index rank_C = 0;
  Index null_A = 0;
  Index null_E = 0;
  double lambda_max_D = 0.0;
  bool A_zero = false;
  bool D_zero = false;
  bool E_zero = false;

  const ConditionEntry& at(ConditionId id) const;
  bool holds(ConditionId id) const { return at(id).holds; }
};

enum class Verdict { Invertible, Singular, Undetermined };

std::string_view to_string(Verdict v);

struct Diagnosis {
  Verdict verdict = Verdict::Undetermined;
  // Rule that produced a definitive verdict; empty when undetermined.
  std::string rule;
  // Unit vector u with K u ≈ 0, present exactly when verdict is Singular.
  std::optional<Vector> witness;
  ConditionReport report;
  std::optional<bool> oracle_check;

  bool definitive() const { return verdict != Verdict::Undetermined; }
};

/// Evaluates N1-N3, R, DS1, DS2 and the block classifications.
ConditionReport evaluate_conditions(const BlockSystem& sys,
                                    const ToleranceConfig& tol);

/// Necessary conditions N1-N3; a failure gives Singular with the witness
/// [x;0;0], [0;y;0] or [0;0;z]. Undetermined otherwise.
Diagnosis necessary_conditions(const BlockSystem& sys,
                               const ToleranceConfig& tol);

/// Sufficient test through S1 = D + B A^-1 B^T and S2 = E + C S1^-1 C^T.
/// Undetermined whenever A, S1 or S2 is numerically singular.
Diagnosis schur_sufficient(const BlockSystem& sys, const ToleranceConfig& tol);

/// PSD ladder: with A, D, E PSD and N2, fires the first of
///   case 1: A PD and N3;  case 2: E PD and N1;  case 3: R, N3 and N1.
Diagnosis psd_ladder(const BlockSystem& sys, const ToleranceConfig& tol);

/// The three iff rules for A = 0, E = 0 and D = 0 with the remaining
/// diagonal blocks positive definite.
Diagnosis corollary_rules(const BlockSystem& sys, const ToleranceConfig& tol);

/// With A, D, E PSD and N1, N2, N3: R gives Invertible; failure of R with
/// both direct sums gives Singular with the witness [x1; 0; -z1].
Diagnosis direct_sum_iff(const BlockSystem& sys, const ToleranceConfig& tol);

/// With N3, n >= m, rank(B) = m, DS1 and A PSD: R gives Invertible; for
/// E = 0 a failure of R gives Singular with the witness [-x1; 0; z].
Diagnosis rank_b_iff(const BlockSystem& sys, const ToleranceConfig& tol);

/// rank_b_iff on the permuted system, mapped back.
Diagnosis rank_c_iff(const BlockSystem& sys, const ToleranceConfig& tol);

/// With A, D PSD, N1-N3, null(A) = m and lambda_max(D) < 2, K is
/// nonsingular exactly when E is.
Diagnosis e_iff_rule(const BlockSystem& sys, const ToleranceConfig& tol);

/// Runs necessary_conditions, then schur_sufficient, e_iff_rule,
/// corollary_rules, rank_b_iff, rank_c_iff, direct_sum_iff, psd_ladder and
/// returns the first definitive verdict. The full condition report is
/// attached either way.
Diagnosis diagnose(const BlockSystem& sys, const ToleranceConfig& tol,
                   bool with_oracle = false);

/// Ground truth: sigma_min(K) above the rank threshold.
bool oracle_invertible(const BlockSystem& sys, const ToleranceConfig& tol);

/// ||K u|| / (||K|| ||u||), the relative residual of a witness.
double witness_residual(const BlockSystem& sys, const Vector& u);

}  // namespace dsaddle
