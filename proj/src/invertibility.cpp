#include "dsaddle/invertibility.hpp"

#include <algorithm>

#include <Eigen/Cholesky>
#include <Eigen/LU>
#include <Eigen/QR>

#include "linalg_detail.hpp"

namespace dsaddle {

std::string_view to_string(ConditionId id) {
  switch (id) {
    case ConditionId::N1:
      return "N1";
    case ConditionId::N2:
      return "N2";
    case ConditionId::N3:
      return "N3";
    case ConditionId::R:
      return "R";
    case ConditionId::DS1:
      return "DS1";
    case ConditionId::DS2:
      return "DS2";
  }
  return "?";
}

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::Invertible:
      return "invertible";
    case Verdict::Singular:
      return "singular";
    case Verdict::Undetermined:
      return "undetermined";
  }
  return "?";
}

const ConditionEntry& ConditionReport::at(ConditionId id) const {
  for (const auto& e : entries) {
    if (e.id == id) return e;
  }
  throw Error("condition report has no entry " + std::string(to_string(id)));
}

namespace {

ConditionEntry kernel_condition(ConditionId id,
                                std::initializer_list<Matrix> ms,
                                const ToleranceConfig& tol) {
  const auto basis = intersection_kernels(ms, tol);
  ConditionEntry entry{id, basis.is_trivial(), std::nullopt};
  if (!entry.holds) entry.witness = detail::unit(basis.basis().col(0));
  return entry;
}

Vector embed(const BlockSystem& sys, const Vector& x, const Vector& y,
             const Vector& z) {
  Vector u(sys.size());
  u << x, y, z;
  return detail::unit(u);
}

Diagnosis invertible(std::string rule, const ConditionReport& report) {
  Diagnosis d;
  d.verdict = Verdict::Invertible;
  d.rule = std::move(rule);
  d.report = report;
  return d;
}

Diagnosis singular(std::string rule, Vector witness,
                   const ConditionReport& report) {
  Diagnosis d;
  d.verdict = Verdict::Singular;
  d.rule = std::move(rule);
  d.witness = std::move(witness);
  d.report = report;
  return d;
}

Diagnosis undetermined(const ConditionReport& report) {
  Diagnosis d;
  d.report = report;
  return d;
}

bool all_psd(const ConditionReport& r) {
  return is_psd(r.def_A) && is_psd(r.def_D) && is_psd(r.def_E);
}

// Least-squares preimage: argmin ||M x - w||.
Vector preimage(const Matrix& m, const Vector& w) {
  return m.completeOrthogonalDecomposition().solve(w);
}

// The rules below share one precomputed report.

Diagnosis necessary_from(const BlockSystem& sys, const ConditionReport& r) {
  const Vector zn = Vector::Zero(sys.n());
  const Vector zm = Vector::Zero(sys.m());
  const Vector zp = Vector::Zero(sys.p());
  if (const auto& c = r.at(ConditionId::N1); !c.holds) {
    return singular("necessary_conditions(i)", embed(sys, *c.witness, zm, zp),
                    r);
  }
  if (const auto& c = r.at(ConditionId::N2); !c.holds) {
    return singular("necessary_conditions(ii)", embed(sys, zn, *c.witness, zp),
                    r);
  }
  if (const auto& c = r.at(ConditionId::N3); !c.holds) {
    return singular("necessary_conditions(iii)",
                    embed(sys, zn, zm, *c.witness), r);
  }
  return undetermined(r);
}

Diagnosis schur_from(const BlockSystem& sys, const ConditionReport& r,
                     const ToleranceConfig& tol) {
  if (!is_nonsingular(sys.A(), tol)) return undetermined(r);
  const Matrix s1 =
      sys.D() + sys.B() * sys.A().partialPivLu().solve(sys.B().transpose());
  if (!is_nonsingular(s1, tol)) return undetermined(r);
  const Matrix s2 =
      sys.E() + sys.C() * s1.partialPivLu().solve(sys.C().transpose());
  if (!is_nonsingular(s2, tol)) return undetermined(r);
  return invertible("schur_sufficient", r);
}

Diagnosis psd_ladder_from(const ConditionReport& r) {
  if (!all_psd(r) || !r.holds(ConditionId::N2)) return undetermined(r);
  const bool n1 = r.holds(ConditionId::N1);
  const bool n3 = r.holds(ConditionId::N3);
  if (r.def_A == Definiteness::PositiveDefinite && n3) {
    return invertible("psd_ladder(case 1)", r);
  }
  if (r.def_E == Definiteness::PositiveDefinite && n1) {
    return invertible("psd_ladder(case 2)", r);
  }
  if (r.holds(ConditionId::R) && n3 && n1) {
    return invertible("psd_ladder(case 3)", r);
  }
  return undetermined(r);
}

Diagnosis corollary_from(const BlockSystem& sys, const ConditionReport& r,
                         const ToleranceConfig& tol) {
  constexpr auto PD = Definiteness::PositiveDefinite;
  const Vector zn = Vector::Zero(sys.n());
  const Vector zm = Vector::Zero(sys.m());
  const Vector zp = Vector::Zero(sys.p());

  if (r.A_zero && r.def_D == PD && r.def_E == PD && sys.m() >= sys.n()) {
    if (r.rank_B == sys.n()) return invertible("corollary_rank_b", r);
    const auto ker = kernel_basis(sys.B(), tol);
    return singular("corollary_rank_b",
                    embed(sys, ker.basis().col(0), zm, zp), r);
  }
  if (r.E_zero && r.def_A == PD && r.def_D == PD && sys.m() >= sys.p()) {
    if (r.rank_C == sys.p()) return invertible("corollary_rank_c", r);
    const auto ker = kernel_basis(sys.C().transpose(), tol);
    return singular("corollary_rank_c",
                    embed(sys, zn, zm, ker.basis().col(0)), r);
  }
  if (r.D_zero && r.def_A == PD && r.def_E == PD) {
    const auto ker = intersection_kernels({sys.B().transpose(), sys.C()}, tol);
    if (ker.is_trivial()) return invertible("corollary_kernel", r);
    return singular("corollary_kernel",
                    embed(sys, zn, ker.basis().col(0), zp), r);
  }
  return undetermined(r);
}

Diagnosis direct_sum_from(const BlockSystem& sys, const ConditionReport& r,
                          const ToleranceConfig& tol) {
  if (!all_psd(r)) return undetermined(r);
  if (!r.holds(ConditionId::N1) || !r.holds(ConditionId::N2) ||
      !r.holds(ConditionId::N3)) {
    return undetermined(r);
  }
  const auto& range = r.at(ConditionId::R);
  if (range.holds) return invertible("direct_sum_iff", r);
  if (!r.holds(ConditionId::DS1) || !r.holds(ConditionId::DS2)) {
    return undetermined(r);
  }
  const Vector& w = *range.witness;
  const Matrix ct = sys.C().transpose();
  const auto [x1, x2] = split_direct_sum(kernel_basis(sys.A(), tol),
                                         kernel_basis(sys.B(), tol),
                                         preimage(sys.B(), w));
  const auto [z1, z2] = split_direct_sum(kernel_basis(sys.E(), tol),
                                         kernel_basis(ct, tol),
                                         preimage(ct, w));
  return singular("direct_sum_iff",
                  embed(sys, x1, Vector::Zero(sys.m()), -z1), r);
}

Diagnosis rank_b_from(const BlockSystem& sys, const ConditionReport& r,
                      const ToleranceConfig& tol, const char* rule) {
  if (!r.holds(ConditionId::N3) || sys.n() < sys.m() ||
      r.rank_B != sys.m() || !r.holds(ConditionId::DS1) || !is_psd(r.def_A)) {
    return undetermined(r);
  }
  const auto& range = r.at(ConditionId::R);
  if (range.holds) return invertible(rule, r);
  if (!r.E_zero) return undetermined(r);
  const Vector& w = *range.witness;
  const auto [x1, x2] = split_direct_sum(kernel_basis(sys.A(), tol),
                                         kernel_basis(sys.B(), tol),
                                         preimage(sys.B(), w));
  const Vector z = preimage(sys.C().transpose(), w);
  return singular(rule, embed(sys, -x1, Vector::Zero(sys.m()), z), r);
}

Diagnosis e_iff_from(const BlockSystem& sys, const ConditionReport& r,
                     const ToleranceConfig& tol) {
  if (!is_psd(r.def_A) || !is_psd(r.def_D)) return undetermined(r);
  if (!r.holds(ConditionId::N1) || !r.holds(ConditionId::N2) ||
      !r.holds(ConditionId::N3)) {
    return undetermined(r);
  }
  if (r.null_A != sys.m() || !(r.lambda_max_D < 2.0)) return undetermined(r);

  const auto kerE = kernel_basis(sys.E(), tol);
  if (kerE.is_trivial()) return invertible("e_iff_rule", r);

  // Pull a kernel vector [0;0;v] of the middle factor of the alpha = 1
  // factorisation of W^T K W back to K.
  const Matrix& B = sys.B();
  const Index m = sys.m();
  const Matrix twoMinusD = 2.0 * Matrix::Identity(m, m) - sys.D();
  const Matrix a1 = sys.A() + B.transpose() * twoMinusD * B;
  const Matrix b1 = B - sys.D() * B;
  const Vector v = kerE.basis().col(0);
  const Vector ctv = sys.C().transpose() * v;
  const Vector q1 = -a1.ldlt().solve((B + b1).transpose() * ctv);
  const Vector q2 = ctv;
  return singular("e_iff_rule", embed(sys, q1, B * q1 + q2, v), r);
}

}  // namespace

ConditionReport evaluate_conditions(const BlockSystem& sys,
                                    const ToleranceConfig& tol) {
  ConditionReport r;
  const Matrix bt = sys.B().transpose();
  const Matrix ct = sys.C().transpose();

  r.entries.push_back(kernel_condition(ConditionId::N1, {sys.A(), sys.B()}, tol));
  r.entries.push_back(
      kernel_condition(ConditionId::N2, {bt, sys.D(), sys.C()}, tol));
  r.entries.push_back(kernel_condition(ConditionId::N3, {ct, sys.E()}, tol));

  const auto range = range_intersection_trivial(sys.B(), ct, tol);
  r.entries.push_back({ConditionId::R, range.trivial, range.witness});

  const auto kerA = kernel_basis(sys.A(), tol);
  const auto kerE = kernel_basis(sys.E(), tol);
  r.entries.push_back({ConditionId::DS1,
                       is_direct_sum(kerA, kernel_basis(sys.B(), tol), tol),
                       std::nullopt});
  r.entries.push_back(
      {ConditionId::DS2, is_direct_sum(kerE, kernel_basis(ct, tol), tol),
       std::nullopt});

  r.def_A = classify_definiteness(sys.A(), tol);
  r.def_D = classify_definiteness(sys.D(), tol);
  r.def_E = classify_definiteness(sys.E(), tol);
  r.rank_B = rank(sys.B(), tol);
  r.rank_C = rank(sys.C(), tol);
  r.null_A = kerA.dim();
  r.null_E = kerE.dim();
  r.lambda_max_D = lambda_max(sys.D());

  const double scale = assemble(sys).K.norm();
  r.A_zero = is_zero_block(sys.A(), scale, tol);
  r.D_zero = is_zero_block(sys.D(), scale, tol);
  r.E_zero = is_zero_block(sys.E(), scale, tol);
  return r;
}

Diagnosis necessary_conditions(const BlockSystem& sys,
                               const ToleranceConfig& tol) {
  return necessary_from(sys, evaluate_conditions(sys, tol));
}

Diagnosis schur_sufficient(const BlockSystem& sys, const ToleranceConfig& tol) {
  return schur_from(sys, evaluate_conditions(sys, tol), tol);
}

Diagnosis psd_ladder(const BlockSystem& sys, const ToleranceConfig& tol) {
  return psd_ladder_from(evaluate_conditions(sys, tol));
}

Diagnosis corollary_rules(const BlockSystem& sys, const ToleranceConfig& tol) {
  return corollary_from(sys, evaluate_conditions(sys, tol), tol);
}

Diagnosis direct_sum_iff(const BlockSystem& sys, const ToleranceConfig& tol) {
  return direct_sum_from(sys, evaluate_conditions(sys, tol), tol);
}

Diagnosis rank_b_iff(const BlockSystem& sys, const ToleranceConfig& tol) {
  return rank_b_from(sys, evaluate_conditions(sys, tol), tol, "rank_b_iff");
}

namespace {

Diagnosis rank_c_from(const BlockSystem& sys, const ConditionReport& r,
                      const ToleranceConfig& tol) {
  const auto permuted = permute_similar(sys);
  auto d = rank_b_from(permuted, evaluate_conditions(permuted, tol), tol,
                       "rank_c_iff");
  d.report = r;
  if (d.witness) {
    d.witness = detail::unit(
        reverse_blocks(*d.witness, permuted.n(), permuted.m(), permuted.p()));
  }
  return d;
}

}  // namespace

Diagnosis rank_c_iff(const BlockSystem& sys, const ToleranceConfig& tol) {
  return rank_c_from(sys, evaluate_conditions(sys, tol), tol);
}

Diagnosis e_iff_rule(const BlockSystem& sys, const ToleranceConfig& tol) {
  return e_iff_from(sys, evaluate_conditions(sys, tol), tol);
}

Diagnosis diagnose(const BlockSystem& sys, const ToleranceConfig& tol,
                   bool with_oracle) {
  const auto report = evaluate_conditions(sys, tol);
  auto result = [&]() -> Diagnosis {
    if (auto d = necessary_from(sys, report); d.definitive()) return d;
    if (auto d = schur_from(sys, report, tol); d.definitive()) return d;
    if (auto d = e_iff_from(sys, report, tol); d.definitive()) return d;
    if (auto d = corollary_from(sys, report, tol); d.definitive()) return d;
    if (auto d = rank_b_from(sys, report, tol, "rank_b_iff"); d.definitive()) {
      return d;
    }
    if (auto d = rank_c_from(sys, report, tol); d.definitive()) return d;
    if (auto d = direct_sum_from(sys, report, tol); d.definitive()) return d;
    return psd_ladder_from(report);
  }();
  if (with_oracle) result.oracle_check = oracle_invertible(sys, tol);
  return result;
}

bool oracle_invertible(const BlockSystem& sys, const ToleranceConfig& tol) {
  return is_nonsingular(assemble(sys).K, tol);
}

double witness_residual(const BlockSystem& sys, const Vector& u) {
  const Matrix k = assemble(sys).K;
  if (u.size() != k.cols()) {
    throw DimensionError("witness_residual: vector length mismatch");
  }
  const double denom = norm2(k) * u.norm();
  return denom > 0.0 ? (k * u).norm() / denom : 0.0;
}

}  // namespace dsaddle
