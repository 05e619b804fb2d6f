#include "dsaddle/instance_gen.hpp"

#include <random>
#include <sstream>

#include <Eigen/QR>

namespace dsaddle {

namespace {

using Rng = std::mt19937_64;

constexpr std::uint64_t kSeedStride = 0x9E3779B97F4A7C15ULL;

Matrix gaussian(Index rows, Index cols, Rng& rng) {
  std::normal_distribution<double> dist(0.0, 1.0);
  Matrix g(rows, cols);
  for (Index j = 0; j < cols; ++j) {
    for (Index i = 0; i < rows; ++i) g(i, j) = dist(rng);
  }
  return g;
}

double uniform(double lo, double hi, Rng& rng) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

// Haar-distributed orthogonal matrix.
Matrix random_orthogonal(Index d, Rng& rng) {
  if (d == 0) return Matrix(0, 0);
  Eigen::HouseholderQR<Matrix> qr(gaussian(d, d, rng));
  Matrix q = qr.householderQ();
  const Matrix& r = qr.matrixQR();
  for (Index j = 0; j < d; ++j) {
    if (r(j, j) < 0.0) q.col(j) *= -1.0;
  }
  return q;
}

// Orthonormal basis of span(K)^⊥ in R^d.
Matrix orthogonal_complement(const Matrix& k) {
  const Index d = k.rows();
  if (k.cols() == 0) return Matrix::Identity(d, d);
  Eigen::HouseholderQR<Matrix> qr(k);
  const Matrix q = qr.householderQ() * Matrix::Identity(d, d);
  return q.rightCols(d - k.cols());
}

// Orthonormal basis of span(K), K of full column rank.
Matrix orthonormalize(const Matrix& k) {
  if (k.cols() == 0) return Matrix(k.rows(), 0);
  Eigen::HouseholderQR<Matrix> qr(k);
  return qr.householderQ() * Matrix::Identity(k.rows(), k.cols());
}

Vector spectrum(Index count, Spectrum kind, Rng& rng) {
  Vector lam(count);
  for (Index i = 0; i < count; ++i) lam(i) = uniform(0.5, 2.0, rng);
  if (kind == Spectrum::Indefinite) {
    for (Index i = 0; i < count; ++i) {
      // First entry stays positive and the second turns negative, so both
      // signs occur; the rest get random signs.
      const bool negative = i == 1 || (i > 1 && uniform(0.0, 1.0, rng) < 0.5);
      if (negative) lam(i) = -lam(i);
    }
  }
  return lam;
}

// Symmetric matrix whose kernel is exactly span(kernel_dirs).
Matrix symmetric_with_kernel(const Matrix& kernel_dirs, Spectrum kind,
                             Rng& rng) {
  const Matrix u = orthogonal_complement(kernel_dirs);
  const Vector lam = spectrum(u.cols(), kind, rng);
  const Matrix s = u * lam.asDiagonal() * u.transpose();
  return 0.5 * (s + s.transpose());
}

// Matrix with column space span(left) and row space span(right), both
// orthonormal with r columns.
Matrix with_spaces(const Matrix& left, const Matrix& right, Rng& rng) {
  const Index r = left.cols();
  Vector sigma(r);
  for (Index i = 0; i < r; ++i) sigma(i) = uniform(0.5, 2.0, rng);
  return left * sigma.asDiagonal() * right.transpose();
}

// A basis of a subspace complementary to span(fixed_perp) that is not the
// orthogonal complement: base + fixed_perp * G with small random G.
Matrix oblique_complement(const Matrix& base, const Matrix& fixed,
                          Rng& rng) {
  if (base.cols() == 0 || fixed.cols() == 0) return base;
  return base + fixed * (0.3 * gaussian(fixed.cols(), base.cols(), rng));
}

BlockSystem build(const GeneratorSpec& s, Rng& rng) {
  // Leading block and B's row space.
  const Matrix qn = random_orthogonal(s.n, rng);
  const Matrix ker_a = qn.leftCols(s.null_A);
  Matrix row_b;
  if (s.require_DS1) {
    // ker(B) is an oblique complement of ker(A); rank_B = null_A here.
    const Matrix ker_b =
        oblique_complement(qn.rightCols(s.n - s.null_A), ker_a, rng);
    row_b = orthogonal_complement(orthonormalize(ker_b));
  } else {
    row_b = random_orthogonal(s.n, rng).leftCols(s.rank_B);
  }
  const Matrix a = symmetric_with_kernel(ker_a, s.spectrum_A, rng);

  // Ranges of B and C^T inside R^m.
  const Matrix qm = random_orthogonal(s.m, rng);
  const Matrix ran_b = qm.leftCols(s.rank_B);
  Matrix ran_ct;
  if (s.require_R) {
    ran_ct = qm.middleCols(s.rank_B, s.rank_C);
  } else if (s.force_overlap_R) {
    Matrix dirs(s.m, s.rank_C);
    dirs.col(0) = qm.col(0);
    if (s.rank_C > 1) dirs.rightCols(s.rank_C - 1) = gaussian(s.m, s.rank_C - 1, rng);
    ran_ct = orthonormalize(dirs);
  } else {
    ran_ct = random_orthogonal(s.m, rng).leftCols(s.rank_C);
  }
  const Matrix b = with_spaces(ran_b, row_b, rng);

  const Matrix qp = random_orthogonal(s.p, rng);
  const Matrix ran_c = qp.leftCols(s.rank_C);
  const Matrix c = with_spaces(ran_c, ran_ct, rng);

  Matrix ker_e;
  if (s.require_DS2) {
    // ker(C^T) = span(qp.rightCols(p - rank_C)); pick an oblique complement.
    ker_e = orthonormalize(
        oblique_complement(ran_c, qp.rightCols(s.p - s.rank_C), rng));
  } else {
    ker_e = random_orthogonal(s.p, rng).leftCols(s.null_E);
  }
  const Matrix e = symmetric_with_kernel(ker_e, s.spectrum_E, rng);

  const Matrix ker_d = random_orthogonal(s.m, rng).leftCols(s.null_D);
  const Matrix d = s.scale_D * symmetric_with_kernel(ker_d, s.spectrum_D, rng);

  return BlockSystem(a, b, c, d, e);
}

bool spectrum_matches(Definiteness got, Spectrum want) {
  return want == Spectrum::Semidefinite ? is_psd(got)
                                        : got == Definiteness::Indefinite;
}

bool meets_targets(const GeneratorSpec& s, const Certificate& c) {
  return c.null_A == s.null_A && c.null_D == s.null_D &&
         c.null_E == s.null_E && c.rank_B == s.rank_B &&
         c.rank_C == s.rank_C && spectrum_matches(c.def_A, s.spectrum_A) &&
         spectrum_matches(c.def_D, s.spectrum_D) &&
         spectrum_matches(c.def_E, s.spectrum_E) &&
         (!s.require_DS1 || c.DS1) && (!s.require_DS2 || c.DS2) &&
         (!s.require_R || c.R) && (!s.force_overlap_R || !c.R);
}

}  // namespace

void GeneratorSpec::validate() const {
  auto fail = [&](const std::string& what) {
    throw Error("infeasible generator spec: " + what);
  };
  if (n < 1 || m < 1 || p < 1) fail("n, m, p must all be >= 1");
  if (null_A < 0 || null_A > n) fail("null_A must lie in [0, n]");
  if (null_D < 0 || null_D > m) fail("null_D must lie in [0, m]");
  if (null_E < 0 || null_E > p) fail("null_E must lie in [0, p]");
  if (rank_B < 0 || rank_B > std::min(m, n)) fail("rank_B must lie in [0, min(m, n)]");
  if (rank_C < 0 || rank_C > std::min(p, m)) fail("rank_C must lie in [0, min(p, m)]");
  if (require_R && force_overlap_R) fail("require_R conflicts with force_overlap_R");
  if (require_R && rank_B + rank_C > m) {
    fail("require_R needs rank_B + rank_C <= m");
  }
  if (force_overlap_R && (rank_B == 0 || rank_C == 0)) {
    fail("force_overlap_R needs rank_B >= 1 and rank_C >= 1");
  }
  if (require_DS1 && null_A != rank_B) {
    fail("require_DS1 needs null_A = rank_B (dimensions of ker(A) and ker(B) must add to n)");
  }
  if (require_DS2 && null_E != rank_C) {
    fail("require_DS2 needs null_E = rank_C (dimensions of ker(E) and ker(C^T) must add to p)");
  }
  if (spectrum_A == Spectrum::Indefinite && n - null_A < 2) {
    fail("an indefinite A needs at least two nonzero eigenvalues");
  }
  if (spectrum_D == Spectrum::Indefinite && m - null_D < 2) {
    fail("an indefinite D needs at least two nonzero eigenvalues");
  }
  if (spectrum_E == Spectrum::Indefinite && p - null_E < 2) {
    fail("an indefinite E needs at least two nonzero eigenvalues");
  }
  if (!(scale_D > 0.0)) fail("scale_D must be positive");
  if (max_attempts < 1) fail("max_attempts must be >= 1");
}

std::vector<std::string> Certificate::hypotheses(Index n, Index m,
                                                 Index p) const {
  std::vector<std::string> out;
  auto add = [&](bool cond, const char* name) {
    if (cond) out.emplace_back(name);
  };
  add(is_psd(def_A), "A PSD");
  add(def_A == Definiteness::PositiveDefinite, "A PD");
  add(null_A == n, "A=0");
  add(is_psd(def_D), "D PSD");
  add(def_D == Definiteness::PositiveDefinite, "D PD");
  add(null_D == m, "D=0");
  add(is_psd(def_E), "E PSD");
  add(def_E == Definiteness::PositiveDefinite, "E PD");
  add(null_E == p, "E=0");
  add(null_A == m, "null(A)=m");
  add(rank_B == m, "rank(B)=m");
  add(rank_B == n, "rank(B)=n");
  add(rank_C == m, "rank(C)=m");
  add(rank_C == p, "rank(C)=p");
  add(N1, "N1");
  add(N2, "N2");
  add(N3, "N3");
  add(R, "R");
  add(DS1, "DS1");
  add(DS2, "DS2");
  return out;
}

Matrix gen_psd_with_nullity(Index d, Index k, std::uint64_t seed) {
  if (d < 0 || k < 0 || k > d) {
    throw Error("gen_psd_with_nullity: need 0 <= k <= d");
  }
  Rng rng(seed);
  const Matrix q = random_orthogonal(d, rng);
  return symmetric_with_kernel(q.leftCols(k), Spectrum::Semidefinite, rng);
}

Matrix gen_rank(Index rows, Index cols, Index r, std::uint64_t seed) {
  if (rows < 0 || cols < 0 || r < 0 || r > std::min(rows, cols)) {
    throw Error("gen_rank: need 0 <= r <= min(rows, cols)");
  }
  Rng rng(seed);
  const Matrix left = random_orthogonal(rows, rng).leftCols(r);
  const Matrix right = random_orthogonal(cols, rng).leftCols(r);
  return with_spaces(left, right, rng);
}

Certificate certify(const BlockSystem& sys, const ToleranceConfig& tol) {
  Certificate c;
  const Matrix bt = sys.B().transpose();
  const Matrix ct = sys.C().transpose();
  const auto ker_a = kernel_basis(sys.A(), tol);
  const auto ker_e = kernel_basis(sys.E(), tol);
  c.null_A = ker_a.dim();
  c.null_D = nullity(sys.D(), tol);
  c.null_E = ker_e.dim();
  c.rank_B = rank(sys.B(), tol);
  c.rank_C = rank(sys.C(), tol);
  c.def_A = classify_definiteness(sys.A(), tol);
  c.def_D = classify_definiteness(sys.D(), tol);
  c.def_E = classify_definiteness(sys.E(), tol);
  c.N1 = intersection_kernels({sys.A(), sys.B()}, tol).is_trivial();
  c.N2 = intersection_kernels({bt, sys.D(), sys.C()}, tol).is_trivial();
  c.N3 = intersection_kernels({ct, sys.E()}, tol).is_trivial();
  c.R = range_intersection_trivial(sys.B(), ct, tol).trivial;
  c.DS1 = is_direct_sum(ker_a, kernel_basis(sys.B(), tol), tol);
  c.DS2 = is_direct_sum(ker_e, kernel_basis(ct, tol), tol);
  return c;
}

GeneratedInstance gen_instance(const GeneratorSpec& spec,
                               const ToleranceConfig& tol) {
  spec.validate();
  for (int attempt = 0; attempt < spec.max_attempts; ++attempt) {
    const std::uint64_t seed =
        spec.seed + static_cast<std::uint64_t>(attempt) * kSeedStride;
    Rng rng(seed);
    BlockSystem sys = build(spec, rng);
    Certificate cert = certify(sys, tol);
    cert.attempts = attempt + 1;
    cert.seed_used = seed;
    if (meets_targets(spec, cert)) return {std::move(sys), std::move(cert)};
  }
  std::ostringstream msg;
  msg << "gen_instance: targets not met after " << spec.max_attempts
      << " attempts";
  throw Error(msg.str());
}

}  // namespace dsaddle
