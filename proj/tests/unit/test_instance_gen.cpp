#include <algorithm>

#include "support.hpp"

#include "dsaddle/invertibility.hpp"

using namespace dsaddle;

namespace {

const ToleranceConfig tol;

bool has(const std::vector<std::string>& xs, const std::string& x) {
  return std::find(xs.begin(), xs.end(), x) != xs.end();
}

}  // namespace

TEST_CASE("gen_psd_with_nullity examples") {
  const Matrix pd = gen_psd_with_nullity(3, 0, 1);
  CHECK(classify_definiteness(pd, tol) == Definiteness::PositiveDefinite);
  CHECK(gen_psd_with_nullity(3, 3, 1).norm() == 0.0);
  const Matrix one = gen_psd_with_nullity(3, 1, 1);
  CHECK(nullity(one, tol) == 1);
  CHECK(classify_definiteness(one, tol) == Definiteness::PositiveSemidefinite);
  CHECK((one - one.transpose()).norm() == 0.0);
  CHECK_THROWS_AS(gen_psd_with_nullity(3, 4, 1), Error);
  CHECK_THROWS_AS(gen_psd_with_nullity(3, -1, 1), Error);
}

TEST_CASE("gen_rank examples") {
  CHECK(gen_rank(3, 4, 0, 2).norm() == 0.0);
  CHECK(rank(gen_rank(3, 4, 3, 2), tol) == 3);
  const Matrix outer = gen_rank(3, 4, 1, 2);
  CHECK(rank(outer, tol) == 1);
  const Vector sv = singular_values(gen_rank(5, 4, 4, 3));
  CHECK(sv.maxCoeff() <= 2.0);
  CHECK(sv.minCoeff() >= 0.5);
  CHECK_THROWS_AS(gen_rank(3, 4, 4, 2), Error);
}

TEST_CASE("gen_instance examples") {
  auto sp = dsaddle::test::spec(4, 2, 2, 1);
  sp.null_A = 2;
  sp.rank_B = 2;
  sp.require_DS1 = true;
  const auto g = gen_instance(sp);
  const auto hyp = g.certificate.hypotheses(4, 2, 2);
  CHECK(has(hyp, "null(A)=m"));
  CHECK(has(hyp, "DS1"));
  CHECK(has(hyp, "rank(B)=m"));
  CHECK(has(hyp, "E PD"));
  CHECK(g.certificate.null_A == 2);
  CHECK(g.certificate.DS1);

  // E = 0 with rank(C) = p keeps ker(C^T) ∩ ker(E) trivial.
  auto overlap = dsaddle::test::spec(4, 2, 1, 2);
  overlap.null_A = 2;
  overlap.rank_B = 2;
  overlap.require_DS1 = true;
  overlap.null_E = 1;
  overlap.force_overlap_R = true;
  const auto o = gen_instance(overlap);
  CHECK_FALSE(o.certificate.R);
  const auto d = rank_b_iff(o.system, tol);
  CHECK(d.verdict == Verdict::Singular);
  CHECK_FALSE(oracle_invertible(o.system, tol));

  auto all_pd = dsaddle::test::spec(4, 3, 2, 3);
  all_pd.null_D = 3;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    all_pd.seed = seed;
    const auto s = gen_instance(all_pd).system;
    CHECK(oracle_invertible(s, tol));
    const auto dk = corollary_rules(s, tol);
    CHECK(dk.verdict == Verdict::Invertible);
    CHECK(dk.rule == "corollary_kernel");
  }
}

TEST_CASE("gen_instance rejects infeasible specs") {
  auto sp = dsaddle::test::spec(3, 2, 2, 0);
  sp.require_R = true;
  CHECK_THROWS_AS(gen_instance(sp), Error);  // rank_B + rank_C = 4 > m

  sp = dsaddle::test::spec(3, 2, 2, 0);
  sp.require_R = true;
  sp.force_overlap_R = true;
  sp.rank_B = 1;
  sp.rank_C = 1;
  CHECK_THROWS_AS(gen_instance(sp), Error);

  sp = dsaddle::test::spec(3, 2, 2, 0);
  sp.null_A = 4;
  CHECK_THROWS_AS(gen_instance(sp), Error);

  sp = dsaddle::test::spec(3, 2, 2, 0);
  sp.require_DS1 = true;
  sp.null_A = 1;
  CHECK_THROWS_AS(gen_instance(sp), Error);

  sp = dsaddle::test::spec(3, 2, 2, 0);
  sp.spectrum_E = Spectrum::Indefinite;
  sp.null_E = 1;
  CHECK_THROWS_AS(gen_instance(sp), Error);

  sp = dsaddle::test::spec(3, 2, 2, 0);
  sp.max_attempts = 0;
  CHECK_THROWS_AS(gen_instance(sp), Error);
}

TEST_CASE("gen_instance is deterministic and meets its targets") {
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    CAPTURE(seed);
    const Index n = 2 + static_cast<Index>(seed % 5);
    const Index m = 1 + static_cast<Index>(seed % 4);
    const Index p = 1 + static_cast<Index>((seed / 4) % 4);
    auto sp = dsaddle::test::spec(n, m, p, seed);
    sp.null_A = static_cast<Index>(seed % (n + 1));
    sp.null_D = static_cast<Index>((seed / 2) % (m + 1));
    sp.null_E = static_cast<Index>((seed / 3) % (p + 1));
    sp.rank_B = static_cast<Index>((seed / 5) % (std::min(n, m) + 1));
    sp.rank_C = static_cast<Index>((seed / 7) % (std::min(p, m) + 1));
    if (sp.rank_B + sp.rank_C <= m && seed % 2 == 0) sp.require_R = true;
    if (m - sp.null_D >= 2 && seed % 3 == 0) sp.spectrum_D = Spectrum::Indefinite;

    const auto a = gen_instance(sp);
    const auto b = gen_instance(sp);
    CHECK(a.system == b.system);
    CHECK(a.certificate.seed_used == b.certificate.seed_used);

    const auto c = certify(a.system, tol);
    CHECK(c.null_A == sp.null_A);
    CHECK(c.null_D == sp.null_D);
    CHECK(c.null_E == sp.null_E);
    CHECK(c.rank_B == sp.rank_B);
    CHECK(c.rank_C == sp.rank_C);
    if (sp.require_R) CHECK(c.R);
    CHECK(is_psd(c.def_A));
    CHECK(is_psd(c.def_E));
    if (sp.spectrum_D == Spectrum::Indefinite) CHECK(c.def_D == Definiteness::Indefinite);

    sp.seed += 1;
    if (assemble(a.system).K.norm() > 0.0) CHECK_FALSE(gen_instance(sp).system == a.system);
  }
}
