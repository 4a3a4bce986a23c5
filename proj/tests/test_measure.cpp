// Level-set measures. Two independent routes exist: closed-form interval
// arithmetic (slice_intervals/measure_B) and rejection Monte Carlo that
// evaluates the defining inequalities verbatim. A few configurations also
// have fully hand-computable values; those come first.

#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "zklab/measure.hpp"

using namespace zklab;

TEST_CASE("symmetric window at q = 0: hand-computed lengths", "[measure]") {
  // p(1,0; x,y) = 3x^2 + y^2, window [-4, 4], huge balls.
  MeasureQuery mq;
  mq.xi = 1.0;
  mq.q = 0;
  mq.h = 0.0;
  mq.N1 = mq.N2 = 1024;
  mq.K = 8.0;
  mq.c = -4.0;

  SECTION("lin variant: the strip |xi1| < xi/2 clips every slice") {
    // admissible slices y in {-1,0,1}; each contributes min(2 sqrt((4-y^2)/3), 1) = 1
    CHECK(measure_B(mq) == Catch::Approx(3.0).epsilon(1e-12));
  }

  SECTION("alpha variant: no strip, pure parabola lengths") {
    mq.alpha = 0.0;  // gate: gap 3 >= 1 and xi = 1 >= 1
    const double want = 4.0 / std::sqrt(3.0) + 4.0;  // y=0 and y=+-1 slices
    CHECK(measure_B(mq) == Catch::Approx(want).epsilon(1e-12));
  }
}

TEST_CASE("closed gates give zero measure", "[measure]") {
  MeasureQuery mq;
  mq.xi = 1.0;
  mq.q = 2;  // |3 - 4| = 1 < kappa_hyp
  mq.kappa_hyp = 1.5;
  mq.K = 4.0;
  mq.c = -2.0;
  CHECK(measure_B(mq) == 0.0);

  MeasureQuery ma = mq;
  ma.q = 0;
  ma.alpha = 0.5;
  ma.kappa_hyp = 1.0;
  ma.kappa_xi = 2.0;  // xi = 1 < 2 closes the alpha gate
  CHECK(measure_B(ma) == 0.0);
}

TEST_CASE("measure is monotone in the window and the shells", "[measure]") {
  MeasureQuery mq;
  mq.xi = 2.0;
  mq.q = 3;
  mq.h = 0.5;
  mq.N1 = 4;
  mq.N2 = 8;
  mq.c = -1.0;
  double prev = 0.0;
  for (double K : {1.0, 2.0, 4.0, 8.0, 16.0}) {
    mq.K = K;
    const double m = measure_B(mq);
    CHECK(m >= prev - 1e-14);
    prev = m;
  }
  mq.K = 4.0;
  prev = 0.0;
  for (long long N : {1LL, 2LL, 4LL, 16LL, 64LL}) {
    mq.N1 = mq.N2 = N;
    const double m = measure_B(mq);
    CHECK(m >= prev - 1e-14);
    prev = m;
  }
}

TEST_CASE("interval route agrees with rejection Monte Carlo", "[measure]") {
  // 3-sigma agreement on a random family; allow one binomial outlier.
  const auto fam = random_measure_family(24, MeasureVariant::Lin, 9001);
  int misses = 0;
  for (size_t i = 0; i < fam.size(); ++i) {
    const double exact = measure_B(fam[i]);
    const McEstimate mc = mc_oracle_measure(fam[i], 20000, derive_seed(9001, "mc", i));
    const double slack = 3.0 * mc.stderr_total + 1e-9;
    if (std::abs(exact - mc.estimate) > slack) ++misses;
  }
  CHECK(misses <= 1);
}

TEST_CASE("two-sided slices also agree with the oracle", "[measure]") {
  // positive c with dominant q makes D1 > 0: the two-root branch
  MeasureQuery mq;
  mq.xi = 1.0;
  mq.q = 4;
  mq.N1 = mq.N2 = 32;
  mq.K = 4.0;
  mq.c = 3.0;
  mq.alpha = 0.0;
  const auto sl = slice_intervals(mq, 0);
  CHECK(sl.case_tag.find("two-sided") != std::string::npos);
  const double exact = measure_B(mq);
  REQUIRE(exact > 0.0);
  const McEstimate mc = mc_oracle_measure(mq, 200000, 77);
  CHECK(std::abs(exact - mc.estimate) <= 3.0 * mc.stderr_total + 1e-9);
}

TEST_CASE("query validation", "[measure]") {
  MeasureQuery mq;
  mq.xi = -1.0;
  CHECK_THROWS_AS(mq.validate(), ContractViolation);
  mq.xi = 1.0;
  mq.K = 0.5;
  CHECK_THROWS_AS(mq.validate(), ContractViolation);
  mq.K = 1.0;
  mq.h = 0.3;
  CHECK_THROWS_AS(mq.validate(), ContractViolation);
  mq.h = 0.5;
  mq.alpha = 1.5;
  CHECK_THROWS_AS(mq.validate(), ContractViolation);
  mq.alpha = -1.0;
  CHECK_NOTHROW(mq.validate());
  CHECK_THROWS_AS(mc_oracle_measure(mq, 100, 1), ContractViolation);
}

TEST_CASE("scan report: ratios, argmax, and sweep exponents", "[measure]") {
  const auto fam = dyadic_measure_family(
      MeasureVariant::Lin, {1.0, 2.0, 4.0, 8.0, 16.0},
      {1, 2, 4, 8, 16, 32}, 3, 424242);
  REQUIRE(!fam.empty());
  const ScanReport rep = scan_sup_bound(fam, 0.05, MeasureVariant::Lin);
  CHECK(rep.rows.size() == fam.size());
  REQUIRE(rep.argmax_index < rep.rows.size());
  CHECK(rep.rows[rep.argmax_index].ratio == Catch::Approx(rep.max_ratio));

  // frozen ratio formula: sqrt(measure) / (max(N1,N2)^eps sqrt(K))
  for (size_t i = 0; i < rep.rows.size(); i += 7) {
    const auto& r = rep.rows[i];
    const double denom =
        std::pow(static_cast<double>(std::max(r.query.N1, r.query.N2)), 0.05) *
        std::sqrt(r.query.K);
    CHECK(r.ratio == Catch::Approx(std::sqrt(std::max(0.0, r.measure)) / denom)
                         .margin(1e-12));
  }

  // dyadic sweeps are present, so both exponents must be fitted (not NaN),
  // and the K-growth of |B|^(1/2) stays at or below the square-root law
  REQUIRE(!std::isnan(rep.k_exponent));
  REQUIRE(!std::isnan(rep.n_exponent));
  CHECK(rep.k_exponent <= 0.55);

  // variant mismatch is rejected
  CHECK_THROWS_AS(scan_sup_bound(fam, 0.05, MeasureVariant::Alpha),
                  ContractViolation);
}

TEST_CASE("case tags track the sign split", "[measure]") {
  MeasureQuery mq;
  mq.xi = 1.0;
  mq.q = 4;
  mq.K = 2.0;
  mq.c = 1.0;
  CHECK(mq.sign_case_tag() == "q2-dominant|c+");
  mq.c = -1.0;
  CHECK(mq.sign_case_tag() == "q2-dominant|c-|Kc+");
  mq.c = -10.0;
  CHECK(mq.sign_case_tag() == "q2-dominant|c-|Kc-");
  mq.q = 0;
  CHECK(mq.sign_case_tag().rfind("xi2-dominant", 0) == 0);
}
