#include <cmath>

#include "doctest.h"
#include "oracles.hpp"
#include "sepscope/one_sided.hpp"

using namespace sepscope;

namespace {

const Dims k22{2, 2};
const Dims k23{2, 3};

DensityMatrix bell() { return DensityMatrix::pure(k22, oracle::bell_psi_plus()); }
DensityMatrix mixed() { return DensityMatrix::maximally_mixed(k22); }
DensityMatrix werner(double p) { return {k22, oracle::werner(p)}; }

DensityMatrix product(oracle::Gen& g, Dims d) {
  return {d, oracle::tensor(oracle::random_state(g, d.m), oracle::random_state(g, d.n))};
}

DensityMatrix pure_product(oracle::Gen& g, Dims d) {
  return DensityMatrix::pure(d, oracle::tensor(oracle::random_unit(g, d.m),
                                               oracle::random_unit(g, d.n)));
}

bool is_sufficient(const std::string& name) { return name == "ball" || name == "m2"; }

}  // namespace

TEST_CASE("ppt") {
  const TestOutcome b = ppt_test(bell());
  CHECK(b.verdict == Verdict::Entangled);
  CHECK(b.conclusive);
  CHECK(*b.witnessValue == doctest::Approx(-0.5).epsilon(1e-12));
  const TestOutcome m = ppt_test(mixed());
  CHECK(m.verdict == Verdict::SeparableCertified);
  CHECK(m.conclusive);
  CHECK(ppt_test(werner(0.2)).verdict == Verdict::SeparableCertified);
  CHECK(ppt_test(werner(0.5)).verdict == Verdict::Entangled);
  for (double p : {0.0, 0.1, 0.3, 1.0 / 3.0, 0.4, 0.9})
    CHECK(*ppt_test(werner(p)).witnessValue ==
          doctest::Approx((1.0 - 3.0 * p) / 4.0).epsilon(1e-12));
}

TEST_CASE("ppt gate in 3 x 3") {
  // Separable but rank 4 > 3 and MN = 9: not conclusive.
  CMatrix d = CMatrix::Zero(9, 9);
  for (int i : {0, 4, 8, 1}) d(i, i) = 0.25;
  const TestOutcome o = ppt_test(DensityMatrix({3, 3}, d));
  CHECK(o.verdict == Verdict::Inconclusive);
  CHECK_FALSE(o.conclusive);
  // Rank 3 <= N: conclusive.
  d(1, 1) = 0.0;
  d /= d.trace().real();
  CHECK(ppt_test(DensityMatrix({3, 3}, d)).verdict == Verdict::SeparableCertified);
}

TEST_CASE("reduction") {
  CHECK(reduction_test(bell()).verdict == Verdict::Entangled);
  CHECK(*reduction_test(bell()).witnessValue == doctest::Approx(-0.5).epsilon(1e-12));
  CHECK(reduction_test(mixed()).verdict == Verdict::Inconclusive);
  oracle::Gen g(11);
  for (int k = 0; k < 20; ++k)
    CHECK(reduction_test(pure_product(g, k23)).verdict == Verdict::Inconclusive);
}

TEST_CASE("entropic") {
  CHECK(entropic_test(bell(), 2).verdict == Verdict::Entangled);
  CHECK(*entropic_test(bell(), 2).witnessValue ==
        doctest::Approx(-std::log(2.0)).epsilon(1e-12));
  CHECK(entropic_test(mixed(), 1).verdict == Verdict::Inconclusive);
  CHECK(*entropic_test(mixed(), 1).witnessValue ==
        doctest::Approx(std::log(2.0)).epsilon(1e-12));
  oracle::Gen g(12);
  for (int k = 0; k < 20; ++k)
    CHECK(entropic_test(pure_product(g, k22), 2).verdict == Verdict::Inconclusive);
  CHECK_THROWS_AS(entropic_test(bell(), 3), InvalidInput);
}

TEST_CASE("majorisation") {
  CHECK(majorisation_test(bell()).verdict == Verdict::Entangled);
  CHECK(majorisation_test(mixed()).verdict == Verdict::Inconclusive);
  oracle::Gen g(13);
  for (int k = 0; k < 100; ++k)
    CHECK(majorisation_test(product(g, k23)).verdict == Verdict::Inconclusive);
}

TEST_CASE("ccnr") {
  CHECK(ccnr_test(bell()).verdict == Verdict::Entangled);
  CHECK(*ccnr_test(bell()).witnessValue == doctest::Approx(2.0).epsilon(1e-12));
  oracle::Gen g(14);
  const TestOutcome p = ccnr_test(pure_product(g, k23));
  CHECK(p.verdict == Verdict::Inconclusive);
  CHECK(*p.witnessValue == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(*ccnr_test(mixed()).witnessValue == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("ball") {
  const TestOutcome m = ball_test(mixed());
  CHECK(m.verdict == Verdict::SeparableCertified);
  CHECK(*m.witnessValue == doctest::Approx(0.0));
  CHECK(ball_test(werner(0.1)).verdict == Verdict::SeparableCertified);
  CHECK(ball_test(bell()).verdict == Verdict::Inconclusive);
  CHECK(*ball_test(bell()).witnessValue == doctest::Approx(0.75).epsilon(1e-12));
}

TEST_CASE("m2 sufficient test") {
  CMatrix diag = CMatrix::Zero(6, 6);
  for (int i = 0; i < 6; ++i) diag(i, i) = (i + 1) / 21.0;
  CHECK(m2_ppt_sufficient_test(DensityMatrix(k23, diag)).verdict ==
        Verdict::SeparableCertified);
  CHECK(m2_ppt_sufficient_test(bell()).verdict == Verdict::Inconclusive);
  CHECK(m2_ppt_sufficient_test(DensityMatrix::maximally_mixed({3, 2})).verdict ==
        Verdict::Inconclusive);
}

TEST_CASE("battery") {
  const BatteryReport b = run_battery(bell());
  CHECK(b.combined == Verdict::Entangled);
  CHECK(b.decidedBy == "ppt");
  const std::vector<std::string> order{"ball",      "ppt",       "reduction", "majorisation",
                                       "entropic2", "entropic1", "ccnr",      "m2"};
  REQUIRE(b.outcomes.size() == order.size());
  for (std::size_t i = 0; i < order.size(); ++i) CHECK(b.outcomes[i].testName == order[i]);

  const BatteryReport m = run_battery(mixed());
  CHECK(m.combined == Verdict::SeparableCertified);
  CHECK(m.decidedBy == "ball");

  CMatrix d = CMatrix::Zero(9, 9);
  for (int i : {0, 4, 8, 1}) d(i, i) = 0.25;
  const BatteryReport q = run_battery(DensityMatrix({3, 3}, d));
  CHECK(q.combined == Verdict::Inconclusive);
  CHECK(q.decidedBy.empty());
}

TEST_CASE("soundness and dominance on random states") {
  oracle::Gen g(15);
  int reduction_flags = 0;
  for (Dims d : {k22, k23}) {
    for (int k = 0; k < 500; ++k) {
      const DensityMatrix rho(d, oracle::random_state(g, d.total()));
      const BatteryReport r = run_battery(rho);
      const TestOutcome& ppt = r.outcomes[1];
      REQUIRE(ppt.conclusive);
      REQUIRE(ppt.verdict != Verdict::Inconclusive);
      for (const auto& o : r.outcomes) {
        if (ppt.verdict == Verdict::SeparableCertified)
          CHECK(o.verdict != Verdict::Entangled);
        if (ppt.verdict == Verdict::Entangled && is_sufficient(o.testName))
          CHECK(o.verdict != Verdict::SeparableCertified);
        if (is_sufficient(o.testName)) CHECK(o.verdict != Verdict::Entangled);
        if (!is_sufficient(o.testName) && o.testName != "ppt")
          CHECK(o.verdict != Verdict::SeparableCertified);
      }
      if (r.outcomes[2].verdict == Verdict::Entangled) {
        ++reduction_flags;
        CHECK(ppt.verdict == Verdict::Entangled);
      }
    }
  }
  MESSAGE("reduction flagged " << reduction_flags << " of 1000 random states");
  CHECK(reduction_flags > 0);
}

TEST_CASE("ccnr value is convex under mixing") {
  oracle::Gen g(16);
  std::uniform_real_distribution<double> ud(0.0, 1.0);
  for (int k = 0; k < 100; ++k) {
    const CMatrix a = oracle::random_state(g, 6);
    const CMatrix b = oracle::random_state(g, 6);
    const double t = ud(g);
    const double mix = *ccnr_test(DensityMatrix(k23, t * a + (1 - t) * b)).witnessValue;
    const double sep = t * *ccnr_test(DensityMatrix(k23, a)).witnessValue +
                       (1 - t) * *ccnr_test(DensityMatrix(k23, b)).witnessValue;
    CHECK(mix <= sep + 1e-9);
  }
}
