#pragma once

// Efficient one-sided separability tests. Necessary tests can only report
// Entangled; sufficient tests can only report SeparableCertified.

#include <optional>
#include <string>
#include <vector>

#include "sepscope/hermops.hpp"

namespace sepscope {

enum class Verdict { Entangled, SeparableCertified, Inconclusive };

const char* to_string(Verdict v);

struct TestOutcome {
  Verdict verdict = Verdict::Inconclusive;
  std::string testName;
  std::optional<double> witnessValue;
  bool conclusive = false;
};

inline constexpr double kViolationTol = 1e-9;

TestOutcome ppt_test(const DensityMatrix& rho);
TestOutcome reduction_test(const DensityMatrix& rho);
/// alpha is 1 (von Neumann) or 2 (collision entropy).
TestOutcome entropic_test(const DensityMatrix& rho, int alpha);
TestOutcome majorisation_test(const DensityMatrix& rho);
TestOutcome ccnr_test(const DensityMatrix& rho);
TestOutcome ball_test(const DensityMatrix& rho);
TestOutcome m2_ppt_sufficient_test(const DensityMatrix& rho);

struct BatteryReport {
  std::vector<TestOutcome> outcomes;
  Verdict combined = Verdict::Inconclusive;
  std::string decidedBy;  // empty when inconclusive
};

/// ball, ppt, reduction, majorisation, entropic (alpha 2 then 1), ccnr, m2.
BatteryReport run_battery(const DensityMatrix& rho);

/// Numerical rank: eigenvalues above 1e-9 * lambda_max.
int numerical_rank(const DensityMatrix& rho);
double renyi_entropy(const CMatrix& rho, int alpha);

}  // namespace sepscope
