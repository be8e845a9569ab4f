#include "sepscope/one_sided.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

namespace sepscope {

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Entangled: return "Entangled";
    case Verdict::SeparableCertified: return "SeparableCertified";
    case Verdict::Inconclusive: return "Inconclusive";
  }
  return "Inconclusive";
}

namespace {

TestOutcome outcome(const char* name, Verdict v, std::optional<double> w,
                    bool conclusive = false) {
  return {v, name, w, conclusive};
}

RVector descending(RVector v) {
  std::sort(v.data(), v.data() + v.size(), std::greater<>());
  return v;
}

// True when some prefix sum of `big` exceeds that of `small` by more than tol.
bool prefix_violation(const RVector& big, const RVector& small) {
  double sb = 0.0, ss = 0.0;
  for (Eigen::Index k = 0; k < big.size(); ++k) {
    sb += big(k);
    if (k < small.size()) ss += small(k);
    if (sb > ss + kViolationTol) return true;
  }
  return false;
}

}  // namespace

int numerical_rank(const DensityMatrix& rho) {
  const RVector ev = eigenvalues(rho.matrix());
  const double cut = kViolationTol * ev.maxCoeff();
  return int((ev.array() > cut).count());
}

double renyi_entropy(const CMatrix& rho, int alpha) {
  if (alpha == 2) return -std::log(rho.squaredNorm());
  if (alpha != 1) throw InvalidInput("entropy order must be 1 or 2");
  const RVector ev = eigenvalues(rho);
  double s = 0.0;
  for (Eigen::Index k = 0; k < ev.size(); ++k)
    if (ev(k) > 0.0) s -= ev(k) * std::log(ev(k));
  return s;
}

TestOutcome ppt_test(const DensityMatrix& rho) {
  const Dims d = rho.dims();
  const double lmin =
      eigenvalues(partial_transpose(rho.matrix(), d, Subsystem::B))(0);
  // Necessary and sufficient in these dims (or at this rank).
  const bool exact = d.total() <= 6 || numerical_rank(rho) <= std::max(d.m, d.n);
  if (lmin < -kViolationTol)
    return outcome("ppt", Verdict::Entangled, lmin, exact);
  if (exact) return outcome("ppt", Verdict::SeparableCertified, lmin, true);
  return outcome("ppt", Verdict::Inconclusive, lmin);
}

TestOutcome reduction_test(const DensityMatrix& rho) {
  const Dims d = rho.dims();
  const CMatrix ra = partial_trace(rho.matrix(), d, Subsystem::B);
  const CMatrix rb = partial_trace(rho.matrix(), d, Subsystem::A);
  const CMatrix ia = CMatrix::Identity(d.m, d.m);
  const CMatrix ib = CMatrix::Identity(d.n, d.n);
  const double la = eigenvalues(kron(ra, ib) - rho.matrix())(0);
  const double lb = eigenvalues(kron(ia, rb) - rho.matrix())(0);
  const double w = std::min(la, lb);
  return outcome("reduction",
                 w < -kViolationTol ? Verdict::Entangled : Verdict::Inconclusive, w);
}

TestOutcome entropic_test(const DensityMatrix& rho, int alpha) {
  const Dims d = rho.dims();
  const double s = renyi_entropy(rho.matrix(), alpha);
  const double sa = renyi_entropy(partial_trace(rho.matrix(), d, Subsystem::B), alpha);
  const double sb = renyi_entropy(partial_trace(rho.matrix(), d, Subsystem::A), alpha);
  const double gap = s - std::max(sa, sb);
  const char* name = alpha == 1 ? "entropic1" : "entropic2";
  return outcome(name, gap < -kViolationTol ? Verdict::Entangled : Verdict::Inconclusive,
                 gap);
}

TestOutcome majorisation_test(const DensityMatrix& rho) {
  const Dims d = rho.dims();
  const RVector l = descending(eigenvalues(rho.matrix()));
  const RVector la =
      descending(eigenvalues(partial_trace(rho.matrix(), d, Subsystem::B)));
  const RVector lb =
      descending(eigenvalues(partial_trace(rho.matrix(), d, Subsystem::A)));
  const bool bad = prefix_violation(l, la) || prefix_violation(l, lb);
  return outcome("majorisation", bad ? Verdict::Entangled : Verdict::Inconclusive,
                 std::nullopt);
}

TestOutcome ccnr_test(const DensityMatrix& rho) {
  const double tn = trace_norm(realign(rho.matrix(), rho.dims()));
  return outcome("ccnr", tn > 1.0 + kViolationTol ? Verdict::Entangled
                                                   : Verdict::Inconclusive,
                 tn);
}

TestOutcome ball_test(const DensityMatrix& rho) {
  const int d = rho.dims().total();
  const CMatrix diff = rho.matrix() - CMatrix::Identity(d, d) / double(d);
  const double dist2 = diff.squaredNorm();
  const double lmin = eigenvalues(rho.matrix())(0);
  const bool inside = dist2 <= 1.0 / (double(d) * (d - 1)) + 1e-12 ||
                      lmin >= 1.0 / (2.0 + d) - 1e-12;
  return outcome("ball", inside ? Verdict::SeparableCertified : Verdict::Inconclusive,
                 dist2);
}

TestOutcome m2_ppt_sufficient_test(const DensityMatrix& rho) {
  const Dims d = rho.dims();
  if (d.m != 2) return outcome("m2", Verdict::Inconclusive, std::nullopt);
  const double diff =
      (rho.matrix() - partial_transpose(rho.matrix(), d, Subsystem::A)).norm();
  return outcome("m2", diff < 1e-10 ? Verdict::SeparableCertified
                                    : Verdict::Inconclusive,
                 diff);
}

BatteryReport run_battery(const DensityMatrix& rho) {
  BatteryReport r;
  r.outcomes = {ball_test(rho),           ppt_test(rho),
                reduction_test(rho),      majorisation_test(rho),
                entropic_test(rho, 2),    entropic_test(rho, 1),
                ccnr_test(rho),           m2_ppt_sufficient_test(rho)};
  for (const auto& o : r.outcomes)
    if (o.verdict != Verdict::Inconclusive) {
      r.combined = o.verdict;
      r.decidedBy = o.testName;
      break;
    }
  return r;
}

}  // namespace sepscope
