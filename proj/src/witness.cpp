#include "sepscope/witness.hpp"

#include <cmath>

namespace sepscope {

const char* to_string(WitnessKind k) {
  switch (k) {
    case WitnessKind::WitnessFound: return "WitnessFound";
    case WitnessKind::SeparableWithinDelta: return "SeparableWithinDelta";
    case WitnessKind::Inconclusive: return "Inconclusive";
  }
  return "Inconclusive";
}

GeometryParams sep_geometry(int m, int n_dim, double delta, int n) {
  if (m < 2 || n_dim < 2) throw InvalidDimension("sep_geometry: need M,N >= 2");
  if (!(delta > 0.0)) throw InvalidInput("sep_geometry: delta must be positive");
  const double d = double(m) * n_dim;
  const double R = std::sqrt(1.0 - 1.0 / d);
  const double rS = 1.0 / std::sqrt(d * (d - 1.0));
  const int dim = n > 0 ? n : int(d * d) - 1;
  return make_geometry(dim, delta, R, rS);
}

namespace {

HermitianOp lift_direction(const ObservableBasis& basis, const std::vector<int>& t,
                           const RVector& c) {
  return bloch_lift({c, t}, basis, false);
}

}  // namespace

LinearOracle make_sep_oracle(const ObservableBasis& basis, std::vector<int> index_set,
                             int restarts, std::uint64_t seed) {
  basis.check_index_set(index_set);
  return [&basis, t = std::move(index_set), restarts, seed](const OracleQuery& q) {
    const HermitianOp a = lift_direction(basis, t, q.c);
    const OracleResult r = b_star(a, q.epsilon, restarts, seed, q.early);
    return OracleReply{bloch_project(r.maximizer, basis, t), r.upperBound};
  };
}

WitnessVerdict find_witness(const DensityMatrix& rho, double delta,
                            std::vector<int> index_set, const WitnessOptions& opts) {
  const Dims dims = rho.dims();
  const ObservableBasis basis = build_basis(dims.m, dims.n);
  if (index_set.empty()) index_set = basis.traceless_indices();
  basis.check_index_set(index_set);
  if (!(delta > 0.0 && delta < 1.0)) throw InvalidInput("delta must lie in (0, 1)");
  if (opts.oracleBudget < 1) throw InvalidInput("oracle budget must be positive");

  WitnessVerdict v;
  v.indexSet = index_set;
  v.geometry = sep_geometry(dims.m, dims.n, delta, int(index_set.size()));
  const GeometryParams& g = v.geometry;
  const RVector p = bloch_project(rho.op(), basis, index_set).coords;
  if (p.norm() > g.R + 1e-9)
    throw NumericalFailure("Bloch vector of a state exceeds the outer radius");
  if (p.norm() < 1e-9) {
    v.kind = WitnessKind::SeparableWithinDelta;
    return v;
  }

  const LinearOracle oracle = make_sep_oracle(basis, index_set, opts.oracleBudget, opts.seed);
  const double eps = g.epsilonOracle;
  std::optional<OracleResult> verified;

  // Fresh search with four times the restarts and no early stop.
  auto reverify = [&](const RVector& c) {
    const HermitianOp a = lift_direction(basis, index_set, c);
    return b_star(a, eps, 4 * opts.oracleBudget, opts.seed);
  };

  auto accept = [&](const RVector& c, const OracleResult& r) {
    const HermitianOp a = lift_direction(basis, index_set, c);
    const double tr = expectation(a, rho);
    v.kind = WitnessKind::WitnessFound;
    v.witness = a;
    v.witnessBloch = c;
    v.bStarEstimate = r.lowerBound;
    v.expectation = tr;
    v.margin = tr - r.lowerBound;
    v.maximizer = r.maximizer;
  };

  if (opts.heuristicFirst || opts.heuristicOnly) {
    const PresearchResult pr = heuristic_presearch(p, oracle, opts.presearchIters, eps);
    v.presearchIterations = pr.iterations;
    if (pr.direction) {
      const OracleResult r = reverify(*pr.direction);
      if (pr.direction->dot(p) - r.lowerBound >= eps) {
        accept(*pr.direction, r);
        v.viaPresearch = true;
        return v;
      }
    }
    if (opts.heuristicOnly) {
      v.kind = WitnessKind::Inconclusive;
      return v;
    }
  }

  SolveOptions so;
  so.dynamic = opts.dynamicStops;
  so.checkInvariants = opts.checkInvariants;
  so.ellipsoidSamples = opts.ellipsoidSamples;
  so.onIteration = opts.onIteration;
  so.verify = [&](const RVector& c, const OracleReply&) -> std::optional<OracleReply> {
    OracleResult r = reverify(c);
    if (c.dot(p) - r.lowerBound >= eps) {
      verified = std::move(r);
      return std::nullopt;
    }
    return OracleReply{bloch_project(r.maximizer, basis, index_set), r.upperBound};
  };
  const FeasibilityOutcome out = solve(p, oracle, g, SolverConstants::standard(), so);
  v.diagnostics = out.diagnostics;
  if (out.kind == FeasibilityKind::DirectionFound) {
    accept(*out.direction, *verified);
  } else {
    v.kind = WitnessKind::SeparableWithinDelta;
  }
  return v;
}

double d_rho(const HermitianOp& a, const DensityMatrix& rho, double epsilon,
             int restarts, std::uint64_t seed) {
  if (std::abs(a.matrix().squaredNorm() - 1.0) > 1e-9)
    throw InvalidInput("d_rho: witness must have unit Frobenius norm");
  return b_star(a, epsilon, restarts, seed).lowerBound - expectation(a, rho);
}

SandwichResult sandwich(const HermitianOp& a, double epsilon, int restarts,
                        std::uint64_t seed) {
  SandwichResult s;
  s.bStar = b_star(a, epsilon, restarts, seed).lowerBound;
  s.aStar = -b_star(-a, epsilon, restarts, seed).lowerBound;
  const RVector ev = eigenvalues(a.matrix());
  s.isLeft = ev(0) < s.aStar - 1e-8;
  s.isRight = ev(ev.size() - 1) > s.bStar + 1e-8;
  s.isAmbidextrous = s.isLeft && s.isRight;
  return s;
}

NoisyBellResult noisy_bell_check(double e11, double e22) {
  constexpr double kSlack = 1e-12;
  if (!(std::abs(e11) <= 1.0 + kSlack) || !(std::abs(e22) <= 1.0 + kSlack))
    throw InvalidInput("noisy_bell_check: expectations must lie in [-1, 1]");
  struct Ineq {
    const char* label;
    const char* bell;
    bool holds;
  };
  const Ineq all[] = {
      {"e11-e22>1/2", "psi+", e11 - e22 > 0.5 + kSlack},
      {"e11-e22<-1/2", "psi-", e11 - e22 < -0.5 - kSlack},
      {"e11+e22>1/2", "phi+", e11 + e22 > 0.5 + kSlack},
      {"e11+e22<-1/2", "phi-", e11 + e22 < -0.5 - kSlack},
  };
  NoisyBellResult r;
  const char* only = nullptr;
  for (const auto& q : all)
    if (q.holds) {
      r.satisfied.emplace_back(q.label);
      only = q.bell;
    }
  r.entangled = !r.satisfied.empty();
  if (r.satisfied.size() == 1) r.identifiedBell = only;
  return r;
}

}  // namespace sepscope
