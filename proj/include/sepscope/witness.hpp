#pragma once

// Entanglement-witness search over the Bloch embedding of the separable set,
// plus the witness analytics a*(A), b*(A) and the noisy-Bell inequalities.

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "sepscope/accp.hpp"
#include "sepscope/hermops.hpp"
#include "sepscope/wopt.hpp"

namespace sepscope {

/// R = sqrt(1 - 1/MN), rS = 1/sqrt(MN(MN-1)), R* = sqrt(R^2 - rS^2). The
/// search dimension is M^2 N^2 - 1 unless `n` restricts it to |T|.
GeometryParams sep_geometry(int m, int n_dim, double delta, int n = 0);

/// Weak linear optimisation over the projection of SEP onto span{X_i : i in T}.
/// The direction c is lifted to A = sum c_k X_{T[k]} and handed to b_star.
LinearOracle make_sep_oracle(const ObservableBasis& basis, std::vector<int> index_set,
                             int restarts, std::uint64_t seed);

enum class WitnessKind { WitnessFound, SeparableWithinDelta, Inconclusive };
const char* to_string(WitnessKind k);

struct WitnessVerdict {
  WitnessKind kind = WitnessKind::SeparableWithinDelta;
  std::optional<HermitianOp> witness;  // traceless, unit Frobenius norm
  std::optional<RVector> witnessBloch;
  std::optional<double> bStarEstimate;
  std::optional<double> margin;        // tr(A rho) - bStarEstimate
  std::optional<double> expectation;   // tr(A rho)
  std::optional<PureProductState> maximizer;
  std::vector<int> indexSet;
  bool viaPresearch = false;
  int presearchIterations = 0;
  SolveDiagnostics diagnostics;
  GeometryParams geometry;
};

struct WitnessOptions {
  bool heuristicFirst = false;
  bool heuristicOnly = false;
  int presearchIters = 200;
  bool dynamicStops = true;
  int oracleBudget = 64;
  std::uint64_t seed = 0;
  bool checkInvariants = false;
  int ellipsoidSamples = 1000;
  std::function<void(const IterationRecord&)> onIteration;
};

/// index_set empty means all traceless basis elements.
WitnessVerdict find_witness(const DensityMatrix& rho, double delta,
                            std::vector<int> index_set = {},
                            const WitnessOptions& opts = {});

/// b*(A).lowerBound - tr(A rho) for unit-Frobenius A. Negative values
/// certify entanglement.
double d_rho(const HermitianOp& a, const DensityMatrix& rho, double epsilon = 1e-6,
             int restarts = 64, std::uint64_t seed = 0);

struct SandwichResult {
  double aStar = 0.0;
  double bStar = 0.0;
  bool isLeft = false;
  bool isRight = false;
  bool isAmbidextrous = false;
};

SandwichResult sandwich(const HermitianOp& a, double epsilon = 1e-6,
                        int restarts = 64, std::uint64_t seed = 0);

struct NoisyBellResult {
  bool entangled = false;
  std::vector<std::string> satisfied;   // inequality labels
  std::optional<std::string> identifiedBell;
};

/// e11 = <s1 (x) s1>, e22 = <s2 (x) s2> with normalised Pauli operators.
NoisyBellResult noisy_bell_check(double e11, double e22);

}  // namespace sepscope
