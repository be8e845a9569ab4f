#pragma once

// Weak optimisation of a Hermitian observable over product states:
// b*(A) = max <a (x) b| A |a (x) b> with a certified lower bound (an explicit
// maximiser) and an upper bound.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sepscope/hermops.hpp"

namespace sepscope {

enum class EarlyStopMode {
  None,
  CutIfBelow,      // stop once lowerBound >= referenceValue
  WitnessIfAbove,  // stop once upperBound < referenceValue
  Both,
};

struct EarlyStopContext {
  double referenceValue = 0.0;
  EarlyStopMode mode = EarlyStopMode::None;
};

enum class BoundRegime {
  RestartsExhausted,  // lower bound is a local-search value, upper is lambda_max
  EarlyCut,
  EarlyWitness,
  NetCertified,       // upper - lower <= epsilon by enumeration
  Constant,           // objective constant on product states
};

const char* to_string(BoundRegime r);

struct OracleResult {
  double lowerBound;
  PureProductState maximizer;
  double upperBound;
  double epsilon;
  bool terminatedEarly = false;
  long evaluations = 0;
  BoundRegime regime = BoundRegime::RestartsExhausted;
  int bestSeed = 0;
};

double expectation(const HermitianOp& a, const PureProductState& s);
double expectation(const CMatrix& a, const PureProductState& s);

struct SeesawOptions {
  int maxIters = 1000;
  double tol = 1e-13;
};

struct SeesawResult {
  PureProductState state;
  double value;
  int iterations = 0;
  std::vector<double> history;  // value after every half-step (if requested)
};

/// Alternating exact maximisation over the two factors. Each half-step sets
/// one factor to the top eigenvector of the partial contraction of A.
SeesawResult seesaw(const CMatrix& a, Dims dims, const PureProductState& seed,
                    SeesawOptions opts = {}, bool record_history = false);
inline SeesawResult seesaw(const HermitianOp& a, const PureProductState& seed,
                           SeesawOptions opts = {}, bool record_history = false) {
  return seesaw(a.matrix(), a.dims(), seed, opts, record_history);
}

/// The deterministic seed sequence: seeds 0..MN-1 are the best product
/// approximations of the eigenvectors of A (largest eigenvalue first), the
/// rest come from a 64-bit Mersenne stream keyed by (seed, k, M, N).
PureProductState restart_seed(const Spectrum& spec, Dims dims, int k,
                              std::uint64_t seed);

/// Closest product vector to psi (leading singular pair of its M x N reshape).
PureProductState nearest_product(const CVector& psi, Dims dims);

/// Multi-start see-saw. Throws InvalidInput when budget < 1 or epsilon <= 0.
OracleResult b_star(const HermitianOp& a, double epsilon, int budget,
                    std::uint64_t seed = 0, EarlyStopContext early = {});

/// Certified enumeration for M*N <= 6. The qubit factor is scanned over its
/// Bloch sphere by adaptive cells; the other factor is optimised exactly.
/// Stops when every open cell's Lipschitz bound is within epsilon of the best
/// value found. Throws BudgetExceeded when more than hard_cap evaluations
/// would be needed.
OracleResult eps_net_b_star(const HermitianOp& a, double epsilon,
                            long hard_cap = 20'000'000);

}  // namespace sepscope
