#pragma once

// Verification utilities: finite-precision separable certificates, affine
// independence and simplex membership, and the nearest-separable-point
// iteration.

#include <cstdint>
#include <vector>

#include "sepscope/hermops.hpp"

namespace sepscope {

struct CertificateTerm {
  double p = 0.0;
  CVector alpha;
  CVector beta;
};

struct SeparableCertificate {
  int precisionBits = 0;
  std::vector<CertificateTerm> terms;

  /// Throws InvalidInput when the certificate is malformed for dims: wrong
  /// factor lengths, negative weights, too many terms, or values off the
  /// 2^-precisionBits grid.
  void validate(Dims dims) const;
};

/// x truncated toward zero onto the grid 2^-bits.
double truncate_bits(double x, int bits);

/// Truncates every weight and every real and imaginary component.
SeparableCertificate truncate_certificate(const std::vector<CertificateTerm>& exact,
                                          int bits);

/// sum p_i (a_i a_i^dagger) (x) (b_i b_i^dagger), without normalisation.
CMatrix certificate_state(const SeparableCertificate& cert);

struct QsepCheck {
  bool accepted = false;
  bool normalizationOk = false;  // requirement 1
  bool distanceOk = false;       // requirement 2
  double normCheckMax = 0.0;     // max_i |1 - |a_i|^2 |b_i|^2 sum_j p_j|
  double distance = 0.0;         // ||rho - sigma~||_2
  double normalizedBound = 0.0;  // delta' + eps' bounds ||rho - sigma^|| on acceptance
};

QsepCheck verify_qsep_certificate(const DensityMatrix& rho,
                                  const SeparableCertificate& cert, double eps_prime,
                                  double delta_prime);

/// (MN)^3 2^-(bits - 7.5): bound on ||sigma - sigma~||_2 after truncation.
double truncation_error_bound(Dims dims, int bits);

/// True iff {x_i - x_1 : i >= 2} has full column rank (relative threshold
/// 1e-10). Throws InvalidInput on empty or ragged input.
bool affine_independent(const std::vector<RVector>& points);

/// Same-side test against every facet of the simplex conv(vertices);
/// boundary points count as inside. Requires dim + 1 affinely independent
/// vertices.
bool hull_membership(const RVector& q, const std::vector<RVector>& vertices);

/// Membership of q pulled eps' towards the simplex centroid.
bool hull_membership_retracted(const RVector& q, const std::vector<RVector>& vertices,
                               double eps_prime);

struct GilbertResult {
  double distance = 0.0;           // ||v(rho) - v(nearest)||
  BlochVector nearestPoint;
  int iterations = 0;
  double lowerBound = 0.0;         // best c^T p - b*(c) seen, clipped at 0
  double gap = 0.0;                // last Frank-Wolfe gap
  std::vector<double> history;     // distance after every iteration
};

/// Frank-Wolfe with exact line search towards v(rho), using b_star as the
/// linear-maximisation oracle over SEP. Stops once the duality gap falls
/// below tol or after max_iters iterations.
GilbertResult gilbert_distance(const DensityMatrix& rho, int max_iters = 10000,
                               double tol = 1e-10, int restarts = 8,
                               std::uint64_t seed = 0);

}  // namespace sepscope
