#pragma once

// Analytic-center cutting-plane solver for in-biased weak separation:
// given a point p and a weak linear-optimisation oracle for a convex body K,
// either find a unit direction c with c^T p >= c^T k_c + eps, or conclude
// that p lies within delta of K.
//
// The search region is P = unit ball intersected with halfspaces a_i^T x >= b_i,
// with barrier F(x) = -sum log(a_i^T x - b_i) - log(1 - x^T x).

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "sepscope/hermops.hpp"
#include "sepscope/wopt.hpp"

namespace sepscope {

/// q_lambda = 1 - (1 - 3 lambda)^(1/3).
double q_lambda(double lambda);
/// Inverse of q on [0, 1/3): t - t^2 + t^3/3.
double q_inverse(double t);

struct SolverConstants {
  double rho0 = 0.001;
  double zeta0 = 0.0;
  double gamma0 = 0.25;
  double sigma0 = 0.08;
  double nu = 1078.0;
  double lambdaStar = 0.0;

  // Derived quantities of the convergence analysis.
  double gammaTilde0 = 0.0;
  double C1 = 0.0, C2 = 0.0, C3 = 0.0, C4 = 0.0, C5 = 0.0, C6 = 0.0, C7 = 0.0;
  double Ca = 0.0, Cd = 0.0;

  /// The standard constants with every derived value computed and the
  /// constraint chain checked; throws std::logic_error when it fails.
  static SolverConstants standard();
  /// Recomputes the derived values from the five free constants.
  void derive();
  /// Names of violated constraints (empty when all hold).
  std::vector<std::string> violated_constraints() const;
};

struct GeometryParams {
  int n = 0;
  double delta = 0.0;
  double deltaPrime = 0.0;
  double epsilonOracle = 0.0;
  double deltaTilde = 0.0;
  double r = 0.0;
  double R = 0.0;
  double rS = 0.0;
  double RStar = 0.0;
  double u = 0.0;
};

/// Inner radius from sin t = (dp / (Rs + eps)) (2 cos t - 1), solved by
/// bisection on (0, pi/3), then r = sin t (1 - tan(t/2)) / (1 + tan(t/2)).
double inner_radius(double delta_prime, double r_star, double eps);

/// Generic geometry for a body inside the ball of radius R (rS = 0 when no
/// inscribed ball is known).
GeometryParams make_geometry(int n, double delta, double R, double rS = 0.0);

struct BarrierEval {
  double F;
  RVector grad;
  RMatrix hess;
};

/// Planes a_i^T x >= b_i stored as the columns of an n x h matrix. The last
/// barrier evaluation (and its Cholesky factor) is cached per point.
class SearchRegion {
 public:
  int n = 0;
  RVector z;

  explicit SearchRegion(int dim);
  int h() const { return h_; }
  Eigen::Block<const RMatrix, Eigen::Dynamic, 1, true> a(int i) const {
    return A_.col(i);
  }
  double b(int i) const { return b_(i); }
  double kappa(int i) const { return kappa_(i); }
  void set_kappa(int i, double k) { kappa_(i) = k; }
  /// n x h matrix of normals.
  Eigen::Block<const RMatrix, Eigen::Dynamic, Eigen::Dynamic, true> normals() const { return A_.leftCols(h_); }
  Eigen::VectorBlock<const RVector> offsets() const { return b_.head(h_); }
  Eigen::VectorBlock<const RVector> kappa_values() const { return kappa_.head(h_); }

  void add_plane(const RVector& a, double b, double kappa);
  void remove_plane(int j);

  double slack(int i, const RVector& x) const { return A_.col(i).dot(x) - b_(i); }
  RVector slacks(const RVector& x) const;
  bool interior(const RVector& x) const;
  double min_slack(const RVector& x) const;

 private:
  friend struct BarrierCacheAccess;
  struct Cache {
    long version = -1;
    RVector x;
    BarrierEval eval;
    bool factored = false;
    Eigen::LLT<RMatrix> llt;
    RMatrix scaled;  // workspace for the normals divided by the slacks
  };
  RMatrix A_;
  RVector b_, kappa_;
  int h_ = 0;
  long version_ = 0;
  mutable Cache cache_;
};

/// Throws BoundaryError unless x is strictly interior.
BarrierEval barrier_eval(const SearchRegion& P, const RVector& x);
double newton_measure(const SearchRegion& P, const RVector& x);

struct RecenterResult {
  RVector z;
  int iterations = 0;
  int dampedSteps = 0;
  double lambda = 0.0;
};

/// Damped Newton from x0 until lambda < rho0 and
/// q_lambda < (dt / (1 + dt)) ||x|| / sqrt(2).
RecenterResult recenter(const SearchRegion& P, const RVector& x0,
                        const SolverConstants& k, double delta_tilde,
                        int iteration_cap = 0);

double sigma_i(const SearchRegion& P, const RVector& z, int i);
double mu_i(const SearchRegion& P, const RVector& z, int i);

/// Case-2 body: appends (a, beta) with beta = a^T z - sqrt(a^T H^-1 a)/gamma0
/// (clamped to <= 0), recenters, and sets kappa from the new center.
RecenterResult add_cut(SearchRegion& P, const RVector& a, const SolverConstants& k,
                       double delta_tilde, bool central = false);

/// Subcase-1.1 body: requires mu_j > 2 and sigma_j < sigma0 at P.z.
RecenterResult discard_cut(SearchRegion& P, int j, const SolverConstants& k,
                           double delta_tilde);

enum class StopReason { None, Condition1, Condition2 };
const char* to_string(StopReason s);

StopReason should_stop(const SearchRegion& P, const GeometryParams& g,
                       const SolverConstants& k, bool dynamic);

// ---------------------------------------------------------------------------

struct OracleQuery {
  RVector c;
  double epsilon;
  EarlyStopContext early;
};

struct OracleReply {
  RVector point;  // k_c, a point of K
  double upperBound = std::numeric_limits<double>::infinity();
};

using LinearOracle = std::function<OracleReply(const OracleQuery&)>;

struct IterationRecord {
  long iter = 0;
  std::string kase;  // "1.1", "1.2" or "2"
  int h = 0;
  double lambda = 0.0;
  double minSlack = 0.0;
  long oracleCalls = 0;
};

/// Runtime checks of the convergence analysis. Each counter pair is
/// (checks performed, violations seen).
struct InvariantReport {
  long detChecks = 0, detViolations = 0;
  long ellipsoidChecks = 0, ellipsoidViolations = 0;
  long newtonChecks = 0, newtonViolations = 0;
  long conicChecks = 0, conicViolations = 0;
  long conicLiteralExceed = 0;  // see README: informational only
  long weightChecks = 0, weightViolations = 0;
  long budgetChecks = 0, budgetViolations = 0;
  long dropChecks = 0, dropViolations = 0;
  long centralChecks = 0, centralViolations = 0;
  double worstDetMargin = std::numeric_limits<double>::infinity();
  int maxNewtonIterations = 0;

  long violations() const {
    return detViolations + ellipsoidViolations + newtonViolations +
           conicViolations + weightViolations + budgetViolations +
           dropViolations + centralViolations;
  }
  InvariantReport& operator+=(const InvariantReport& o);
};

struct SolveDiagnostics {
  long oracleCalls = 0;
  long planesAdded = 0;
  long planesDiscarded = 0;
  long kappaResets = 0;
  long newtonIterationsTotal = 0;
  long iterations = 0;
  long reverifications = 0;
  StopReason stopReason = StopReason::None;
  InvariantReport invariants;
};

enum class FeasibilityKind { DirectionFound, RegionExhausted };

struct FeasibilityOutcome {
  FeasibilityKind kind = FeasibilityKind::RegionExhausted;
  std::optional<RVector> direction;
  std::optional<RVector> certificatePoint;  // k_c
  double cTp = 0.0;
  double cTk = 0.0;
  SolveDiagnostics diagnostics;
};

struct SolveOptions {
  bool dynamic = true;
  bool checkInvariants = false;
  int ellipsoidSamples = 1000;
  std::uint64_t sampleSeed = 0x5eed;
  bool centralCuts = false;  // force b = 0 on every added plane
  std::function<void(const IterationRecord&)> onIteration;
  /// Called on a prospective accept. Returning a reply rejects the accept and
  /// the solver cuts with the returned point instead.
  std::function<std::optional<OracleReply>(const RVector& c, const OracleReply&)>
      verify;
};

/// Oracle-call ceiling nu * n * u + 1.
double oracle_budget(const GeometryParams& g, const SolverConstants& k);

FeasibilityOutcome solve(const RVector& p, const LinearOracle& oracle,
                         const GeometryParams& g, const SolverConstants& k,
                         const SolveOptions& opts = {});

struct PresearchResult {
  std::optional<RVector> direction;
  std::optional<RVector> certificatePoint;
  int iterations = 0;
};

/// Fixed-point direction search: c <- c + d (p - k_c) / ||p - k_c||,
/// normalised, with d = c^T k_c + eps - c^T p; succeeds once d <= 0.
PresearchResult heuristic_presearch(const RVector& p, const LinearOracle& oracle,
                                    int max_iters, double eps);

}  // namespace sepscope
