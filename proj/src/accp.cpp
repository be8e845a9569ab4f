#include "sepscope/accp.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

namespace sepscope {

double q_lambda(double lambda) { return 1.0 - std::cbrt(1.0 - 3.0 * lambda); }

double q_inverse(double t) { return t - t * t + t * t * t / 3.0; }

void SolverConstants::derive() {
  zeta0 = q_lambda(rho0);
  lambdaStar = 2.0 - std::sqrt(3.0);
  const double z = zeta0, g = gamma0, s = sigma0;
  gammaTilde0 = g / ((1.0 - z * g) * (1.0 - z));
  const double qg = q_lambda(gammaTilde0);
  C1 = g * g * std::pow((1.0 - z) / (1.0 + g * qg / (1.0 - z) + z * g), 2);
  C2 = std::min(s, C1) / 4.0;
  const double s4 = s / std::pow(1.0 - z, 4);
  C3 = std::sqrt(s4 / (1.0 - s4));
  const double q3 = q_lambda(C3);
  C4 = 0.5 * q3 * q3 * (1.0 + q3) / (1.0 - q3);
  C5 = (1.0 - z) / (1.0 / g + 2.0 + z);
  C6 = 0.5 * C5 * C5 - C5 * C5 * C5 / (3.0 * (1.0 - C5));
  const double w = std::sqrt(1.0 + g * g) * z;
  C7 = w / (1.0 - w);
  const double zs = z * std::sqrt(s);
  Cd = zs / (1.0 - zs) + 0.5 * z * z / ((1.0 - z) * (1.0 - z)) +
       z * z * z / (3.0 * (1.0 - z)) + C4;
  const double t = qg / (1.0 - qg);
  const double zg = z * g / (1.0 - z * g);
  Ca = zg + 0.5 * std::pow(z / (1.0 - z), 2) + 0.5 * zg * zg +
       C7 * C7 * C7 / (3.0 * (1.0 - C7)) + 0.5 * t * t +
       t * t * t / (3.0 * (1.0 - t));
}

std::vector<std::string> SolverConstants::violated_constraints() const {
  std::vector<std::string> bad;
  if (!(rho0 < 1.0 / 3.0)) bad.push_back("lambda(z) < 1/3");
  if (!(gammaTilde0 < 1.0 / 3.0)) bad.push_back("gamma~ < 1/3");
  if (!(zeta0 < 0.02)) bad.push_back("zeta < 0.02");
  if (!(C1 > 0.0)) bad.push_back("C1 > 0");
  if (!(C2 > 0.0)) bad.push_back("C2 > 0");
  if (!(C3 < 1.0 / 3.0)) bad.push_back("C3 < 1/3");
  if (!(C4 < 0.615)) bad.push_back("C4 < 0.615");
  if (!(C5 < 1.0)) bad.push_back("C5 < 1");
  if (!(C6 > 0.0)) bad.push_back("C6 > 0");
  const double lhs = 3.0 + (std::log2(12.0) + 0.5) / 2.0;
  const double rhs = 0.5 * (nu * std::log2(1.0 + C2) - std::log2(nu));
  if (!(lhs < rhs)) bad.push_back("nu condition");
  return bad;
}

SolverConstants SolverConstants::standard() {
  SolverConstants k;
  k.derive();
  const auto bad = k.violated_constraints();
  if (!bad.empty())
    throw std::logic_error("solver constants violate: " + bad.front());
  return k;
}

double inner_radius(double delta_prime, double r_star, double eps) {
  const double kk = delta_prime / (r_star + eps);
  auto g = [&](double th) { return std::sin(th) - kk * (2.0 * std::cos(th) - 1.0); };
  double lo = 0.0, hi = std::numbers::pi / 3.0;
  while (hi - lo > 1e-12) {
    const double mid = 0.5 * (lo + hi);
    (g(mid) < 0.0 ? lo : hi) = mid;
  }
  const double th = 0.5 * (lo + hi);
  const double t2 = std::tan(0.5 * th);
  return std::sin(th) * (1.0 - t2) / (1.0 + t2);
}

GeometryParams make_geometry(int n, double delta, double R, double rS) {
  if (n < 1) throw InvalidDimension("geometry: dimension must be positive");
  if (!(delta > 0.0 && delta < 1.0))
    throw InvalidInput("geometry: delta must lie in (0, 1)");
  if (!(R > 0.0) || rS < 0.0 || rS >= R)
    throw InvalidInput("geometry: need 0 <= rS < R");
  GeometryParams g;
  g.n = n;
  g.delta = delta;
  g.deltaPrime = 2.0 * delta / 5.0;
  g.epsilonOracle = delta / 5.0;
  g.deltaTilde = g.deltaPrime / (4.0 * R);
  g.R = R;
  g.rS = rS;
  g.RStar = std::sqrt(R * R - rS * rS);
  g.r = inner_radius(g.deltaPrime, g.RStar, g.epsilonOracle);
  g.u = 2.0 * std::log2(double(n)) + std::log2(1.0 / g.r);
  return g;
}

SearchRegion::SearchRegion(int dim)
    : n(dim), z(RVector::Zero(dim)), A_(dim, 16), b_(16), kappa_(16) {}

void SearchRegion::add_plane(const RVector& a, double b, double kappa) {
  if (a.size() != n) throw DimensionMismatch("add_plane: dimension");
  if (h_ == A_.cols()) {
    const Eigen::Index cap = 2 * A_.cols();
    A_.conservativeResize(Eigen::NoChange, cap);
    b_.conservativeResize(cap);
    kappa_.conservativeResize(cap);
  }
  A_.col(h_) = a;
  b_(h_) = b;
  kappa_(h_) = kappa;
  ++h_;
  ++version_;
}

void SearchRegion::remove_plane(int j) {
  if (j < 0 || j >= h_) throw std::out_of_range("remove_plane: plane index");
  const int tail = h_ - j - 1;
  if (tail > 0) {
    A_.middleCols(j, tail) = A_.middleCols(j + 1, tail).eval();
    b_.segment(j, tail) = b_.segment(j + 1, tail).eval();
    kappa_.segment(j, tail) = kappa_.segment(j + 1, tail).eval();
  }
  --h_;
  ++version_;
}

RVector SearchRegion::slacks(const RVector& x) const {
  return normals().transpose() * x - offsets();
}

bool SearchRegion::interior(const RVector& x) const {
  if (!(x.squaredNorm() < 1.0)) return false;
  return h_ == 0 || slacks(x).minCoeff() > 0.0;
}

double SearchRegion::min_slack(const RVector& x) const {
  if (h_ == 0) return std::numeric_limits<double>::infinity();
  return slacks(x).minCoeff();
}

const char* to_string(StopReason s) {
  switch (s) {
    case StopReason::None: return "none";
    case StopReason::Condition1: return "condition1";
    case StopReason::Condition2: return "condition2";
  }
  return "none";
}

struct BarrierCacheAccess {
  static const BarrierEval& eval(const SearchRegion& P, const RVector& x) {
    SearchRegion::Cache& c = P.cache_;
    if (c.version == P.version_ && c.x.size() == x.size() && c.x == x) return c.eval;
    if (x.size() != P.n) throw DimensionMismatch("barrier_eval: dimension");
    const double w = 1.0 - x.squaredNorm();
    if (!(w > 0.0)) throw BoundaryError("point on or outside the unit ball");
    const RVector s = P.slacks(x);
    if (P.h() > 0 && !(s.minCoeff() > 0.0))
      throw BoundaryError("point on or outside a cutting plane");
    const RVector inv = s.cwiseInverse();
    BarrierEval& e = c.eval;
    e.F = -std::log(w) - s.array().log().sum();
    e.grad = 2.0 * x / w - P.normals() * inv;
    if (c.scaled.cols() < P.A_.cols()) c.scaled.resize(P.n, P.A_.cols());
    auto as = c.scaled.leftCols(P.h());
    as.noalias() = P.normals() * inv.asDiagonal();
    e.hess = (2.0 / w) * RMatrix::Identity(P.n, P.n);
    e.hess.selfadjointView<Eigen::Lower>().rankUpdate(x, 4.0 / (w * w));
    e.hess.selfadjointView<Eigen::Lower>().rankUpdate(as);
    e.hess.triangularView<Eigen::StrictlyUpper>() = e.hess.transpose();
    c.x = x;
    c.version = P.version_;
    c.factored = false;
    return e;
  }

  // Cholesky of the barrier Hessian with the single regularisation retry.
  static const Eigen::LLT<RMatrix>& factor(const SearchRegion& P, const RVector& x) {
    const BarrierEval& e = eval(P, x);
    SearchRegion::Cache& c = P.cache_;
    if (c.factored) return c.llt;
    c.llt.compute(e.hess);
    if (c.llt.info() != Eigen::Success) {
      const RMatrix reg = e.hess + 1e-12 * e.hess.trace() / double(P.n) *
                                       RMatrix::Identity(P.n, P.n);
      c.llt.compute(reg);
      if (c.llt.info() != Eigen::Success)
        throw NumericalFailure("barrier Hessian lost positive definiteness");
    }
    c.factored = true;
    return c.llt;
  }
};

namespace {

const Eigen::LLT<RMatrix>& factor_at(const SearchRegion& P, const RVector& x) {
  return BarrierCacheAccess::factor(P, x);
}

double log_det(const Eigen::LLT<RMatrix>& llt) {
  return 2.0 * llt.matrixLLT().diagonal().array().log().sum();
}

double exit_threshold(double delta_tilde, const RVector& x) {
  return delta_tilde / (1.0 + delta_tilde) * x.norm() / std::sqrt(2.0);
}

int newton_bound(double c, const SolverConstants& k, double delta_tilde,
                 const RVector& z) {
  const double rho_eff = std::min(k.rho0, q_inverse(exit_threshold(delta_tilde, z)));
  return int(std::ceil(c / k.lambdaStar)) +
         int(std::ceil(std::log2(k.lambdaStar / rho_eff))) + 2;
}

}  // namespace

BarrierEval barrier_eval(const SearchRegion& P, const RVector& x) {
  return BarrierCacheAccess::eval(P, x);
}

double newton_measure(const SearchRegion& P, const RVector& x) {
  const BarrierEval& e = BarrierCacheAccess::eval(P, x);
  const RVector d = factor_at(P, x).solve(e.grad);
  return std::sqrt(std::max(0.0, e.grad.dot(d)));
}

RecenterResult recenter(const SearchRegion& P, const RVector& x0,
                        const SolverConstants& k, double delta_tilde,
                        int iteration_cap) {
  if (!P.interior(x0)) throw BoundaryError("recenter: start point not interior");
  if (iteration_cap <= 0)
    iteration_cap = std::max(200, 10 * newton_bound(std::max(k.Ca, k.Cd), k,
                                                    delta_tilde, x0));
  RecenterResult out;
  RVector x = x0;
  for (;;) {
    const RVector grad = BarrierCacheAccess::eval(P, x).grad;
    const RVector d = factor_at(P, x).solve(grad);
    const double lam = std::sqrt(std::max(0.0, grad.dot(d)));
    out.lambda = lam;
    if (lam < k.rho0 && q_lambda(lam) < exit_threshold(delta_tilde, x)) break;
    if (out.iterations >= iteration_cap)
      throw NumericalFailure("recenter: Newton iteration cap " +
                             std::to_string(iteration_cap) + " exceeded (lambda=" +
                             std::to_string(lam) + ", |x|=" +
                             std::to_string(x.norm()) + ", h=" +
                             std::to_string(P.h()) + ")");
    double step = lam >= k.lambdaStar ? 1.0 / (1.0 + lam) : 1.0;
    if (lam >= k.lambdaStar) ++out.dampedSteps;
    RVector xn = x - step * d;
    while (!P.interior(xn)) {
      step *= 0.5;
      if (step < 1e-20) throw NumericalFailure("recenter: step underflow");
      xn = x - step * d;
    }
    if ((xn - x).norm() == 0.0 && lam >= k.rho0)
      throw NumericalFailure("recenter: Newton stalled");
    x = std::move(xn);
    ++out.iterations;
  }
  out.z = std::move(x);
  return out;
}

double sigma_i(const SearchRegion& P, const RVector& z, int i) {
  if (i < 0 || i >= P.h()) throw std::out_of_range("sigma_i: plane index");
  const RVector a = P.a(i);
  const double s = P.slack(i, z);
  return a.dot(factor_at(P, z).solve(a)) / (s * s);
}

double mu_i(const SearchRegion& P, const RVector& z, int i) {
  if (i < 0 || i >= P.h()) throw std::out_of_range("mu_i: plane index");
  return P.slack(i, z) / P.kappa(i);
}

RecenterResult add_cut(SearchRegion& P, const RVector& a, const SolverConstants& k,
                       double delta_tilde, bool central) {
  if (a.size() != P.n) throw DimensionMismatch("add_cut: dimension");
  if (std::abs(a.norm() - 1.0) > 1e-12) throw InvalidInput("add_cut: normal not unit");
  const RVector hinv_a = factor_at(P, P.z).solve(a);
  const double width = std::sqrt(std::max(0.0, a.dot(hinv_a)));
  RVector x0 = P.z;
  double beta = std::min(a.dot(P.z) - width / k.gamma0, 0.0);
  if (central) {
    beta = 0.0;
    // Cut normals are orthogonal to z, so a^T z is rounding noise: start
    // inside the Dikin ellipsoid on the kept side of the new plane.
    if (!(a.dot(x0) > 0.25 * width)) x0 = P.z + 0.5 * hinv_a / width;
  }
  P.add_plane(a, beta, 1.0);
  RecenterResult rc = recenter(P, x0, k, delta_tilde);
  P.z = rc.z;
  P.set_kappa(P.h() - 1, a.dot(P.z) - beta);
  return rc;
}

RecenterResult discard_cut(SearchRegion& P, int j, const SolverConstants& k,
                           double delta_tilde) {
  if (j < 0 || j >= P.h()) throw std::out_of_range("discard_cut: plane index");
  if (!(mu_i(P, P.z, j) > 2.0) || !(sigma_i(P, P.z, j) < k.sigma0))
    throw std::logic_error("discard_cut: plane is not discardable");
  P.remove_plane(j);
  RecenterResult rc = recenter(P, P.z, k, delta_tilde);
  P.z = rc.z;
  return rc;
}

StopReason should_stop(const SearchRegion& P, const GeometryParams& g,
                       const SolverConstants& k, bool dynamic) {
  const double h = P.h();
  const double min_slack = P.min_slack(P.z);
  const double n = P.n;
  const bool static1 = h >= k.nu * n * g.u;
  auto static_rule = [&] {
    if (static1) return StopReason::Condition1;
    if (2.0 * g.r > min_slack / (1.0 - k.zeta0) * (3.0 * h + 4.0))
      return StopReason::Condition2;
    return StopReason::None;
  };
  if (!dynamic) return static_rule();
  Eigen::SelfAdjointEigenSolver<RMatrix> es(BarrierCacheAccess::eval(P, P.z).hess,
                                            Eigen::EigenvaluesOnly);
  const double hinv_max = 1.0 / es.eigenvalues()(0);
  const double reach = P.z.norm() + k.zeta0 * std::sqrt(hinv_max);
  // The dynamic bound needs the Dikin reach inside the ball.
  if (reach >= 1.0) return static_rule();
  const double varpi = 1.0 / (1.0 - reach * reach);
  const double num =
      h * h + h * (8.0 * varpi - 1.0) - 16.0 * varpi + 32.0 * varpi * varpi + 2.0;
  const double theta =
      std::sqrt(2.0 * (num / std::pow(1.0 - k.zeta0, 2) + k.zeta0 * k.zeta0));
  const double need = (2.0 * n * std::log2(2.0 * n * theta / g.r) + n) /
                          std::log2(1.0 + k.C2) +
                      std::log2(4.0 / 5.0);
  if (h > need || static1) return StopReason::Condition1;
  if (2.0 * g.r > min_slack / (1.0 - k.zeta0) * (h + 4.0 * varpi))
    return StopReason::Condition2;
  return StopReason::None;
}

InvariantReport& InvariantReport::operator+=(const InvariantReport& o) {
  detChecks += o.detChecks;
  detViolations += o.detViolations;
  ellipsoidChecks += o.ellipsoidChecks;
  ellipsoidViolations += o.ellipsoidViolations;
  newtonChecks += o.newtonChecks;
  newtonViolations += o.newtonViolations;
  conicChecks += o.conicChecks;
  conicViolations += o.conicViolations;
  conicLiteralExceed += o.conicLiteralExceed;
  weightChecks += o.weightChecks;
  weightViolations += o.weightViolations;
  budgetChecks += o.budgetChecks;
  budgetViolations += o.budgetViolations;
  dropChecks += o.dropChecks;
  dropViolations += o.dropViolations;
  centralChecks += o.centralChecks;
  centralViolations += o.centralViolations;
  worstDetMargin = std::min(worstDetMargin, o.worstDetMargin);
  maxNewtonIterations = std::max(maxNewtonIterations, o.maxNewtonIterations);
  return *this;
}

double oracle_budget(const GeometryParams& g, const SolverConstants& k) {
  return k.nu * g.n * g.u + 1.0;
}

namespace {

// Checks made whenever Case 2 is entered: determinant growth, Dikin
// ellipsoid containment, and the conic representation of the center.
void check_center(const SearchRegion& P, const SolverConstants& k,
                  const SolveOptions& opts, long iter, InvariantReport& rep) {
  const BarrierEval e = barrier_eval(P, P.z);
  const Eigen::LLT<RMatrix> llt = factor_at(P, P.z);
  const int n = P.n;
  const double h = P.h();

  const double bound = -n * std::log(2.0) + std::log(2.5) + (h - 1.0) * std::log1p(k.C2);
  const double margin = log_det(llt) - bound;
  ++rep.detChecks;
  rep.worstDetMargin = std::min(rep.worstDetMargin, margin);
  if (!(margin > 0.0)) ++rep.detViolations;

  // Sampled containment of E(H, z, 1) = { z + L^{-T} u : |u| <= 1 }.
  if (opts.ellipsoidSamples > 0) {
    std::mt19937_64 gen(opts.sampleSeed ^ (std::uint64_t(iter) * 0x9e3779b97f4a7c15ULL));
    std::normal_distribution<double> nd;
    std::uniform_real_distribution<double> ud;
    const int m = opts.ellipsoidSamples;
    RMatrix u(n, m);
    for (int j = 0; j < m; ++j) {
      for (int i = 0; i < n; ++i) u(i, j) = nd(gen);
      u.col(j) *= std::pow(ud(gen), 1.0 / n) / u.col(j).norm();
    }
    const RMatrix x = (llt.matrixU().solve(u)).colwise() + P.z;
    bool ok = (x.colwise().squaredNorm().array() < 1.0).all();
    // Planes are checked exactly: the smallest slack over E is
    // s_i - |L^-1 a_i|, which bounds every sample's slack from below.
    if (ok && P.h() > 0) {
      const RMatrix la = llt.matrixL().solve(P.normals());
      ok = ((P.slacks(P.z).array() - la.colwise().norm().transpose().array()) > 0.0).all();
    }
    ++rep.ellipsoidChecks;
    if (!ok) ++rep.ellipsoidViolations;
  }

  // z - ((1 - z^T z)/2) sum a_i / s_i equals ((1 - z^T z)/2) grad F(z), whose
  // norm is at most ((1 - z^T z)/2) lambda sqrt(lambda_max(H)).
  const RVector s = P.slacks(P.z);
  const double w = 1.0 - P.z.squaredNorm();
  const RVector combo = P.normals() * s.cwiseInverse();
  const double residual = (P.z - 0.5 * w * combo).norm();
  const RVector d = llt.solve(e.grad);
  const double lam = std::sqrt(std::max(0.0, e.grad.dot(d)));
  Eigen::SelfAdjointEigenSolver<RMatrix> es(e.hess, Eigen::EigenvaluesOnly);
  const double hmax = es.eigenvalues()(n - 1), hmin = es.eigenvalues()(0);
  ++rep.conicChecks;
  if (residual > 0.5 * w * lam * std::sqrt(hmax) * (1.0 + 1e-9) + 1e-13)
    ++rep.conicViolations;
  if (residual > 10.0 * lam * std::sqrt(1.0 / hmin)) ++rep.conicLiteralExceed;
  ++rep.weightChecks;
  if ((0.5 * w * s.cwiseInverse()).minCoeff() < -1e-9) ++rep.weightViolations;
}

}  // namespace

FeasibilityOutcome solve(const RVector& p, const LinearOracle& oracle,
                         const GeometryParams& g, const SolverConstants& k,
                         const SolveOptions& opts) {
  const int n = int(p.size());
  if (n != g.n) throw DimensionMismatch("solve: p does not match geometry dimension");
  const double pn = p.norm();
  if (pn < 1e-9) throw InvalidInput("solve: p is (numerically) the origin");
  if (pn > 1.0 + 1e-12) throw InvalidInput("solve: p must lie in the unit ball");
  const double eps = g.epsilonOracle;
  const double dt = g.deltaTilde;
  const double budget = oracle_budget(g, k);

  FeasibilityOutcome out;
  SolveDiagnostics& diag = out.diagnostics;
  InvariantReport& inv = diag.invariants;

  SearchRegion P(n);
  const RVector a1 = p / pn;
  P.add_plane(a1, 0.0, 1.0 / std::sqrt(3.0));
  P.z = a1 / std::sqrt(3.0);

  auto note_recenter = [&](const RecenterResult& rc, double c, double f_before,
                           const SearchRegion& region) {
    diag.newtonIterationsTotal += rc.iterations;
    if (!opts.checkInvariants) return;
    ++inv.newtonChecks;
    inv.maxNewtonIterations = std::max(inv.maxNewtonIterations, rc.iterations);
    if (rc.iterations > newton_bound(c, k, dt, rc.z)) ++inv.newtonViolations;
    ++inv.dropChecks;
    if (f_before - barrier_eval(region, rc.z).F > c + 1e-9) ++inv.dropViolations;
  };

  for (long iter = 1;; ++iter) {
    diag.iterations = iter;
    const StopReason stop = should_stop(P, g, k, opts.dynamic);
    if (stop != StopReason::None) {
      diag.stopReason = stop;
      out.kind = FeasibilityKind::RegionExhausted;
      return out;
    }

    IterationRecord rec;
    rec.iter = iter;

    const RVector mu = P.slacks(P.z).cwiseQuotient(P.kappa_values());
    int trigger = -1;
    for (int i = 0; i < P.h(); ++i)
      if (mu(i) > 2.0) {
        trigger = i;
        break;
      }

    if (trigger >= 0) {
      // Case 1: scan planes with mu > 2 lazily for a discardable one.
      const int cap = int(std::ceil(n / k.sigma0)) + 1;
      int evaluated = 0, discard = -1;
      for (int i = trigger; i < P.h() && evaluated < cap; ++i) {
        if (!(mu(i) > 2.0)) continue;
        ++evaluated;
        if (sigma_i(P, P.z, i) < k.sigma0) {
          discard = i;
          break;
        }
      }
      if (discard >= 0) {
        double f_before = 0.0;
        if (opts.checkInvariants) {
          SearchRegion after = P;
          after.remove_plane(discard);
          f_before = barrier_eval(after, P.z).F;
        }
        const RecenterResult rc = discard_cut(P, discard, k, dt);
        note_recenter(rc, k.Cd, f_before, P);
        ++diag.planesDiscarded;
        rec.kase = "1.1";
        rec.lambda = rc.lambda;
      } else {
        P.set_kappa(trigger, P.slack(trigger, P.z));
        ++diag.kappaResets;
        rec.kase = "1.2";
        rec.lambda = newton_measure(P, P.z);
      }
    } else {
      // Case 2
      if (opts.checkInvariants) check_center(P, k, opts, iter, inv);
      if (opts.checkInvariants) {
        ++inv.budgetChecks;
        if (double(diag.oracleCalls + 1) > budget) ++inv.budgetViolations;
      }
      if (double(diag.oracleCalls + 1) > budget) {
        diag.stopReason = StopReason::Condition1;
        out.kind = FeasibilityKind::RegionExhausted;
        return out;
      }
      const RVector c = P.z / P.z.norm();
      const double cTp = c.dot(p);
      OracleReply reply = oracle({c, eps, {cTp - eps, EarlyStopMode::Both}});
      ++diag.oracleCalls;
      if (reply.point.size() != n)
        throw DimensionMismatch("solve: oracle returned a point of wrong dimension");
      double cTk = c.dot(reply.point);
      if (cTp >= cTk + eps && opts.verify) {
        if (auto refute = opts.verify(c, reply)) {
          ++diag.reverifications;
          reply = std::move(*refute);
          cTk = c.dot(reply.point);
        }
      }
      if (cTp >= cTk + eps) {
        out.kind = FeasibilityKind::DirectionFound;
        out.direction = c;
        out.certificatePoint = reply.point;
        out.cTp = cTp;
        out.cTk = cTk;
        return out;
      }
      const RVector d = p - reply.point;
      RVector a = d - c.dot(d) * c;
      const double an = a.norm();
      if (an <= 1e-12) {
        if (d.norm() < g.delta) {
          diag.stopReason = StopReason::Condition2;
          out.kind = FeasibilityKind::RegionExhausted;
          return out;
        }
        // k_c sits on the ray through c (a body symmetric about c). Every
        // separating direction still satisfies d^T x > 0, so cut with d.
        a = d / d.norm();
      } else {
        a /= an;
      }
      double f_before = 0.0;
      if (opts.checkInvariants && !opts.centralCuts) {
        const double width = std::sqrt(a.dot(factor_at(P, P.z).solve(a)));
        SearchRegion after = P;
        after.add_plane(a, std::min(a.dot(P.z) - width / k.gamma0, 0.0), 1.0);
        f_before = barrier_eval(after, P.z).F;
      }
      const double norm_before = P.z.norm();
      const RecenterResult rc = add_cut(P, a, k, dt, opts.centralCuts);
      if (!opts.centralCuts) {
        note_recenter(rc, k.Ca, f_before, P);
      } else {
        diag.newtonIterationsTotal += rc.iterations;
        ++inv.centralChecks;
        if (P.z.norm() < norm_before - 1e-6) ++inv.centralViolations;
      }
      ++diag.planesAdded;
      rec.kase = "2";
      rec.lambda = rc.lambda;
    }
    rec.h = P.h();
    rec.minSlack = P.min_slack(P.z);
    rec.oracleCalls = diag.oracleCalls;
    if (opts.onIteration) opts.onIteration(rec);
  }
}

PresearchResult heuristic_presearch(const RVector& p, const LinearOracle& oracle,
                                    int max_iters, double eps) {
  const double pn = p.norm();
  if (!(pn > 0.0)) throw InvalidInput("heuristic_presearch: p must be nonzero");
  PresearchResult out;
  RVector c = p / pn;
  for (int it = 0; it < max_iters; ++it) {
    const double cTp = c.dot(p);
    OracleReply reply = oracle({c, eps, {cTp - eps, EarlyStopMode::Both}});
    out.iterations = it + 1;
    double d = c.dot(reply.point) + eps - cTp;
    if (d <= 0.0) {
      // A reply cut short at the reference value can round to d <= 0; confirm
      // with a query that is only allowed to stop on a sound upper bound.
      reply = oracle({c, eps, {cTp - eps, EarlyStopMode::WitnessIfAbove}});
      d = c.dot(reply.point) + eps - cTp;
    }
    if (d <= 0.0) {
      out.direction = c;
      out.certificatePoint = reply.point;
      return out;
    }
    const RVector diff = p - reply.point;
    const double dn = diff.norm();
    if (dn <= 1e-15) return out;
    // Step towards margin 2 eps: a step sized by d alone only approaches
    // margin eps geometrically and never crosses it.
    c += (d + eps) * diff / dn;
    const double cn = c.norm();
    if (cn <= 1e-15) return out;
    c /= cn;
  }
  return out;
}

}  // namespace sepscope
