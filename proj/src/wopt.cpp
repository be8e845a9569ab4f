#include "sepscope/wopt.hpp"

#include <cmath>
#include <numbers>
#include <queue>
#include <random>

namespace sepscope {

const char* to_string(BoundRegime r) {
  switch (r) {
    case BoundRegime::RestartsExhausted: return "restarts-exhausted";
    case BoundRegime::EarlyCut: return "early-cut";
    case BoundRegime::EarlyWitness: return "early-witness";
    case BoundRegime::NetCertified: return "net-certified";
    case BoundRegime::Constant: return "constant";
  }
  return "restarts-exhausted";
}

namespace {

// (I (x) b)^dagger A (I (x) b), an M x M matrix.
CMatrix contract_b(const CMatrix& a, Dims dims, const CVector& b) {
  const int m = dims.m, n = dims.n;
  CMatrix out(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      out(i, j) = b.dot(a.block(i * n, j * n, n, n) * b);
  return out;
}

// (a (x) I)^dagger A (a (x) I), an N x N matrix.
CMatrix contract_a(const CMatrix& a, Dims dims, const CVector& alpha) {
  const int m = dims.m, n = dims.n;
  CMatrix out = CMatrix::Zero(n, n);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      out.noalias() += (std::conj(alpha(i)) * alpha(j)) * a.block(i * n, j * n, n, n);
  return out;
}

struct Top {
  double value;
  CVector vector;
};

Top top_eigen(const CMatrix& h) {
  if (h.rows() == 2) {
    // Closed form for a 2 x 2 Hermitian matrix [[p, q], [conj q, r]].
    const double p = h(0, 0).real(), r = h(1, 1).real();
    const Complex q = 0.5 * (h(0, 1) + std::conj(h(1, 0)));
    const double half = 0.5 * (p - r);
    const double rad = std::hypot(half, std::abs(q));
    CVector v(2);
    if (rad == 0.0) {
      v << 1.0, 0.0;
    } else if (half >= 0.0) {
      v << Complex(half + rad), std::conj(q);
    } else {
      v << q, Complex(rad - half);
    }
    v.normalize();
    return {0.5 * (p + r) + rad, v};
  }
  Eigen::SelfAdjointEigenSolver<CMatrix> es(0.5 * (h + h.adjoint()));
  if (es.info() != Eigen::Success)
    throw NumericalFailure("see-saw eigendecomposition failed");
  const Eigen::Index last = h.rows() - 1;
  return {es.eigenvalues()(last), es.eigenvectors().col(last)};
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

CVector gaussian_vector(std::mt19937_64& gen, int d) {
  std::normal_distribution<double> g;
  CVector v(d);
  for (int i = 0; i < d; ++i) {
    const double re = g(gen);
    const double im = g(gen);
    v(i) = Complex(re, im);
  }
  return v;
}

bool should_stop(const EarlyStopContext& early, double lower, double upper,
                 BoundRegime& regime) {
  const bool cut = early.mode == EarlyStopMode::CutIfBelow ||
                   early.mode == EarlyStopMode::Both;
  const bool wit = early.mode == EarlyStopMode::WitnessIfAbove ||
                   early.mode == EarlyStopMode::Both;
  if (cut && lower >= early.referenceValue) {
    regime = BoundRegime::EarlyCut;
    return true;
  }
  if (wit && upper < early.referenceValue) {
    regime = BoundRegime::EarlyWitness;
    return true;
  }
  return false;
}

}  // namespace

double expectation(const CMatrix& a, const PureProductState& s) {
  if (a.rows() != s.dims().total() || a.cols() != s.dims().total())
    throw DimensionMismatch("expectation: operator and state sizes differ");
  const CVector v = s.vector();
  return v.dot(a * v).real();
}

double expectation(const HermitianOp& a, const PureProductState& s) {
  if (a.dims() != s.dims()) throw DimensionMismatch("expectation: dims");
  return expectation(a.matrix(), s);
}

SeesawResult seesaw(const CMatrix& a, Dims dims, const PureProductState& seed,
                    SeesawOptions opts, bool record_history) {
  if (seed.dims() != dims || a.rows() != dims.total())
    throw DimensionMismatch("seesaw: seed does not match operator dims");
  CVector alpha = seed.alpha, beta = seed.beta;
  double value = expectation(a, seed);
  std::vector<double> hist;
  if (record_history) hist.push_back(value);
  int it = 0;
  for (; it < opts.maxIters; ++it) {
    const double before = value;
    Top ta = top_eigen(contract_b(a, dims, beta));
    alpha = ta.vector;
    if (record_history) hist.push_back(ta.value);
    Top tb = top_eigen(contract_a(a, dims, alpha));
    beta = tb.vector;
    value = tb.value;
    if (record_history) hist.push_back(tb.value);
    if (value - before < opts.tol) {
      ++it;
      break;
    }
  }
  PureProductState s = PureProductState::normalized(alpha, beta);
  const double v = expectation(a, s);
  return {std::move(s), v, it, std::move(hist)};
}

PureProductState nearest_product(const CVector& psi, Dims dims) {
  // psi(i*N + k) = V(i, k); V = U S W^dagger, so psi ~ s1 u1 (x) conj(w1).
  CMatrix v(dims.m, dims.n);
  for (int i = 0; i < dims.m; ++i)
    for (int k = 0; k < dims.n; ++k) v(i, k) = psi(i * dims.n + k);
  Eigen::JacobiSVD<CMatrix> svd(v, Eigen::ComputeFullU | Eigen::ComputeFullV);
  return PureProductState::normalized(svd.matrixU().col(0),
                                      svd.matrixV().col(0).conjugate());
}

PureProductState restart_seed(const Spectrum& spec, Dims dims, int k,
                              std::uint64_t seed) {
  const int d = dims.total();
  if (k < d) return nearest_product(spec.vectors.col(d - 1 - k), dims);
  std::uint64_t key = splitmix64(seed);
  key = splitmix64(key ^ std::uint64_t(k));
  key = splitmix64(key ^ (std::uint64_t(dims.m) << 32 | std::uint64_t(dims.n)));
  std::mt19937_64 gen(key);
  const CVector a = gaussian_vector(gen, dims.m);
  const CVector b = gaussian_vector(gen, dims.n);
  return PureProductState::normalized(a, b);
}

OracleResult b_star(const HermitianOp& a, double epsilon, int budget,
                    std::uint64_t seed, EarlyStopContext early) {
  if (budget < 1) throw InvalidInput("b_star: restart budget must be positive");
  if (!(epsilon > 0.0)) throw InvalidInput("b_star: epsilon must be positive");
  if (!std::isfinite(early.referenceValue))
    throw InvalidInput("b_star: reference value must be finite");
  const Dims dims = a.dims();
  const Spectrum spec = eig_hermitian(a);
  const double lmax = spec.values(spec.values.size() - 1);
  const double lmin = spec.values(0);

  if (lmax - lmin <= 1e-14 * std::max(1.0, std::abs(lmax))) {
    PureProductState s = restart_seed(spec, dims, 0, seed);
    const double c = a.trace() / double(dims.total());
    OracleResult r{c, std::move(s), c, epsilon};
    r.evaluations = 1;
    r.regime = BoundRegime::Constant;
    return r;
  }

  std::optional<SeesawResult> best;
  int best_k = 0;
  long evals = 0;
  BoundRegime regime = BoundRegime::RestartsExhausted;
  bool early_hit = false;
  for (int k = 0; k < budget; ++k) {
    SeesawOptions so;
    so.tol = 1e-10;
    SeesawResult r = seesaw(a.matrix(), dims, restart_seed(spec, dims, k, seed), so);
    evals += 2 * r.iterations;
    if (!best || r.value > best->value) {
      best = std::move(r);
      best_k = k;
    }
    if (should_stop(early, best->value, lmax, regime)) {
      early_hit = true;
      break;
    }
  }
  OracleResult out{best->value, best->state, std::max(lmax, best->value), epsilon};
  out.terminatedEarly = early_hit;
  out.evaluations = evals;
  out.regime = regime;
  out.bestSeed = best_k;
  return out;
}

OracleResult eps_net_b_star(const HermitianOp& a, double epsilon, long hard_cap) {
  if (!(epsilon > 0.0)) throw InvalidInput("eps_net_b_star: epsilon must be positive");
  const Dims dims = a.dims();
  if (dims.total() > 6 || std::min(dims.m, dims.n) != 2)
    throw InvalidInput("eps_net_b_star is limited to M*N <= 6");
  const Spectrum spec = eig_hermitian(a);
  const double lmax = spec.values(spec.values.size() - 1);
  const double lmin = spec.values(0);
  if (lmax - lmin <= 1e-14 * std::max(1.0, std::abs(lmax))) {
    const double c = a.trace() / double(dims.total());
    OracleResult r{c, restart_seed(spec, dims, 0, 0), c, epsilon};
    r.evaluations = 1;
    r.regime = BoundRegime::Constant;
    return r;
  }
  // Lipschitz constant of q -> max_other <q (x) .|A|q (x) .> with respect to
  // the chordal Bloch distance of q: the operator norm of A - tI, t the
  // spectral midpoint.
  const double lip = 0.5 * (lmax - lmin);
  const bool qubit_a = dims.m == 2;
  const double pi = std::numbers::pi;

  auto qubit = [](double th, double ph) {
    CVector q(2);
    q(0) = std::cos(0.5 * th);
    q(1) = std::polar(std::sin(0.5 * th), ph);
    return q;
  };
  auto eval = [&](double th, double ph) {
    const CVector q = qubit(th, ph);
    return top_eigen(qubit_a ? contract_a(a.matrix(), dims, q)
                             : contract_b(a.matrix(), dims, q));
  };

  struct Cell {
    double th0, th1, ph0, ph1, bound;
    long id;
  };
  auto cmp = [](const Cell& x, const Cell& y) {
    return x.bound < y.bound || (x.bound == y.bound && x.id > y.id);
  };
  std::priority_queue<Cell, std::vector<Cell>, decltype(cmp)> open(cmp);

  double best = -std::numeric_limits<double>::infinity();
  double best_th = 0.0, best_ph = 0.0;
  CVector best_other;
  long evals = 0, next_id = 0;
  double closed_max = -std::numeric_limits<double>::infinity();

  auto push = [&](double th0, double th1, double ph0, double ph1) {
    const double th = 0.5 * (th0 + th1), ph = 0.5 * (ph0 + ph1);
    Top t = eval(th, ph);
    ++evals;
    if (t.value > best) {
      best = t.value;
      best_th = th;
      best_ph = ph;
      best_other = t.vector;
    }
    const double smax =
        (th0 <= 0.5 * pi && th1 >= 0.5 * pi) ? 1.0
                                             : std::max(std::sin(th0), std::sin(th1));
    const double reach = 0.5 * (th1 - th0) + 0.5 * smax * (ph1 - ph0);
    const double bound = t.value + lip * reach;
    if (bound <= best + epsilon)
      closed_max = std::max(closed_max, bound);
    else
      open.push({th0, th1, ph0, ph1, bound, next_id++});
  };

  constexpr int kTheta = 8, kPhi = 16;
  for (int i = 0; i < kTheta; ++i)
    for (int j = 0; j < kPhi; ++j)
      push(pi * i / kTheta, pi * (i + 1) / kTheta, 2 * pi * j / kPhi,
           2 * pi * (j + 1) / kPhi);

  while (!open.empty() && open.top().bound > best + epsilon) {
    if (evals + 4 > hard_cap)
      throw BudgetExceeded("eps_net_b_star: evaluation cap reached");
    const Cell c = open.top();
    open.pop();
    const double tm = 0.5 * (c.th0 + c.th1), pm = 0.5 * (c.ph0 + c.ph1);
    push(c.th0, tm, c.ph0, pm);
    push(c.th0, tm, pm, c.ph1);
    push(tm, c.th1, c.ph0, pm);
    push(tm, c.th1, pm, c.ph1);
  }
  double upper = std::max(best, closed_max);
  if (!open.empty()) upper = std::max(upper, open.top().bound);
  upper = std::min(upper, lmax);

  const CVector q = qubit(best_th, best_ph);
  PureProductState s = qubit_a ? PureProductState::normalized(q, best_other)
                               : PureProductState::normalized(best_other, q);
  const double value = expectation(a, s);
  OracleResult out{value, std::move(s), std::max(upper, value), epsilon};
  out.evaluations = evals;
  out.regime = BoundRegime::NetCertified;
  return out;
}

}  // namespace sepscope
