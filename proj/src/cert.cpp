#include "sepscope/cert.hpp"

#include <algorithm>
#include <cmath>

#include "sepscope/wopt.hpp"

namespace sepscope {

namespace {

bool on_grid(double x, int bits) {
  const double scale = std::ldexp(1.0, bits);
  return std::abs(x - std::round(x * scale) / scale) <= 1e-15;
}

bool vector_on_grid(const CVector& v, int bits) {
  for (Eigen::Index i = 0; i < v.size(); ++i)
    if (!on_grid(v(i).real(), bits) || !on_grid(v(i).imag(), bits)) return false;
  return true;
}

CVector truncate_vector(const CVector& v, int bits) {
  CVector out(v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i)
    out(i) = Complex(truncate_bits(v(i).real(), bits), truncate_bits(v(i).imag(), bits));
  return out;
}

}  // namespace

void SeparableCertificate::validate(Dims dims) const {
  if (precisionBits < 1 || precisionBits > 52)
    throw InvalidInput("certificate precisionBits must lie in 1..52");
  if (terms.empty()) throw InvalidInput("certificate has no terms");
  if (int(terms.size()) > dims.total() * dims.total())
    throw InvalidInput("certificate has more than M^2 N^2 terms");
  for (const auto& t : terms) {
    if (t.alpha.size() != dims.m || t.beta.size() != dims.n)
      throw InvalidInput("certificate term has wrong factor length");
    if (!(t.p >= 0.0)) throw InvalidInput("certificate weight is negative");
    if (!on_grid(t.p, precisionBits) || !vector_on_grid(t.alpha, precisionBits) ||
        !vector_on_grid(t.beta, precisionBits))
      throw InvalidInput("certificate value not representable in precisionBits");
  }
}

double truncate_bits(double x, int bits) {
  const double scale = std::ldexp(1.0, bits);
  return std::trunc(x * scale) / scale;
}

SeparableCertificate truncate_certificate(const std::vector<CertificateTerm>& exact,
                                          int bits) {
  SeparableCertificate c;
  c.precisionBits = bits;
  for (const auto& t : exact)
    c.terms.push_back({truncate_bits(t.p, bits), truncate_vector(t.alpha, bits),
                       truncate_vector(t.beta, bits)});
  return c;
}

CMatrix certificate_state(const SeparableCertificate& cert) {
  const auto& first = cert.terms.at(0);
  const Eigen::Index d = first.alpha.size() * first.beta.size();
  CMatrix s = CMatrix::Zero(d, d);
  for (const auto& t : cert.terms) {
    const CVector v = kron(t.alpha, t.beta);
    s += t.p * v * v.adjoint();
  }
  return s;
}

QsepCheck verify_qsep_certificate(const DensityMatrix& rho,
                                  const SeparableCertificate& cert, double eps_prime,
                                  double delta_prime) {
  cert.validate(rho.dims());
  if (!(eps_prime > 0.0) || !(delta_prime > 0.0))
    throw InvalidInput("certificate tolerances must be positive");
  double psum = 0.0;
  for (const auto& t : cert.terms) psum += t.p;
  QsepCheck q;
  for (const auto& t : cert.terms)
    q.normCheckMax = std::max(
        q.normCheckMax,
        std::abs(1.0 - t.alpha.squaredNorm() * t.beta.squaredNorm() * psum));
  q.distance = (rho.matrix() - certificate_state(cert)).norm();
  q.normalizationOk = q.normCheckMax < eps_prime;
  q.distanceOk = q.distance * q.distance < delta_prime * delta_prime;
  q.accepted = q.normalizationOk && q.distanceOk;
  q.normalizedBound = delta_prime + eps_prime;
  return q;
}

double truncation_error_bound(Dims dims, int bits) {
  const double d = dims.total();
  return d * d * d * std::ldexp(1.0, -bits) * std::pow(2.0, 7.5);
}

bool affine_independent(const std::vector<RVector>& points) {
  if (points.empty()) throw InvalidInput("affine_independent: empty point list");
  const Eigen::Index dim = points.front().size();
  for (const auto& x : points)
    if (x.size() != dim) throw InvalidInput("affine_independent: ragged input");
  const Eigen::Index k = Eigen::Index(points.size()) - 1;
  if (k == 0) return true;
  if (k > dim) return false;
  RMatrix d(dim, k);
  for (Eigen::Index i = 0; i < k; ++i) d.col(i) = points[i + 1] - points[0];
  Eigen::JacobiSVD<RMatrix> svd(d);
  const RVector s = svd.singularValues();
  if (!(s(0) > 0.0)) return false;
  return (s.array() > 1e-10 * s(0)).count() == k;
}

bool hull_membership(const RVector& q, const std::vector<RVector>& vertices) {
  if (vertices.empty()) throw InvalidInput("hull_membership: no vertices");
  const Eigen::Index dim = vertices.front().size();
  if (Eigen::Index(vertices.size()) != dim + 1 || q.size() != dim ||
      !affine_independent(vertices))
    throw InvalidInput("hull_membership: need dim+1 affinely independent vertices");
  const int nv = int(vertices.size());
  for (int j = 0; j < nv; ++j) {
    const int l = j == 0 ? 1 : 0;  // reference vertex on the facet
    RMatrix facet(dim, dim - 1);
    int col = 0;
    for (int i = 0; i < nv; ++i)
      if (i != j && i != l) facet.col(col++) = vertices[i] - vertices[l];
    RVector normal;
    if (dim == 1) {
      normal = RVector::Ones(1);
    } else {
      Eigen::JacobiSVD<RMatrix> svd(facet.transpose(), Eigen::ComputeFullV);
      normal = svd.matrixV().col(dim - 1);
    }
    const double sj = normal.dot(vertices[j] - vertices[l]);
    const double sq = normal.dot(q - vertices[l]);
    if (std::abs(sq) <= 1e-10) continue;
    if ((sq > 0.0) != (sj > 0.0)) return false;
  }
  return true;
}

bool hull_membership_retracted(const RVector& q, const std::vector<RVector>& vertices,
                               double eps_prime) {
  if (vertices.empty()) throw InvalidInput("hull_membership: no vertices");
  RVector centroid = RVector::Zero(vertices.front().size());
  for (const auto& v : vertices) centroid += v;
  centroid /= double(vertices.size());
  const RVector off = q - centroid;
  const double len = off.norm();
  if (len <= eps_prime) return hull_membership(centroid, vertices);
  return hull_membership(q - eps_prime * off / len, vertices);
}

GilbertResult gilbert_distance(const DensityMatrix& rho, int max_iters, double tol,
                               int restarts, std::uint64_t seed) {
  if (max_iters < 1) throw InvalidInput("gilbert_distance: max_iters must be positive");
  const Dims dims = rho.dims();
  const ObservableBasis basis = build_basis(dims.m, dims.n);
  const std::vector<int> t = basis.traceless_indices();
  const RVector p = bloch_project(rho.op(), basis, t).coords;

  GilbertResult g;
  RVector x = RVector::Zero(p.size());  // the maximally mixed state
  double best_lower = 0.0;
  for (int it = 0; it < max_iters; ++it) {
    const RVector d = p - x;
    const double dn = d.norm();
    g.iterations = it + 1;
    if (dn <= 1e-15) {
      g.gap = 0.0;
      g.history.push_back(0.0);
      break;
    }
    const RVector c = d / dn;
    const OracleResult r = b_star(bloch_lift({c, t}, basis, false), 1e-9, restarts, seed);
    const RVector k = bloch_project(r.maximizer, basis, t);
    best_lower = std::max(best_lower, c.dot(p) - r.lowerBound);
    const RVector step = k - x;
    g.gap = d.dot(step);
    if (g.gap <= tol) {
      g.history.push_back(dn);
      break;
    }
    const double gamma = std::clamp(g.gap / step.squaredNorm(), 0.0, 1.0);
    x += gamma * step;
    g.history.push_back((p - x).norm());
  }
  g.distance = (p - x).norm();
  g.lowerBound = best_lower;
  g.nearestPoint = {x, t};
  return g;
}

}  // namespace sepscope
