#include "sepscope/hermops.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace sepscope {

namespace {

void check_dims(Dims dims) {
  if (dims.m < 1 || dims.n < 1)
    throw InvalidDimension("dimensions must be positive, got (" +
                           std::to_string(dims.m) + "," +
                           std::to_string(dims.n) + ")");
}

CMatrix hermitian_part(const CMatrix& a) { return 0.5 * (a + a.adjoint()); }

// tr(X A) for square matrices of equal size.
double trace_product_real(const CMatrix& x, const CMatrix& a) {
  return x.transpose().cwiseProduct(a).sum().real();
}

}  // namespace

double trace_norm(const CMatrix& x) {
  Eigen::JacobiSVD<CMatrix> svd(x);
  return svd.singularValues().sum();
}

HermitianOp::HermitianOp(Dims dims, CMatrix entries) : dims_(dims) {
  check_dims(dims);
  if (entries.rows() != dims.total() || entries.cols() != dims.total())
    throw DimensionMismatch("operator must be " + std::to_string(dims.total()) +
                            "x" + std::to_string(dims.total()));
  if (!entries.allFinite()) throw InvalidInput("operator has non-finite entries");
  if (hermiticity_defect(entries) > kHermitianTol)
    throw InvalidInput("operator is not Hermitian within tolerance");
  entries_ = hermitian_part(entries);
}

HermitianOp HermitianOp::identity(Dims dims) {
  check_dims(dims);
  return {dims, CMatrix::Identity(dims.total(), dims.total())};
}

HermitianOp operator+(const HermitianOp& a, const HermitianOp& b) {
  if (a.dims_ != b.dims_) throw DimensionMismatch("operator dims differ");
  return {a.dims_, a.entries_ + b.entries_};
}

HermitianOp operator-(const HermitianOp& a, const HermitianOp& b) {
  if (a.dims_ != b.dims_) throw DimensionMismatch("operator dims differ");
  return {a.dims_, a.entries_ - b.entries_};
}

DensityMatrix::DensityMatrix(HermitianOp op) : op_(std::move(op)) {
  if (std::abs(op_.trace() - 1.0) > kTraceTol)
    throw InvalidInput("density matrix trace is not 1 (got " +
                       std::to_string(op_.trace()) + ")");
  const double lmin = eigenvalues(op_.matrix())(0);
  if (lmin < -kPsdSlack)
    throw InvalidInput("density matrix is not positive semidefinite");
}

DensityMatrix DensityMatrix::maximally_mixed(Dims dims) {
  check_dims(dims);
  const int d = dims.total();
  return DensityMatrix(dims, CMatrix::Identity(d, d) / double(d));
}

DensityMatrix DensityMatrix::pure(Dims dims, const CVector& psi) {
  check_dims(dims);
  if (psi.size() != dims.total()) throw DimensionMismatch("state vector length");
  const double nrm = psi.norm();
  if (nrm == 0.0) throw InvalidInput("zero state vector");
  const CVector u = psi / nrm;
  return DensityMatrix(dims, u * u.adjoint());
}

PureProductState::PureProductState(CVector a, CVector b)
    : alpha(std::move(a)), beta(std::move(b)) {
  if (alpha.size() < 1 || beta.size() < 1)
    throw InvalidDimension("product state factors must be nonempty");
  if (std::abs(alpha.norm() - 1.0) > kUnitNormTol ||
      std::abs(beta.norm() - 1.0) > kUnitNormTol)
    throw InvalidInput("product state factors must have unit norm");
}

PureProductState PureProductState::normalized(const CVector& a,
                                              const CVector& b) {
  const double na = a.norm(), nb = b.norm();
  if (na == 0.0 || nb == 0.0) throw InvalidInput("zero product factor");
  return {a / na, b / nb};
}

CVector PureProductState::vector() const { return kron(alpha, beta); }

DensityMatrix PureProductState::density() const {
  const CVector v = vector();
  return DensityMatrix(dims(), v * v.adjoint());
}

std::vector<CMatrix> su_generators(int d) {
  if (d < 1) throw InvalidDimension("generator dimension must be positive");
  const double s = 1.0 / std::sqrt(2.0);
  const Complex i1(0.0, 1.0);
  std::vector<CMatrix> out;
  out.reserve(std::size_t(d) * d);
  out.push_back(CMatrix::Identity(d, d) / std::sqrt(double(d)));
  for (int j = 0; j < d; ++j)
    for (int k = j + 1; k < d; ++k) {
      CMatrix g = CMatrix::Zero(d, d);
      g(j, k) = s;
      g(k, j) = s;
      out.push_back(std::move(g));
    }
  for (int j = 0; j < d; ++j)
    for (int k = j + 1; k < d; ++k) {
      CMatrix g = CMatrix::Zero(d, d);
      g(j, k) = -i1 * s;
      g(k, j) = i1 * s;
      out.push_back(std::move(g));
    }
  for (int l = 1; l < d; ++l) {
    CMatrix g = CMatrix::Zero(d, d);
    const double c = 1.0 / std::sqrt(double(l) * (l + 1));
    for (int m = 0; m < l; ++m) g(m, m) = c;
    g(l, l) = -double(l) * c;
    out.push_back(std::move(g));
  }
  return out;
}

ObservableBasis::ObservableBasis(Dims dims, std::vector<CMatrix> local_a,
                                 std::vector<CMatrix> local_b)
    : dims_(dims), local_a_(std::move(local_a)), local_b_(std::move(local_b)) {
  elements_.reserve(local_a_.size() * local_b_.size());
  for (const auto& xa : local_a_)
    for (const auto& xb : local_b_) elements_.push_back(kron(xa, xb));
}

std::vector<int> ObservableBasis::traceless_indices() const {
  std::vector<int> t(size() - 1);
  for (int i = 1; i < size(); ++i) t[i - 1] = i;
  return t;
}

void ObservableBasis::check_index_set(std::span<const int> index_set) const {
  if (index_set.empty()) throw InvalidInput("index set is empty");
  std::vector<int> seen(index_set.begin(), index_set.end());
  std::sort(seen.begin(), seen.end());
  if (std::adjacent_find(seen.begin(), seen.end()) != seen.end())
    throw InvalidInput("index set has duplicates");
  if (seen.front() < 1 || seen.back() >= size())
    throw InvalidInput("index set entry outside 1.." + std::to_string(size() - 1));
}

ObservableBasis build_basis(int m, int n) {
  if (m < 2 || n < 2)
    throw InvalidDimension("basis requires M,N >= 2, got (" + std::to_string(m) +
                           "," + std::to_string(n) + ")");
  return ObservableBasis({m, n}, su_generators(m), su_generators(n));
}

BlochVector bloch_project(const HermitianOp& a, const ObservableBasis& basis,
                          std::span<const int> index_set) {
  if (a.dims() != basis.dims()) throw DimensionMismatch("bloch_project: dims");
  basis.check_index_set(index_set);
  BlochVector v;
  v.indexSet.assign(index_set.begin(), index_set.end());
  v.coords.resize(Eigen::Index(index_set.size()));
  for (std::size_t k = 0; k < index_set.size(); ++k)
    v.coords(Eigen::Index(k)) = trace_product_real(basis[index_set[k]], a.matrix());
  return v;
}

RVector bloch_project(const PureProductState& s, const ObservableBasis& basis,
                      std::span<const int> index_set) {
  if (s.dims() != basis.dims()) throw DimensionMismatch("bloch_project: dims");
  const int m2 = basis.dims().m * basis.dims().m;
  const int n2 = basis.dims().n * basis.dims().n;
  RVector ea(m2), eb(n2);
  for (int a = 0; a < m2; ++a)
    ea(a) = s.alpha.dot(basis.factor_a(a * n2) * s.alpha).real();
  for (int b = 0; b < n2; ++b)
    eb(b) = s.beta.dot(basis.factor_b(b) * s.beta).real();
  RVector out(Eigen::Index(index_set.size()));
  for (std::size_t k = 0; k < index_set.size(); ++k) {
    const int i = index_set[k];
    out(Eigen::Index(k)) = ea(i / n2) * eb(i % n2);
  }
  return out;
}

HermitianOp bloch_lift(const BlochVector& x, const ObservableBasis& basis,
                       bool include_identity) {
  if (x.coords.size() != Eigen::Index(x.indexSet.size()))
    throw InvalidInput("Bloch vector length differs from its index set");
  basis.check_index_set(x.indexSet);
  const int d = basis.dims().total();
  CMatrix out = CMatrix::Zero(d, d);
  for (std::size_t k = 0; k < x.indexSet.size(); ++k)
    out += x.coords(Eigen::Index(k)) * basis[x.indexSet[k]];
  if (include_identity) out += CMatrix::Identity(d, d) / double(d);
  return {basis.dims(), out};
}

DensityMatrix partial_trace(const DensityMatrix& rho, Subsystem traced) {
  const Dims d = rho.dims();
  const CMatrix r = partial_trace(rho.matrix(), d, traced);
  const Dims out = traced == Subsystem::B ? Dims{d.m, 1} : Dims{d.n, 1};
  return DensityMatrix(out, r);
}

HermitianOp partial_transpose(const HermitianOp& a, Subsystem which) {
  return {a.dims(), partial_transpose(a.matrix(), a.dims(), which)};
}

CMatrix realign(const HermitianOp& a) { return realign(a.matrix(), a.dims()); }

Spectrum eig_hermitian(const HermitianOp& a) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(a.matrix());
  if (es.info() != Eigen::Success)
    throw NumericalFailure("Hermitian eigendecomposition did not converge");
  return {es.eigenvalues(), es.eigenvectors()};
}

Spectrum eig_hermitian(const CMatrix& a) {
  if (hermiticity_defect(a) > kHermitianTol)
    throw InvalidInput("eig_hermitian: matrix is not Hermitian within tolerance");
  Eigen::SelfAdjointEigenSolver<CMatrix> es(hermitian_part(a));
  if (es.info() != Eigen::Success)
    throw NumericalFailure("Hermitian eigendecomposition did not converge");
  return {es.eigenvalues(), es.eigenvectors()};
}

RVector eigenvalues(const CMatrix& hermitian) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(hermitian_part(hermitian),
                                            Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success)
    throw NumericalFailure("Hermitian eigendecomposition did not converge");
  return es.eigenvalues();
}

double purity(const DensityMatrix& rho) { return rho.matrix().squaredNorm(); }

double expectation(const HermitianOp& a, const DensityMatrix& rho) {
  if (a.dims() != rho.dims()) throw DimensionMismatch("expectation: dims");
  return trace_product_real(a.matrix(), rho.matrix());
}

}  // namespace sepscope
