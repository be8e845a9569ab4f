#pragma once

// Hermitian operators on C^M (x) C^N: construction, tensor algebra, partial
// operations, the product observable basis and the Bloch-vector isometry.
//
// Composite indices follow the usual Kronecker convention: row (i, k) with
// i in [0, M) on subsystem A and k in [0, N) on subsystem B sits at i*N + k.

#include <complex>
#include <limits>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "sepscope/errors.hpp"

namespace sepscope {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RMatrix = Eigen::MatrixXd;
using RVector = Eigen::VectorXd;

inline constexpr double kHermitianTol = 1e-12;
inline constexpr double kTraceTol = 1e-10;
inline constexpr double kPsdSlack = 1e-10;
inline constexpr double kUnitNormTol = 1e-12;

struct Dims {
  int m = 0;
  int n = 0;
  int total() const { return m * n; }
  bool operator==(const Dims&) const = default;
};

enum class Subsystem { A, B };

// ---------------------------------------------------------------------------
// Matrix-level primitives. These accept any Eigen expression so callers can
// pass products and sums without materialising them first.

template <typename DA, typename DB>
CMatrix kron(const Eigen::MatrixBase<DA>& a, const Eigen::MatrixBase<DB>& b) {
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) =
          Complex(a(i, j)) * b.template cast<Complex>();
  return out;
}

template <typename Derived>
double hermiticity_defect(const Eigen::MatrixBase<Derived>& op) {
  if (op.rows() != op.cols()) return std::numeric_limits<double>::infinity();
  return (op - op.adjoint()).cwiseAbs().maxCoeff();
}

/// Partial trace over `traced`; the result lives on the other factor.
template <typename Derived>
CMatrix partial_trace(const Eigen::MatrixBase<Derived>& op, Dims dims,
                      Subsystem traced) {
  const int m = dims.m, n = dims.n;
  if (op.rows() != m * n || op.cols() != m * n)
    throw DimensionMismatch("partial_trace: operator size does not match dims");
  if (traced == Subsystem::B) {
    CMatrix out = CMatrix::Zero(m, m);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j)
        for (int k = 0; k < n; ++k) out(i, j) += op(i * n + k, j * n + k);
    return out;
  }
  CMatrix out = CMatrix::Zero(n, n);
  for (int k = 0; k < n; ++k)
    for (int l = 0; l < n; ++l)
      for (int i = 0; i < m; ++i) out(k, l) += op(i * n + k, i * n + l);
  return out;
}

template <typename Derived>
CMatrix partial_transpose(const Eigen::MatrixBase<Derived>& op, Dims dims,
                          Subsystem which) {
  const int m = dims.m, n = dims.n;
  if (op.rows() != m * n || op.cols() != m * n)
    throw DimensionMismatch("partial_transpose: operator size does not match dims");
  CMatrix out(m * n, m * n);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          if (which == Subsystem::B)
            out(i * n + k, j * n + l) = op(i * n + l, j * n + k);
          else
            out(i * n + k, j * n + l) = op(j * n + k, i * n + l);
        }
  return out;
}

/// Realignment U(rho), an M^2 x N^2 matrix with U(A (x) B) = vec(A) vec(B)^T,
/// vec stacking columns.
template <typename Derived>
CMatrix realign(const Eigen::MatrixBase<Derived>& op, Dims dims) {
  const int m = dims.m, n = dims.n;
  if (op.rows() != m * n || op.cols() != m * n)
    throw DimensionMismatch("realign: operator size does not match dims");
  CMatrix out(m * m, n * n);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l)
          out(j * m + i, l * n + k) = op(i * n + k, j * n + l);
  return out;
}

double trace_norm(const CMatrix& x);

// ---------------------------------------------------------------------------
// Domain types

class HermitianOp {
 public:
  /// Validates Hermiticity within kHermitianTol and stores the exactly
  /// Hermitian part.
  HermitianOp(Dims dims, CMatrix entries);

  static HermitianOp identity(Dims dims);

  Dims dims() const { return dims_; }
  int size() const { return dims_.total(); }
  const CMatrix& matrix() const { return entries_; }
  double trace() const { return entries_.trace().real(); }
  double frobenius_norm() const { return entries_.norm(); }

  HermitianOp operator-() const { return {dims_, -entries_}; }
  friend HermitianOp operator+(const HermitianOp& a, const HermitianOp& b);
  friend HermitianOp operator-(const HermitianOp& a, const HermitianOp& b);
  friend HermitianOp operator*(double s, const HermitianOp& a) {
    return {a.dims_, s * a.entries_};
  }

 private:
  Dims dims_;
  CMatrix entries_;
};

/// Unit-trace positive semidefinite operator (PSD up to kPsdSlack).
class DensityMatrix {
 public:
  explicit DensityMatrix(HermitianOp op);
  DensityMatrix(Dims dims, CMatrix entries)
      : DensityMatrix(HermitianOp(dims, std::move(entries))) {}

  static DensityMatrix maximally_mixed(Dims dims);
  /// |psi><psi| for a (not necessarily normalised) vector psi.
  static DensityMatrix pure(Dims dims, const CVector& psi);

  const HermitianOp& op() const { return op_; }
  Dims dims() const { return op_.dims(); }
  const CMatrix& matrix() const { return op_.matrix(); }

 private:
  HermitianOp op_;
};

struct PureProductState {
  CVector alpha;
  CVector beta;

  /// Requires unit-norm factors within kUnitNormTol.
  PureProductState(CVector a, CVector b);
  static PureProductState normalized(const CVector& a, const CVector& b);

  Dims dims() const { return {int(alpha.size()), int(beta.size())}; }
  CVector vector() const;
  DensityMatrix density() const;
};

/// Orthonormal Hermitian product basis {X_i} of H_{M,N}; X_0 = I/sqrt(MN).
class ObservableBasis {
 public:
  ObservableBasis(Dims dims, std::vector<CMatrix> local_a,
                  std::vector<CMatrix> local_b);

  Dims dims() const { return dims_; }
  int size() const { return int(elements_.size()); }
  const CMatrix& operator[](int i) const { return elements_.at(i); }
  const std::vector<CMatrix>& elements() const { return elements_; }

  /// The local factors of element i = a * N^2 + b.
  const CMatrix& factor_a(int i) const { return local_a_.at(i / local_b_size()); }
  const CMatrix& factor_b(int i) const { return local_b_.at(i % local_b_size()); }
  int index_of(int a, int b) const { return a * local_b_size() + b; }

  /// {1, ..., M^2 N^2 - 1}.
  std::vector<int> traceless_indices() const;
  void check_index_set(std::span<const int> index_set) const;

 private:
  int local_b_size() const { return int(local_b_.size()); }

  Dims dims_;
  std::vector<CMatrix> local_a_;
  std::vector<CMatrix> local_b_;
  std::vector<CMatrix> elements_;
};

struct BlochVector {
  RVector coords;
  std::vector<int> indexSet;
};

/// Normalised generators of su(d) preceded by I/sqrt(d): identity, the
/// symmetric (X-like) pairs, the antisymmetric (Y-like) pairs, then the
/// diagonal (Z-like) generators. Each has tr(G^2) = 1.
std::vector<CMatrix> su_generators(int d);

ObservableBasis build_basis(int m, int n);

BlochVector bloch_project(const HermitianOp& a, const ObservableBasis& basis,
                          std::span<const int> index_set);
/// Same map evaluated on a product state through the local factors only.
RVector bloch_project(const PureProductState& s, const ObservableBasis& basis,
                      std::span<const int> index_set);
HermitianOp bloch_lift(const BlochVector& x, const ObservableBasis& basis,
                       bool include_identity);

DensityMatrix partial_trace(const DensityMatrix& rho, Subsystem traced);
HermitianOp partial_transpose(const HermitianOp& a, Subsystem which);
CMatrix realign(const HermitianOp& a);

struct Spectrum {
  RVector values;   // nondecreasing
  CMatrix vectors;  // orthonormal columns
};

Spectrum eig_hermitian(const HermitianOp& a);
/// Raw-matrix variant; rejects inputs that are not Hermitian within
/// kHermitianTol.
Spectrum eig_hermitian(const CMatrix& a);
RVector eigenvalues(const CMatrix& hermitian);

double purity(const DensityMatrix& rho);
double expectation(const HermitianOp& a, const DensityMatrix& rho);

}  // namespace sepscope
