#include "helmwave/linalg.hpp"

#include <stdexcept>

#include <Eigen/SparseLU>

namespace helmwave {

Vector spmv(const SparseMatrix& A, const Vector& x, ApplyMode mode) {
  switch (mode) {
    case ApplyMode::Normal:
      if (A.cols() != x.size()) throw std::invalid_argument("spmv: dimension mismatch");
      return A * x;
    case ApplyMode::Transpose:
      if (A.rows() != x.size()) throw std::invalid_argument("spmv: dimension mismatch");
      return A.transpose() * x;
    case ApplyMode::Adjoint:
      if (A.rows() != x.size()) throw std::invalid_argument("spmv: dimension mismatch");
      return A.adjoint() * x;
  }
  throw std::logic_error("spmv: bad mode");
}

struct SparseFactorization::Impl {
  Eigen::SparseLU<SparseMatrix, Eigen::COLAMDOrdering<int>> lu;
};

SparseFactorization::SparseFactorization(const SparseMatrix& A) : impl_(new Impl), n_(A.rows()) {
  if (A.rows() != A.cols())
    throw std::invalid_argument("SparseFactorization: matrix must be square");
  SparseMatrix Ac = A;
  Ac.makeCompressed();
  impl_->lu.compute(Ac);
  if (impl_->lu.info() != Eigen::Success)
    throw std::runtime_error("SparseFactorization: singular matrix");
}

SparseFactorization::~SparseFactorization() = default;
SparseFactorization::SparseFactorization(SparseFactorization&&) noexcept = default;
SparseFactorization& SparseFactorization::operator=(SparseFactorization&&) noexcept = default;

Vector SparseFactorization::solve(const Vector& b, ApplyMode mode) const {
  if (b.size() != n_) throw std::invalid_argument("SparseFactorization::solve: dimension mismatch");
  switch (mode) {
    case ApplyMode::Normal:
      return impl_->lu.solve(b);
    case ApplyMode::Transpose:
      return impl_->lu.transpose().solve(b);
    case ApplyMode::Adjoint:
      return impl_->lu.adjoint().solve(b);
  }
  throw std::logic_error("SparseFactorization::solve: bad mode");
}

DenseMatrix SparseFactorization::solve(const DenseMatrix& B, ApplyMode mode) const {
  if (B.rows() != n_) throw std::invalid_argument("SparseFactorization::solve: dimension mismatch");
  switch (mode) {
    case ApplyMode::Normal:
      return impl_->lu.solve(B);
    case ApplyMode::Transpose:
      return impl_->lu.transpose().solve(B);
    case ApplyMode::Adjoint:
      return impl_->lu.adjoint().solve(B);
  }
  throw std::logic_error("SparseFactorization::solve: bad mode");
}

DenseMatrix thin_qr(const DenseMatrix& Y, Index* reduced_width) {
  if (Y.rows() == 0 || Y.cols() == 0) {
    if (reduced_width) *reduced_width = 0;
    return DenseMatrix(Y.rows(), 0);
  }
  bool deficient = Y.cols() > Y.rows();  // wide input cannot have full column rank
  if (!deficient) {
    Eigen::HouseholderQR<DenseMatrix> qr(Y);
    const DenseMatrix R = qr.matrixQR().topRows(Y.cols()).triangularView<Eigen::Upper>();
    double rmax = 0.0;
    for (Index i = 0; i < Y.cols(); ++i) rmax = std::max(rmax, std::abs(R(i, i)));
    deficient = rmax == 0.0;
    for (Index i = 0; i < Y.cols() && !deficient; ++i)
      if (std::abs(R(i, i)) < 1e-12 * rmax) deficient = true;
    if (!deficient) {
      if (reduced_width) *reduced_width = Y.cols();
      return qr.householderQ() * DenseMatrix::Identity(Y.rows(), Y.cols());
    }
  }

  // Dependent columns: redo with column pivoting and keep a basis of the span.
  Eigen::ColPivHouseholderQR<DenseMatrix> pqr(Y);
  pqr.setThreshold(1e-10);
  const Index rank = pqr.rank();
  if (reduced_width) *reduced_width = rank;
  return pqr.householderQ() * DenseMatrix::Identity(Y.rows(), rank);
}

Svd small_svd(const DenseMatrix& B) {
  Eigen::JacobiSVD<DenseMatrix> svd(B, Eigen::ComputeThinU | Eigen::ComputeThinV);
  return Svd{svd.matrixU(), svd.singularValues(), svd.matrixV()};
}

struct DenseFactorization::Impl {
  Eigen::PartialPivLU<DenseMatrix> lu;
};

DenseFactorization::DenseFactorization(const DenseMatrix& A) : impl_(new Impl), n_(A.rows()) {
  if (A.rows() != A.cols()) throw std::invalid_argument("DenseFactorization: matrix must be square");
  impl_->lu.compute(A);
  if (n_ > 0) {
    const auto& lu = impl_->lu.matrixLU();
    double umax = 0.0, umin = std::numeric_limits<double>::infinity();
    for (Index i = 0; i < n_; ++i) {
      const double d = std::abs(lu(i, i));
      umax = std::max(umax, d);
      umin = std::min(umin, d);
    }
    if (umax == 0.0 || umin < 1e-14 * umax)
      throw std::runtime_error("DenseFactorization: matrix is singular to working precision");
  }
}

DenseFactorization::~DenseFactorization() = default;
DenseFactorization::DenseFactorization(DenseFactorization&&) noexcept = default;
DenseFactorization& DenseFactorization::operator=(DenseFactorization&&) noexcept = default;

Vector DenseFactorization::solve(const Vector& b, ApplyMode mode) const {
  if (b.size() != n_) throw std::invalid_argument("DenseFactorization::solve: dimension mismatch");
  switch (mode) {
    case ApplyMode::Normal:
      return impl_->lu.solve(b);
    case ApplyMode::Transpose:
      return impl_->lu.transpose().solve(b);
    case ApplyMode::Adjoint:
      return impl_->lu.adjoint().solve(b);
  }
  throw std::logic_error("DenseFactorization::solve: bad mode");
}

DenseMatrix LinearOperator::apply_batch(const DenseMatrix& X, ApplyMode mode) const {
  const Index out = (mode == ApplyMode::Normal) ? rows() : cols();
  DenseMatrix Y(out, X.cols());
  for (Index j = 0; j < X.cols(); ++j) Y.col(j) = apply(X.col(j), mode);
  return Y;
}

DenseMatrix LinearOperator::materialize() const {
  DenseMatrix T(rows(), cols());
  Vector e = Vector::Zero(cols());
  for (Index j = 0; j < cols(); ++j) {
    e[j] = Complex(1.0, 0.0);
    T.col(j) = apply(e, ApplyMode::Normal);
    e[j] = Complex(0.0, 0.0);
  }
  return T;
}

}  // namespace helmwave
