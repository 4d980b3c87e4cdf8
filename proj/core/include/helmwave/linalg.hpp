#pragma once

#include <memory>

#include "helmwave/types.hpp"

namespace helmwave {

/// Sparse matrix-vector product. Adjoint mode applies the conjugate transpose.
Vector spmv(const SparseMatrix& A, const Vector& x, ApplyMode mode = ApplyMode::Normal);

/// Sparse LU with a fill-reducing (COLAMD) ordering. Solves A x = b and,
/// in adjoint mode, A^H x = b.
class SparseFactorization {
 public:
  explicit SparseFactorization(const SparseMatrix& A);
  ~SparseFactorization();
  SparseFactorization(SparseFactorization&&) noexcept;
  SparseFactorization& operator=(SparseFactorization&&) noexcept;

  Vector solve(const Vector& b, ApplyMode mode = ApplyMode::Normal) const;
  DenseMatrix solve(const DenseMatrix& B, ApplyMode mode = ApplyMode::Normal) const;
  Index rows() const { return n_; }

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
  Index n_ = 0;
};

/// Orthonormal basis of the column span of Y. Dependent columns are dropped;
/// *reduced_width reports the basis width actually kept.
DenseMatrix thin_qr(const DenseMatrix& Y, Index* reduced_width = nullptr);

struct Svd {
  DenseMatrix U;
  RealVector sigma;  // descending
  DenseMatrix V;
};

/// Thin SVD of a small dense matrix: B = U diag(sigma) V^H.
Svd small_svd(const DenseMatrix& B);

/// Dense LU with partial pivoting; holds the coarse Galerkin matrices.
class DenseFactorization {
 public:
  explicit DenseFactorization(const DenseMatrix& A);
  ~DenseFactorization();
  DenseFactorization(DenseFactorization&&) noexcept;
  DenseFactorization& operator=(DenseFactorization&&) noexcept;

  Vector solve(const Vector& b, ApplyMode mode = ApplyMode::Normal) const;
  Index rows() const { return n_; }

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
  Index n_ = 0;
};

/// A rectangular linear map with a forward and an adjoint application.
class LinearOperator {
 public:
  virtual ~LinearOperator() = default;
  virtual Index rows() const = 0;
  virtual Index cols() const = 0;
  virtual Vector apply(const Vector& x, ApplyMode mode = ApplyMode::Normal) const = 0;

  /// Column-by-column application; operators with cheaper batch paths override.
  virtual DenseMatrix apply_batch(const DenseMatrix& X, ApplyMode mode = ApplyMode::Normal) const;

  /// Applies the map to unit vectors. Used for desk-scale spectra and oracles.
  DenseMatrix materialize() const;
};

}  // namespace helmwave
