#pragma once

#include <complex>
#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace helmwave {

using Complex = std::complex<double>;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using DenseMatrix = Eigen::MatrixXcd;
using SparseMatrix = Eigen::SparseMatrix<Complex>;
using Triplet = Eigen::Triplet<Complex>;
using Index = Eigen::Index;

/// How an operator or factorization is applied.
enum class ApplyMode { Normal, Transpose, Adjoint };

inline bool is_finite(const Complex& z) {
  return std::isfinite(z.real()) && std::isfinite(z.imag());
}

inline bool is_finite(const Vector& v) {
  for (Index i = 0; i < v.size(); ++i)
    if (!is_finite(v[i])) return false;
  return true;
}

inline bool is_finite(const SparseMatrix& A) {
  for (int k = 0; k < A.outerSize(); ++k)
    for (SparseMatrix::InnerIterator it(A, k); it; ++it)
      if (!is_finite(it.value())) return false;
  return true;
}

}  // namespace helmwave
