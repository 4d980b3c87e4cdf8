#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "helmwave/hierarchy.hpp"
#include "helmwave/linalg.hpp"

namespace helmwave {

/// Action of a local matrix inverse, exact or approximate. The adjoint mode
/// must be the exact Hermitian transpose of the forward map, whatever the
/// forward map's own accuracy.
class LocalSolver {
 public:
  virtual ~LocalSolver() = default;
  virtual Index dim() const = 0;

  Vector solve(const Vector& b, ApplyMode mode = ApplyMode::Normal) const {
    return do_solve(b, mode);
  }
  DenseMatrix solve_batch(const DenseMatrix& B, ApplyMode mode = ApplyMode::Normal) const;

 private:
  virtual Vector do_solve(const Vector& b, ApplyMode mode) const = 0;
};

/// Sparse LU of the local impedance matrix.
class ExactSolver final : public LocalSolver {
 public:
  explicit ExactSolver(const SparseMatrix& a) : fact_(a) {}
  Index dim() const override { return fact_.rows(); }

 private:
  Vector do_solve(const Vector& b, ApplyMode mode) const override { return fact_.solve(b, mode); }
  SparseFactorization fact_;
};

/// The interface map of a subdomain: Robin data g on the artificial boundary
/// is solved locally, the owned part of the solution is extended, and each
/// neighbor reads back the Robin residual rows it keeps. Forward output
/// stacks the neighbor blocks in ascending target order; pairs with no kept
/// rows are dropped.
class InterfaceOperator final : public LinearOperator {
 public:
  InterfaceOperator(const Hierarchy& h, int uid, const LocalSolver& solver);

  Index rows() const override { return rows_; }
  Index cols() const override { return node().boundary_dim(); }
  Vector apply(const Vector& x, ApplyMode mode = ApplyMode::Normal) const override;

  int uid() const { return uid_; }
  const std::vector<NeighborTraceMap>& blocks() const { return blocks_; }

 private:
  const HierarchyNode& node() const { return h_->node(uid_); }

  const Hierarchy* h_;
  int uid_;
  const LocalSolver* solver_;
  std::vector<NeighborTraceMap> blocks_;
  Index rows_ = 0;
  Index parent_dim_ = 0;
};

struct RsvdResult {
  DenseMatrix V;     // input-dim x kept, orthonormal right singular vectors
  RealVector sigma;  // kept values, descending
  Index samples = 0;         // columns drawn: n_c + oversampling, clamped to the input dim
  bool rank_collapsed = false;  // orthogonalization dropped sample columns
};

/// Randomized SVD with zero power iterations: one forward batch on a keyed
/// complex Gaussian block, orthogonalization, one adjoint batch, small SVD.
RsvdResult rsvd(const LinearOperator& op, Index n_c, Index oversampling, std::uint64_t seed,
                std::uint64_t key);

/// Coarse basis over one parent's node set, blocks C_i = P_i S_i(B_i^T V_i)
/// per child, with the Galerkin matrix A_c = C^H A C factorized densely.
class CoarseSpace {
 public:
  struct ChildModes {
    int uid = -1;
    Index modes = 0;
    bool rank_collapsed = false;
  };

  CoarseSpace() = default;

  static CoarseSpace build(const Hierarchy& h, int parent_uid,
                           const std::vector<int>& child_uids,
                           const std::vector<const LocalSolver*>& child_solvers,
                           const SparseMatrix& a_parent, Index n_c, Index oversampling,
                           std::uint64_t seed);

  Index dim() const { return dim_; }
  Index columns() const { return cols_; }
  bool empty() const { return cols_ == 0; }

  /// e = C A_c^{-1} C^H r; adjoint mode solves with A_c^H instead.
  Vector correction(const Vector& r, ApplyMode mode = ApplyMode::Normal) const;

  const SparseMatrix& basis() const { return basis_; }
  const DenseMatrix& galerkin_matrix() const { return galerkin_; }
  const std::vector<ChildModes>& child_modes() const { return modes_; }

 private:
  SparseMatrix basis_;    // dim x cols, column support = owned region of the child
  DenseMatrix galerkin_;  // A_c
  std::unique_ptr<DenseFactorization> fact_;
  Index dim_ = 0;
  Index cols_ = 0;
  std::vector<ChildModes> modes_;
};

}  // namespace helmwave
