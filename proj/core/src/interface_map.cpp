#include "helmwave/interface_map.hpp"

#include <algorithm>
#include <stdexcept>

#include "helmwave/rng.hpp"

namespace helmwave {

DenseMatrix LocalSolver::solve_batch(const DenseMatrix& B, ApplyMode mode) const {
  DenseMatrix X(B.rows(), B.cols());
  for (Index j = 0; j < B.cols(); ++j) X.col(j) = do_solve(B.col(j), mode);
  return X;
}

InterfaceOperator::InterfaceOperator(const Hierarchy& h, int uid, const LocalSolver& solver)
    : h_(&h), uid_(uid), solver_(&solver) {
  const HierarchyNode& n = h.node(uid);
  if (n.parent < 0)
    throw std::invalid_argument("InterfaceOperator: the root has no artificial boundary");
  if (solver.dim() != n.extended_dim())
    throw std::invalid_argument("InterfaceOperator: solver dimension mismatch");
  parent_dim_ = h.node(n.parent).extended_box.node_count();
  for (int j : n.neighbors) {
    NeighborTraceMap map = build_neighbor_trace(h, uid, j);
    if (map.kept_local.empty()) continue;
    rows_ += static_cast<Index>(map.kept_local.size());
    blocks_.push_back(std::move(map));
  }
}

Vector InterfaceOperator::apply(const Vector& x, ApplyMode mode) const {
  if (mode == ApplyMode::Transpose)
    throw std::invalid_argument("InterfaceOperator: transpose mode unsupported");
  const HierarchyNode& n = node();

  if (mode == ApplyMode::Normal) {
    if (x.size() != cols()) throw std::invalid_argument("InterfaceOperator: dimension mismatch");
    const Vector u = solver_->solve(boundary_prolong(n, x), ApplyMode::Normal);
    Vector parent = Vector::Zero(parent_dim_);
    prolong_add(n, u, parent);
    Vector out(rows_);
    Index at = 0;
    for (const NeighborTraceMap& map : blocks_) {
      const HierarchyNode& tgt = h_->node(map.target);
      const Vector t = spmv(tgt.local_matrix, restrict_to(tgt, parent));
      for (int local : map.kept_local) out[at++] = t[local];
    }
    return out;
  }

  if (x.size() != rows_) throw std::invalid_argument("InterfaceOperator: dimension mismatch");
  Vector parent = Vector::Zero(parent_dim_);
  Index at = 0;
  for (const NeighborTraceMap& map : blocks_) {
    const HierarchyNode& tgt = h_->node(map.target);
    Vector t = Vector::Zero(tgt.extended_dim());
    for (int local : map.kept_local) t[local] = x[at++];
    restrict_transpose_add(tgt, spmv(tgt.local_matrix, t, ApplyMode::Adjoint), parent);
  }
  const Vector u = solver_->solve(prolong_transpose(n, parent), ApplyMode::Adjoint);
  return boundary_restrict(n, u);
}

RsvdResult rsvd(const LinearOperator& op, Index n_c, Index oversampling, std::uint64_t seed,
                std::uint64_t key) {
  RsvdResult result;
  const Index in_dim = op.cols();
  if (n_c <= 0 || in_dim == 0 || op.rows() == 0) {
    result.V = DenseMatrix(in_dim, 0);
    result.sigma = RealVector(0);
    return result;
  }
  const Index p = std::min(n_c + oversampling, in_dim);
  result.samples = p;

  const DenseMatrix G = GaussianStream(seed, key).matrix(in_dim, p);
  const DenseMatrix Y = op.apply_batch(G, ApplyMode::Normal);
  Index q = 0;
  const DenseMatrix Q = thin_qr(Y, &q);
  result.rank_collapsed = q < std::min(p, Y.rows());
  if (q == 0) {
    result.V = DenseMatrix(in_dim, 0);
    result.sigma = RealVector(0);
    return result;
  }
  const DenseMatrix Z = op.apply_batch(Q, ApplyMode::Adjoint);  // in_dim x q
  const Svd svd = small_svd(Z.adjoint());                       // Q^H T = U S V^H
  const Index kept = std::min(n_c, svd.sigma.size());
  result.V = svd.V.leftCols(kept);
  result.sigma = svd.sigma.head(kept);
  return result;
}

CoarseSpace CoarseSpace::build(const Hierarchy& h, int parent_uid,
                               const std::vector<int>& child_uids,
                               const std::vector<const LocalSolver*>& child_solvers,
                               const SparseMatrix& a_parent, Index n_c, Index oversampling,
                               std::uint64_t seed) {
  if (child_uids.size() != child_solvers.size())
    throw std::invalid_argument("CoarseSpace::build: solver list mismatch");
  CoarseSpace cs;
  cs.dim_ = h.node(parent_uid).extended_box.node_count();
  if (a_parent.rows() != cs.dim_)
    throw std::invalid_argument("CoarseSpace::build: parent matrix dimension mismatch");

  std::vector<Triplet> trips;
  Index col_base = 0;
  for (std::size_t idx = 0; idx < child_uids.size(); ++idx) {
    const int uid = child_uids[idx];
    const HierarchyNode& n = h.node(uid);
    ChildModes cm;
    cm.uid = uid;
    if (n_c > 0 && n.boundary_dim() > 0) {
      const InterfaceOperator op(h, uid, *child_solvers[idx]);
      if (op.rows() > 0) {
        const RsvdResult r = rsvd(op, n_c, oversampling, seed, stream_key::rsvd(uid));
        cm.modes = r.V.cols();
        cm.rank_collapsed = r.rank_collapsed;
        if (cm.modes > 0) {
          DenseMatrix bv(n.extended_dim(), cm.modes);
          for (Index c = 0; c < cm.modes; ++c) bv.col(c) = boundary_prolong(n, r.V.col(c));
          const DenseMatrix w = child_solvers[idx]->solve_batch(bv, ApplyMode::Normal);
          for (Index c = 0; c < cm.modes; ++c)
            for (std::size_t p = 0; p < n.extended_nodes.size(); ++p)
              if (n.owned_mask[p])
                trips.emplace_back(n.extended_nodes[p], col_base + c,
                                   w(static_cast<Index>(p), c));
          col_base += cm.modes;
        }
      }
    }
    cs.modes_.push_back(cm);
  }

  cs.cols_ = col_base;
  cs.basis_.resize(cs.dim_, cs.cols_);
  cs.basis_.setFromTriplets(trips.begin(), trips.end());
  cs.basis_.makeCompressed();
  if (cs.cols_ > 0) {
    const SparseMatrix ac_sparse = SparseMatrix(cs.basis_.adjoint()) * (a_parent * cs.basis_);
    cs.galerkin_ = DenseMatrix(ac_sparse);
    try {
      cs.fact_ = std::make_unique<DenseFactorization>(cs.galerkin_);
    } catch (const std::runtime_error&) {
      throw std::runtime_error(
          "CoarseSpace: Galerkin matrix is singular; coarse modes are redundant (parent " +
          std::to_string(parent_uid) + ")");
    }
  }
  return cs;
}

Vector CoarseSpace::correction(const Vector& r, ApplyMode mode) const {
  if (mode == ApplyMode::Transpose)
    throw std::invalid_argument("CoarseSpace: transpose mode unsupported");
  if (r.size() != dim_) throw std::invalid_argument("CoarseSpace: dimension mismatch");
  if (empty()) return Vector::Zero(dim_);
  const Vector y = basis_.adjoint() * r;
  return basis_ * fact_->solve(y, mode);
}

}  // namespace helmwave
