#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "helmwave/assemble.hpp"
#include "helmwave/gmres.hpp"
#include "helmwave/hierarchy.hpp"
#include "helmwave/interface_map.hpp"

namespace helmwave {

/// Per-level method knobs. Index j refers to the context whose subdomains sit
/// at tree level j+1: n_c[j] coarse modes per such subdomain, n_i[j] sweep
/// steps when that context acts as a solver (the root context, j = 0, is the
/// outer preconditioner).
struct MethodParams {
  std::vector<int> n_c;
  std::vector<int> n_i;
  double tolerance = 1e-5;
  int max_iterations = 200;
  std::uint64_t seed = 1;
  int oversampling = 5;

  int nc_at(int level) const {
    return level < static_cast<int>(n_c.size()) ? n_c[level] : 0;
  }
  int ni_at(int level) const {
    return level < static_cast<int>(n_i.size()) ? std::max(1, n_i[level]) : 1;
  }
  /// Doubling rule: the finest-level count doubles at each coarser level.
  static std::vector<int> doubled_counts(int finest, int levels);
};

/// One level of the iteration: the level's matrix, the sibling subdomains
/// with their solvers, and an optional coarse space.
struct SchwarzContext {
  const Hierarchy* h = nullptr;
  int parent_uid = 0;
  const SparseMatrix* a = nullptr;
  std::vector<int> sub_uids;
  std::vector<const LocalSolver*> solvers;
  const CoarseSpace* coarse = nullptr;
  int n_steps = 1;

  Index dim() const { return a->rows(); }
  bool has_coarse() const { return coarse != nullptr && !coarse->empty(); }
};

/// Sum of P_i S_i(R_i r) over the context's subdomains.
Vector ras_apply(const SchwarzContext& ctx, const Vector& r);
Vector ras_apply_adjoint(const SchwarzContext& ctx, const Vector& r);

/// One sweep plus coarse correction:
///   u~ = u + ras(f - A u);  u+ = u~ + C A_c^{-1} C^H (f - A u~).
Vector schwarz_step(const SchwarzContext& ctx, const Vector& u, const Vector& f);

/// n_steps sweeps on A e = r from e = 0; linear in r by construction.
Vector precond_apply(const SchwarzContext& ctx, const Vector& r);
/// Exact Hermitian transpose of precond_apply.
Vector precond_apply_adjoint(const SchwarzContext& ctx, const Vector& r);

/// Approximate local solve realized by the child-level iteration; its adjoint
/// is the Hermitian transpose of the (fixed, linear) forward operator.
class SchwarzSolver final : public LocalSolver {
 public:
  explicit SchwarzSolver(const SchwarzContext& ctx) : ctx_(&ctx) {}
  Index dim() const override { return ctx_->dim(); }

 private:
  Vector do_solve(const Vector& b, ApplyMode mode) const override {
    return mode == ApplyMode::Adjoint ? precond_apply_adjoint(*ctx_, b)
                                      : precond_apply(*ctx_, b);
  }
  const SchwarzContext* ctx_;
};

/// Owns every level's contexts, local solvers, and coarse spaces, built
/// bottom-up so each coarse basis samples through the children's own solvers.
class HierarchicalPreconditioner {
 public:
  HierarchicalPreconditioner(const Hierarchy& h, const MethodParams& params);

  Vector apply(const Vector& r) const { return precond_apply(root_context(), r); }
  Vector apply_adjoint(const Vector& r) const {
    return precond_apply_adjoint(root_context(), r);
  }

  const SchwarzContext& root_context() const { return contexts_.at(0); }
  const SchwarzContext& context(int parent_uid) const { return contexts_.at(parent_uid); }
  const CoarseSpace* coarse_space(int parent_uid) const;
  Index coarse_dim_total() const;

 private:
  const Hierarchy* h_;
  MethodParams params_;
  std::map<int, ExactSolver> leaf_solvers_;
  std::map<int, SchwarzSolver> node_solvers_;
  std::map<int, SchwarzContext> contexts_;
  std::map<int, CoarseSpace> coarse_;
};

struct SolveReport {
  Vector x;
  int iterations = 0;
  std::vector<double> residual_history;
  double final_relres = 0.0;
  bool converged = false;
  Index coarse_dim_total = 0;
  double setup_seconds = 0.0;
  double solve_seconds = 0.0;
};

/// Right-preconditioned GMRES on the assembled problem, zero initial guess,
/// true-residual stopping at params.tolerance.
SolveReport solve(const Problem& problem, const Hierarchy& h, const MethodParams& params);

}  // namespace helmwave
