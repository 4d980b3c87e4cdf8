#include "helmwave/schwarz.hpp"

#include <chrono>
#include <stdexcept>

namespace helmwave {

std::vector<int> MethodParams::doubled_counts(int finest, int levels) {
  std::vector<int> counts(levels);
  for (int j = 0; j < levels; ++j) counts[j] = finest << (levels - 1 - j);
  return counts;
}

Vector ras_apply(const SchwarzContext& ctx, const Vector& r) {
  Vector out = Vector::Zero(ctx.dim());
  for (std::size_t idx = 0; idx < ctx.sub_uids.size(); ++idx) {
    const HierarchyNode& n = ctx.h->node(ctx.sub_uids[idx]);
    const Vector u = ctx.solvers[idx]->solve(restrict_to(n, r), ApplyMode::Normal);
    prolong_add(n, u, out);
  }
  return out;
}

Vector ras_apply_adjoint(const SchwarzContext& ctx, const Vector& r) {
  Vector out = Vector::Zero(ctx.dim());
  for (std::size_t idx = 0; idx < ctx.sub_uids.size(); ++idx) {
    const HierarchyNode& n = ctx.h->node(ctx.sub_uids[idx]);
    const Vector u = ctx.solvers[idx]->solve(prolong_transpose(n, r), ApplyMode::Adjoint);
    restrict_transpose_add(n, u, out);
  }
  return out;
}

Vector schwarz_step(const SchwarzContext& ctx, const Vector& u, const Vector& f) {
  Vector next = u + ras_apply(ctx, f - spmv(*ctx.a, u));
  if (ctx.has_coarse()) next += ctx.coarse->correction(f - spmv(*ctx.a, next));
  return next;
}

Vector precond_apply(const SchwarzContext& ctx, const Vector& r) {
  Vector e = Vector::Zero(ctx.dim());
  for (int t = 0; t < ctx.n_steps; ++t) e = schwarz_step(ctx, e, r);
  return e;
}

Vector precond_apply_adjoint(const SchwarzContext& ctx, const Vector& r) {
  // One step from zero is N = (I - Gc A) M_R + Gc with M_R the sweep and Gc
  // the coarse correction; n steps sum to M = sum_t T^t N, T = (I - Gc A)(I - M_R A).
  // The adjoint evaluates M^H = N^H sum_t (T^H)^t by Horner's scheme.
  const auto a_adj = [&](const Vector& x) { return spmv(*ctx.a, x, ApplyMode::Adjoint); };
  // Explicit return type: the subtraction is an expression referencing u.
  const auto t_adj = [&](const Vector& w) -> Vector {
    Vector u = w;
    if (ctx.has_coarse()) u -= a_adj(ctx.coarse->correction(w, ApplyMode::Adjoint));
    return u - a_adj(ras_apply_adjoint(ctx, u));
  };
  Vector w = r;
  for (int t = 1; t < ctx.n_steps; ++t) w = r + t_adj(w);
  if (!ctx.has_coarse()) return ras_apply_adjoint(ctx, w);
  const Vector z = ctx.coarse->correction(w, ApplyMode::Adjoint);
  return ras_apply_adjoint(ctx, w - a_adj(z)) + z;
}

HierarchicalPreconditioner::HierarchicalPreconditioner(const Hierarchy& h,
                                                       const MethodParams& params)
    : h_(&h), params_(params) {
  for (int lev = h.levels() - 1; lev >= 0; --lev) {
    for (int uid : h.level_uids[lev]) {
      const HierarchyNode& parent = h.node(uid);
      SchwarzContext ctx;
      ctx.h = &h;
      ctx.parent_uid = uid;
      ctx.a = &parent.local_matrix;
      ctx.sub_uids = parent.children;
      ctx.n_steps = params_.ni_at(lev);
      for (int child : parent.children) {
        if (h.is_leaf(child)) {
          auto [it, fresh] = leaf_solvers_.try_emplace(child, h.node(child).local_matrix);
          ctx.solvers.push_back(&it->second);
          (void)fresh;
        } else {
          ctx.solvers.push_back(&node_solvers_.at(child));
        }
      }
      auto [cit, ok] = contexts_.try_emplace(uid, std::move(ctx));
      (void)ok;
      SchwarzContext& stored = cit->second;

      const int nc = params_.nc_at(lev);
      if (nc > 0) {
        coarse_.emplace(uid, CoarseSpace::build(h, uid, stored.sub_uids, stored.solvers,
                                                *stored.a, nc, params_.oversampling,
                                                params_.seed));
        stored.coarse = &coarse_.at(uid);
      }
      if (uid != 0) node_solvers_.emplace(uid, SchwarzSolver(stored));
    }
  }
}

const CoarseSpace* HierarchicalPreconditioner::coarse_space(int parent_uid) const {
  const auto it = coarse_.find(parent_uid);
  return it == coarse_.end() ? nullptr : &it->second;
}

Index HierarchicalPreconditioner::coarse_dim_total() const {
  Index total = 0;
  for (const auto& [uid, cs] : coarse_) total += cs.columns();
  return total;
}

SolveReport solve(const Problem& problem, const Hierarchy& h, const MethodParams& params) {
  using clock = std::chrono::steady_clock;
  if (problem.A.rows() != h.mesh.node_count())
    throw std::invalid_argument("solve: problem and hierarchy disagree on the mesh");

  const auto t0 = clock::now();
  const HierarchicalPreconditioner pre(h, params);
  const auto t1 = clock::now();

  GmresOptions opts;
  opts.tolerance = params.tolerance;
  opts.max_iterations = params.max_iterations;
  const GmresResult g =
      gmres([&](const Vector& x) { return problem.A * x; },
            [&](const Vector& r) { return pre.apply(r); }, problem.rhs, opts);
  const auto t2 = clock::now();

  SolveReport report;
  report.x = g.x;
  report.iterations = g.iterations;
  report.residual_history = g.residual_history;
  report.final_relres = g.final_relres;
  report.converged = g.converged;
  report.coarse_dim_total = pre.coarse_dim_total();
  report.setup_seconds = std::chrono::duration<double>(t1 - t0).count();
  report.solve_seconds = std::chrono::duration<double>(t2 - t1).count();
  return report;
}

}  // namespace helmwave
