#include <doctest.h>

#include <cmath>
#include <string>
#include <vector>

#include "helmwave/interface_map.hpp"
#include "helmwave/rng.hpp"
#include "oracles.hpp"

using namespace helmwave;

namespace {

Hierarchy make(const std::string& levels, int n, double k) {
  const LevelSpec spec = LevelSpec::parse(levels);
  const RectMesh mesh(spec.total_mx() * n, spec.total_my() * n);
  return build_hierarchy(mesh, WavenumberField::constant(k), spec);
}

}  // namespace

TEST_SUITE("interface-map") {
  TEST_CASE("the exact local solver inverts in forward and adjoint mode") {
    const Hierarchy h = make("2x2", 4, 8.0);
    const SparseMatrix& a = h.node(1).local_matrix;
    const ExactSolver solver(a);
    CHECK(solver.dim() == a.rows());
    const Vector b = GaussianStream(40, 0xD0).vector(a.rows());
    CHECK((spmv(a, solver.solve(b)) - b).norm() <= 1e-11 * b.norm());
    const Vector y = GaussianStream(41, 0xD0).vector(a.rows());
    const Complex lhs = solver.solve(b).dot(y);
    const Complex rhs = b.dot(solver.solve(y, ApplyMode::Adjoint));
    CHECK(std::abs(lhs - rhs) <= 1e-12 * b.norm() * y.norm());
  }

  TEST_CASE("the interface map matches its dense composition") {
    const Hierarchy h = make("2x2", 4, 8.0);
    for (int uid = 1; uid <= 4; ++uid) {
      CAPTURE(uid);
      const ExactSolver solver(h.node(uid).local_matrix);
      const InterfaceOperator op(h, uid, solver);
      const DenseMatrix ref = oracle::dense_interface_map(h, uid);
      REQUIRE(op.rows() == ref.rows());
      REQUIRE(op.cols() == ref.cols());
      const DenseMatrix got = op.materialize();
      CHECK((got - ref).norm() <= 1e-12 * ref.norm());
    }
  }

  TEST_CASE("the interface map satisfies the adjoint identity") {
    const Hierarchy h = make("2x2", 4, 8.0);
    const ExactSolver solver(h.node(2).local_matrix);
    const InterfaceOperator op(h, 2, solver);
    const Vector g = GaussianStream(42, 0xD0).vector(op.cols());
    const Vector y = GaussianStream(43, 0xD0).vector(op.rows());
    const Complex lhs = op.apply(g).dot(y);
    const Complex rhs = g.dot(op.apply(y, ApplyMode::Adjoint));
    CHECK(std::abs(lhs - rhs) <= 1e-12 * g.norm() * y.norm());
    CHECK_THROWS_AS(op.apply(g, ApplyMode::Transpose), std::invalid_argument);
  }

  TEST_CASE("the root has no interface map") {
    const Hierarchy h = make("2x2", 4, 8.0);
    const ExactSolver solver(h.node(0).local_matrix);
    CHECK_THROWS_AS((InterfaceOperator{h, 0, solver}), std::invalid_argument);
  }

  TEST_CASE("rsvd recovers a known diagonal operator") {
    DenseMatrix d = DenseMatrix::Zero(4, 4);
    d(0, 0) = 3.0;
    d(1, 1) = 2.0;
    d(2, 2) = 1.0;
    const oracle::DenseOp op(d);
    const RsvdResult res = rsvd(op, 2, 2, 7, 0x1);
    REQUIRE(res.sigma.size() == 2);
    CHECK(res.sigma[0] == doctest::Approx(3.0).epsilon(1e-10));
    CHECK(res.sigma[1] == doctest::Approx(2.0).epsilon(1e-10));
    REQUIRE(res.V.cols() == 2);
    CHECK(std::abs(res.V.col(0)[0]) == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(std::abs(res.V.col(1)[1]) == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(res.samples == 4);  // clamped to the input dimension
  }

  TEST_CASE("rsvd matches the full svd when sampling covers the input space") {
    const Hierarchy h = make("2x2", 4, 8.0);
    const ExactSolver solver(h.node(1).local_matrix);
    const InterfaceOperator op(h, 1, solver);
    const Index bdim = op.cols();
    const Svd full = small_svd(op.materialize());
    const RsvdResult res = rsvd(op, bdim, 5, 11, 0x2);
    REQUIRE(res.samples == bdim);
    // The map is numerically rank deficient (some boundary inputs produce no
    // kept-row response), so the sketch may return fewer modes than columns.
    REQUIRE(res.sigma.size() >= 1);
    REQUIRE(res.sigma.size() <= std::min(op.rows(), bdim));
    const Index kept = res.sigma.size();
    if (kept < bdim) CHECK(res.rank_collapsed);
    CHECK((res.sigma - full.sigma.head(kept)).norm() <= 1e-8);
    // Everything dropped was numerically zero; no significant mode is lost.
    if (kept < full.sigma.size())
      CHECK(full.sigma[kept] <= 1e-10 * full.sigma[0]);
    CHECK((res.V.adjoint() * res.V - DenseMatrix::Identity(kept, kept)).norm() <= 1e-10);
    // The recovered directions reproduce their singular values through the map.
    for (Index j = 0; j < kept; ++j)
      CHECK(std::abs(op.apply(res.V.col(j)).norm() - res.sigma[j]) <=
            1e-8 + 1e-6 * res.sigma[j]);
  }

  TEST_CASE("rsvd draws are deterministic in seed and key") {
    const Hierarchy h = make("2x2", 4, 8.0);
    const ExactSolver solver(h.node(1).local_matrix);
    const InterfaceOperator op(h, 1, solver);
    const RsvdResult a = rsvd(op, 3, 8, 11, 0x2);
    const RsvdResult b = rsvd(op, 3, 8, 11, 0x2);
    CHECK((a.V - b.V).norm() == 0.0);
    CHECK((a.sigma - b.sigma).norm() == 0.0);
    // With sampling covering the whole input space the estimate is exact, so
    // a different seed reproduces the same values.
    const RsvdResult c = rsvd(op, 3, 8, 12, 0x2);
    CHECK((a.sigma - c.sigma).norm() <= 1e-8);
  }

  TEST_CASE("rsvd reports rank collapse") {
    DenseMatrix d = GaussianStream(44, 0xD1).matrix(6, 1) * GaussianStream(45, 0xD1).matrix(1, 6);
    const oracle::DenseOp op(d);
    const RsvdResult res = rsvd(op, 3, 2, 9, 0x3);
    CHECK(res.rank_collapsed);
    CHECK(res.V.cols() == 1);
    const Svd full = small_svd(d);
    CHECK(res.sigma[0] == doctest::Approx(full.sigma[0]).epsilon(1e-9));
  }

  TEST_CASE("the coarse galerkin matrix matches the dense triple product") {
    const Hierarchy h = make("2x2", 4, 8.0);
    std::vector<ExactSolver> solvers;
    solvers.reserve(4);
    std::vector<const LocalSolver*> ptrs;
    for (int uid = 1; uid <= 4; ++uid) {
      solvers.emplace_back(h.node(uid).local_matrix);
      ptrs.push_back(&solvers.back());
    }
    const CoarseSpace cs =
        CoarseSpace::build(h, 0, {1, 2, 3, 4}, ptrs, h.node(0).local_matrix, 2, 5, 1);
    CHECK(cs.columns() == 8);
    CHECK(cs.dim() == h.node(0).extended_dim());
    CHECK(cs.child_modes().size() == 4);
    const DenseMatrix c = DenseMatrix(cs.basis());
    const DenseMatrix a = oracle::dense(h.node(0).local_matrix);
    CHECK((c.adjoint() * a * c - cs.galerkin_matrix()).norm() <=
          1e-12 * cs.galerkin_matrix().norm());
  }

  TEST_CASE("coarse basis columns are supported on and harmonic in their subdomain") {
    const Hierarchy h = make("2x2", 8, 16.0);
    std::vector<ExactSolver> solvers;
    solvers.reserve(4);
    std::vector<const LocalSolver*> ptrs;
    for (int uid = 1; uid <= 4; ++uid) {
      solvers.emplace_back(h.node(uid).local_matrix);
      ptrs.push_back(&solvers.back());
    }
    const SparseMatrix& a = h.node(0).local_matrix;
    const CoarseSpace cs = CoarseSpace::build(h, 0, {1, 2, 3, 4}, ptrs, a, 2, 5, 1);
    const DenseMatrix c = DenseMatrix(cs.basis());
    Index col = 0;
    for (const CoarseSpace::ChildModes& cm : cs.child_modes()) {
      const HierarchyNode& nd = h.node(cm.uid);
      for (Index m = 0; m < cm.modes; ++m, ++col) {
        const Vector column = c.col(col);
        // Support: only nodes the child owns.
        for (int j = 0; j <= h.mesh.ny; ++j)
          for (int i = 0; i <= h.mesh.nx; ++i)
            if (!nd.owns_node(i, j)) CHECK(std::abs(column[h.mesh.node_index(i, j)]) == 0.0);
        // Harmonicity: zero residual strictly inside the owned region.
        const Vector resid = spmv(a, column);
        double interior = 0.0;
        for (int j = nd.own_j0 + 1; j < nd.own_j1; ++j)
          for (int i = nd.own_i0 + 1; i < nd.own_i1; ++i)
            if (nd.owns_node(i - 1, j - 1) && nd.owns_node(i + 1, j + 1))
              interior += std::norm(resid[h.mesh.node_index(i, j)]);
        CHECK(std::sqrt(interior) <= 1e-10 * column.norm());
      }
    }
    CHECK(col == cs.columns());
  }

  TEST_CASE("coarse corrections are galerkin projections") {
    const Hierarchy h = make("2x2", 4, 8.0);
    std::vector<ExactSolver> solvers;
    solvers.reserve(4);
    std::vector<const LocalSolver*> ptrs;
    for (int uid = 1; uid <= 4; ++uid) {
      solvers.emplace_back(h.node(uid).local_matrix);
      ptrs.push_back(&solvers.back());
    }
    const SparseMatrix& a = h.node(0).local_matrix;
    const CoarseSpace cs = CoarseSpace::build(h, 0, {1, 2, 3, 4}, ptrs, a, 3, 5, 1);
    const Vector r = GaussianStream(46, 0xD2).vector(cs.dim());
    const Vector e = cs.correction(r);
    const DenseMatrix c = DenseMatrix(cs.basis());
    const Vector gap = c.adjoint() * (r - spmv(a, e));
    CHECK(gap.norm() <= 1e-10 * (c.adjoint() * r).norm());

    // The adjoint correction is the Hermitian transpose of the forward one.
    const Vector y = GaussianStream(47, 0xD2).vector(cs.dim());
    const Complex lhs = cs.correction(r).dot(y);
    const Complex rhs = r.dot(cs.correction(y, ApplyMode::Adjoint));
    CHECK(std::abs(lhs - rhs) <= 1e-12 * r.norm() * y.norm());
  }

  TEST_CASE("duplicated coarse blocks are rejected as singular") {
    const Hierarchy h = make("2x2", 4, 8.0);
    const ExactSolver s1(h.node(1).local_matrix);
    const std::vector<const LocalSolver*> ptrs = {&s1, &s1};
    try {
      CoarseSpace::build(h, 0, {1, 1}, ptrs, h.node(0).local_matrix, 2, 5, 1);
      FAIL("expected an exception");
    } catch (const std::runtime_error& e) {
      CHECK(std::string(e.what()).find("singular") != std::string::npos);
    }
  }

  TEST_CASE("an empty coarse space is valid and inert") {
    const Hierarchy h = make("2x2", 4, 8.0);
    const ExactSolver s1(h.node(1).local_matrix);
    std::vector<const LocalSolver*> ptrs(4, &s1);
    const ExactSolver s2(h.node(2).local_matrix);
    const ExactSolver s3(h.node(3).local_matrix);
    const ExactSolver s4(h.node(4).local_matrix);
    ptrs[1] = &s2;
    ptrs[2] = &s3;
    ptrs[3] = &s4;
    const CoarseSpace cs =
        CoarseSpace::build(h, 0, {1, 2, 3, 4}, ptrs, h.node(0).local_matrix, 0, 5, 1);
    CHECK(cs.empty());
    CHECK(cs.columns() == 0);
  }
}
