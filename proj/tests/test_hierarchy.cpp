#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "helmwave/hierarchy.hpp"
#include "helmwave/rng.hpp"
#include "oracles.hpp"

using namespace helmwave;

namespace {

Hierarchy make(const std::string& levels, int n, double k) {
  const LevelSpec spec = LevelSpec::parse(levels);
  const RectMesh mesh(spec.total_mx() * n, spec.total_my() * n);
  return build_hierarchy(mesh, WavenumberField::constant(k), spec);
}

void check_partition_of_unity(const Hierarchy& h) {
  for (const HierarchyNode& par : h.nodes) {
    if (par.children.empty()) continue;
    const Vector x = GaussianStream(100 + par.uid, 0xC0).vector(par.extended_dim());
    Vector sum = Vector::Zero(par.extended_dim());
    for (int uid : par.children) prolong_add(h.node(uid), restrict_to(h.node(uid), x), sum);
    CHECK((sum - x).norm() == 0.0);
  }
}

std::vector<ElementBox> sorted_boxes(const Hierarchy& h, const std::vector<int>& uids,
                                     bool extended) {
  std::vector<ElementBox> out;
  for (int uid : uids)
    out.push_back(extended ? h.node(uid).extended_box : h.node(uid).owned_box);
  std::sort(out.begin(), out.end(), [](const ElementBox& a, const ElementBox& b) {
    return std::tie(a.j0, a.i0, a.j1, a.i1) < std::tie(b.j0, b.i0, b.j1, b.i1);
  });
  return out;
}

}  // namespace

TEST_SUITE("hierarchy") {
  TEST_CASE("level specs parse, print, and validate") {
    const LevelSpec one = LevelSpec::parse("2x2");
    CHECK(one.levels() == 1);
    CHECK(one.tiles[0].mx == 2);
    CHECK(one.tiles[0].my == 2);
    CHECK(one.overlap_elems == 2);

    const LevelSpec three = LevelSpec::parse("4x2,2x2,3x1");
    CHECK(three.levels() == 3);
    CHECK(three.total_mx() == 24);
    CHECK(three.total_my() == 4);
    CHECK(three.to_string() == "4x2,2x2,3x1");
    CHECK(LevelSpec::parse("2x2,2x2").to_string() == "2x2,2x2");

    CHECK_THROWS_AS(LevelSpec::parse(""), std::invalid_argument);
    CHECK_THROWS_AS(LevelSpec::parse("2"), std::invalid_argument);
    CHECK_THROWS_AS(LevelSpec::parse("0x2"), std::invalid_argument);
    CHECK_THROWS_AS(LevelSpec::parse("ax2"), std::invalid_argument);
    CHECK_THROWS_AS(LevelSpec::parse("2x2,,2x2"), std::invalid_argument);
    CHECK_THROWS_AS(LevelSpec::parse("2x2", 0), std::invalid_argument);
  }

  TEST_CASE("a single subdomain covers the whole domain without interfaces") {
    const Hierarchy h = make("1x1", 4, 4.0);
    REQUIRE(h.nodes.size() == 2);
    const HierarchyNode& c = h.node(1);
    CHECK(c.owned_box == ElementBox{0, 4, 0, 4});
    CHECK(c.extended_box == c.owned_box);
    CHECK(c.boundary_dim() == 0);
    CHECK(c.neighbors.empty());
    CHECK((oracle::dense(c.local_matrix) - oracle::dense(h.node(0).local_matrix)).norm() == 0.0);
    check_partition_of_unity(h);
  }

  TEST_CASE("a 2x2 split produces the expected boxes and interfaces") {
    const Hierarchy h = make("2x2", 4, 8.0);
    REQUIRE(h.nodes.size() == 5);
    CHECK(h.node(1).owned_box == ElementBox{0, 4, 0, 4});
    CHECK(h.node(2).owned_box == ElementBox{4, 8, 0, 4});
    CHECK(h.node(3).owned_box == ElementBox{0, 4, 4, 8});
    CHECK(h.node(4).owned_box == ElementBox{4, 8, 4, 8});
    CHECK(h.node(1).extended_box == ElementBox{0, 6, 0, 6});
    CHECK(h.node(2).extended_box == ElementBox{2, 8, 0, 6});
    CHECK(h.node(3).extended_box == ElementBox{0, 6, 2, 8});
    CHECK(h.node(4).extended_box == ElementBox{2, 8, 2, 8});
    for (int uid = 1; uid <= 4; ++uid) {
      CHECK(h.node(uid).extended_dim() == 49);
      CHECK(h.node(uid).boundary_dim() == 11);
      CHECK(h.node(uid).neighbors.size() == 3);
    }

    // The artificial boundary of the first child: the two extended sides that
    // cut through the domain, minus the nodes on the physical boundary.
    const HierarchyNode& c = h.node(1);
    std::vector<int> expected;
    for (int j = 1; j <= 6; ++j) expected.push_back(c.extended_box.local_node(6, j));
    for (int i = 1; i <= 5; ++i) expected.push_back(c.extended_box.local_node(i, 6));
    std::sort(expected.begin(), expected.end());
    std::vector<int> got = c.artificial_nodes;
    std::sort(got.begin(), got.end());
    CHECK(got == expected);
  }

  TEST_CASE("the partition of unity is exact at every level") {
    check_partition_of_unity(make("2x2", 4, 8.0));
    check_partition_of_unity(make("2x2,2x2", 4, 16.0));
    check_partition_of_unity(make("4x4", 3, 12.0));
  }

  TEST_CASE("every node has exactly one owner, the lowest uid at cut points") {
    const Hierarchy h = make("2x2", 4, 8.0);
    const RectMesh& mesh = h.mesh;
    for (int j = 0; j <= mesh.ny; ++j)
      for (int i = 0; i <= mesh.nx; ++i) {
        int owners = 0;
        for (int uid = 1; uid <= 4; ++uid)
          if (h.node(uid).owns_node(i, j)) ++owners;
        CHECK(owners == 1);
      }
    // The center node lies on both cuts and belongs to the first child.
    CHECK(h.node(1).owns_node(4, 4));
    CHECK_FALSE(h.node(2).owns_node(4, 4));
    CHECK_FALSE(h.node(3).owns_node(4, 4));
    CHECK_FALSE(h.node(4).owns_node(4, 4));
  }

  TEST_CASE("two-level leaves occupy the same boxes as the flat split") {
    const Hierarchy deep = make("2x2,2x2", 4, 16.0);
    const Hierarchy flat = make("4x4", 4, 16.0);
    REQUIRE(deep.level_uids.size() == 3);
    CHECK(sorted_boxes(deep, deep.level_uids[2], false) ==
          sorted_boxes(flat, flat.level_uids[1], false));
    CHECK(sorted_boxes(deep, deep.level_uids[2], true) ==
          sorted_boxes(flat, flat.level_uids[1], true));
  }

  TEST_CASE("local matrices match the quadrature oracle") {
    const LevelSpec spec = LevelSpec::parse("2x2");
    const RectMesh mesh(8, 8);
    SUBCASE("constant wavenumber") {
      const WavenumberField field = WavenumberField::constant(8.0);
      const Hierarchy h = build_hierarchy(mesh, field, spec);
      for (int uid = 1; uid <= 4; ++uid) {
        const HierarchyNode& nd = h.node(uid);
        const DenseMatrix ref = oracle::assemble_box_quadrature(mesh, nd.extended_box, field);
        CHECK((oracle::dense(nd.local_matrix) - ref).norm() <= 1e-13 * ref.norm());
      }
    }
    SUBCASE("layered wavenumber") {
      const WavenumberField field = WavenumberField::layered(8.0, 5.0, 4);
      const Hierarchy h = build_hierarchy(mesh, field, spec);
      for (int uid = 1; uid <= 4; ++uid) {
        const HierarchyNode& nd = h.node(uid);
        const DenseMatrix ref = oracle::assemble_box_quadrature(mesh, nd.extended_box, field);
        CHECK((oracle::dense(nd.local_matrix) - ref).norm() <= 1e-13 * ref.norm());
      }
    }
  }

  TEST_CASE("interior rows of a local matrix equal the global rows") {
    const Hierarchy h = make("2x2", 4, 8.0);
    const HierarchyNode& nd = h.node(1);
    const DenseMatrix dl = oracle::dense(nd.local_matrix);
    const DenseMatrix dg = oracle::dense(h.node(0).local_matrix);
    std::vector<char> in_ext(h.mesh.node_count(), 0);
    for (int g : nd.extended_nodes) in_ext[g] = 1;
    for (int j = 1; j < 6; ++j)
      for (int i = 1; i < 6; ++i) {
        const Index p = nd.extended_box.local_node(i, j);
        const Index gp = h.mesh.node_index(i, j);
        for (Index q = 0; q < nd.extended_dim(); ++q)
          CHECK(std::abs(dl(p, q) - dg(gp, nd.extended_nodes[q])) <= 1e-14);
        double outside = 0.0;
        for (Index gq = 0; gq < dg.cols(); ++gq)
          if (!in_ext[gq]) outside += std::abs(dg(gp, gq));
        CHECK(outside == 0.0);
      }
  }

  TEST_CASE("artificial rows differ by the impedance term and the missing exterior") {
    const RectMesh mesh(8, 8);
    const WavenumberField field = WavenumberField::constant(8.0);
    const Hierarchy h = build_hierarchy(mesh, field, LevelSpec::parse("2x2"));
    const HierarchyNode& nd = h.node(1);
    const DenseMatrix dl = oracle::dense(nd.local_matrix);
    const DenseMatrix dg = oracle::dense(h.node(0).local_matrix);

    // Artificial node (6, 3): global row minus embedded local row must equal
    // the two exterior element rows plus i*k times the artificial edge mass.
    const int pi = 6, pj = 3;
    Vector diff = dg.row(mesh.node_index(pi, pj)).transpose();
    const Index p = nd.extended_box.local_node(pi, pj);
    for (Index q = 0; q < nd.extended_dim(); ++q) diff[nd.extended_nodes[q]] -= dl(p, q);

    Vector expected = Vector::Zero(mesh.node_count());
    const Eigen::Matrix4d stiff = oracle::element_stiffness_quadrature(mesh.hx(), mesh.hy());
    const Eigen::Matrix4d mass = oracle::element_mass_quadrature(mesh.hx(), mesh.hy());
    for (int ej : {2, 3}) {
      const int ei = 6;
      const double kc = field.at((ei + 0.5) * mesh.hx(), (ej + 0.5) * mesh.hy());
      const int a = 2 * (pj - ej) + (pi - ei);
      for (int b = 0; b < 4; ++b) {
        const int q = mesh.node_index(ei + (b & 1), ej + ((b >> 1) & 1));
        expected[q] += Complex(stiff(a, b) - kc * kc * mass(a, b), 0.0);
      }
    }
    const Eigen::Matrix2d em = oracle::edge_mass_quadrature(mesh.hy());
    for (int ej : {2, 3}) {
      const double km = field.at(6 * mesh.hx(), (ej + 0.5) * mesh.hy());
      const int nodes[2] = {mesh.node_index(6, ej), mesh.node_index(6, ej + 1)};
      const int a = (pj == ej) ? 0 : 1;
      for (int b = 0; b < 2; ++b) expected[nodes[b]] += Complex(0.0, km) * em(a, b);
    }
    CHECK((diff - expected).norm() <= 1e-12);
  }

  TEST_CASE("neighbor traces keep the rows inside the source's closure") {
    const Hierarchy h = make("2x2", 4, 8.0);
    const NeighborTraceMap map = build_neighbor_trace(h, 1, 2);
    CHECK(map.source == 1);
    CHECK(map.target == 2);
    const ElementBox& tb = h.node(2).extended_box;
    std::vector<int> expected;
    for (int j = 1; j <= 4; ++j) expected.push_back(tb.local_node(2, j));
    std::vector<int> got = map.kept_local;
    std::sort(got.begin(), got.end());
    std::sort(expected.begin(), expected.end());
    CHECK(got == expected);
    // The kept rows sit two elements inside the source's owned region.
    for (int local : map.kept_local) {
      const int gi = tb.i0 + local % tb.node_nx();
      CHECK(gi == h.node(1).owned_box.i1 - 2);
    }
    CHECK_THROWS_AS(build_neighbor_trace(h, 1, 1), std::invalid_argument);
  }

  TEST_CASE("every artificial node is covered by some neighbor's kept rows") {
    for (const char* spec : {"2x2", "4x4", "2x2,2x2", "4x4,2x2"}) {
      CAPTURE(spec);
      const Hierarchy h = make(spec, 4, 8.0);
      const CoverageReport rep = coverage_report(h);
      CHECK(rep.fully_covered());
      for (const CoverageReport::Level& lev : rep.levels) {
        CHECK(lev.covered == lev.artificial_nodes);
        if (lev.artificial_nodes > 0) CHECK(lev.max_multiplicity >= 1);
        CHECK(lev.cross_stencil >= 0);
      }
    }
  }

  TEST_CASE("indivisible tilings are rejected with the offending level") {
    const RectMesh odd(9, 9);
    try {
      build_hierarchy(odd, WavenumberField::constant(4.0), LevelSpec::parse("2x2"));
      FAIL("expected an exception");
    } catch (const std::invalid_argument& e) {
      CHECK(std::string(e.what()).find("level 1") != std::string::npos);
    }
    const RectMesh mesh(8, 8);
    try {
      build_hierarchy(mesh, WavenumberField::constant(4.0), LevelSpec::parse("2x2,3x3"));
      FAIL("expected an exception");
    } catch (const std::invalid_argument& e) {
      CHECK(std::string(e.what()).find("level 2") != std::string::npos);
    }
  }

  TEST_CASE("boundary maps gather and scatter consistently") {
    const Hierarchy h = make("2x2", 4, 8.0);
    const HierarchyNode& nd = h.node(2);
    const Vector g = GaussianStream(31, 0xC1).vector(nd.boundary_dim());
    const Vector lifted = boundary_prolong(nd, g);
    CHECK(lifted.size() == nd.extended_dim());
    CHECK((boundary_restrict(nd, lifted) - g).norm() == 0.0);
    double off = lifted.norm() * lifted.norm();
    for (Index r = 0; r < nd.boundary_dim(); ++r)
      off -= std::norm(lifted[nd.artificial_nodes[r]]);
    CHECK(std::abs(off) <= 1e-12);

    // Transposed pairs: <R x, y> == <x, R^T y> and <P^T x, y> == <x, P y>.
    const HierarchyNode& par = h.node(0);
    const Vector x = GaussianStream(32, 0xC1).vector(par.extended_dim());
    const Vector y = GaussianStream(33, 0xC1).vector(nd.extended_dim());
    Vector rty = Vector::Zero(par.extended_dim());
    restrict_transpose_add(nd, y, rty);
    CHECK(std::abs(restrict_to(nd, x).dot(y) - x.dot(rty)) <= 1e-12 * x.norm() * y.norm());
    Vector py = Vector::Zero(par.extended_dim());
    prolong_add(nd, y, py);
    CHECK(std::abs(prolong_transpose(nd, x).dot(y) - x.dot(py)) <= 1e-12 * x.norm() * y.norm());
  }
}
