#include "helmwave/assemble.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "helmwave/rng.hpp"

namespace helmwave {

namespace {

Eigen::Matrix2d stiffness_1d(double h) {
  Eigen::Matrix2d k;
  k << 1.0, -1.0, -1.0, 1.0;
  return k / h;
}

Eigen::Matrix2d mass_1d(double h) {
  Eigen::Matrix2d m;
  m << 2.0, 1.0, 1.0, 2.0;
  return m * (h / 6.0);
}

}  // namespace

ElementMatrices q1_element_matrices(double hx, double hy) {
  const Eigen::Matrix2d kx = stiffness_1d(hx), mx = mass_1d(hx);
  const Eigen::Matrix2d ky = stiffness_1d(hy), my = mass_1d(hy);
  ElementMatrices e;
  // Tensor products with node order a = 2*ay + ax.
  for (int ay = 0; ay < 2; ++ay)
    for (int ax = 0; ax < 2; ++ax)
      for (int by = 0; by < 2; ++by)
        for (int bx = 0; bx < 2; ++bx) {
          const int a = 2 * ay + ax, b = 2 * by + bx;
          e.stiffness(a, b) = kx(ax, bx) * my(ay, by) + mx(ax, bx) * ky(ay, by);
          e.mass(a, b) = mx(ax, bx) * my(ay, by);
        }
  return e;
}

Eigen::Matrix2d edge_mass(double h) { return mass_1d(h); }

SparseMatrix assemble_box(const RectMesh& mesh, const ElementBox& box,
                          const WavenumberField& field) {
  if (box.ex() < 1 || box.ey() < 1)
    throw std::invalid_argument("assemble_box: box must contain elements");
  if (box.i0 < 0 || box.i1 > mesh.nx || box.j0 < 0 || box.j1 > mesh.ny)
    throw std::invalid_argument("assemble_box: box exceeds mesh");

  const double hx = mesh.hx(), hy = mesh.hy();
  const ElementMatrices em = q1_element_matrices(hx, hy);
  const Eigen::Matrix2d bx_edge = edge_mass(hx), by_edge = edge_mass(hy);

  std::vector<Triplet> trips;
  trips.reserve(static_cast<std::size_t>(box.ex()) * box.ey() * 16 +
                2 * static_cast<std::size_t>(box.ex() + box.ey()) * 4);

  for (int ej = box.j0; ej < box.j1; ++ej)
    for (int ei = box.i0; ei < box.i1; ++ei) {
      const double ke = field.at((ei + 0.5) * hx, (ej + 0.5) * hy);
      const Eigen::Matrix4d ae = em.stiffness - (ke * ke) * em.mass;
      const int loc[4] = {box.local_node(ei, ej), box.local_node(ei + 1, ej),
                          box.local_node(ei, ej + 1), box.local_node(ei + 1, ej + 1)};
      for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b)
          trips.emplace_back(loc[a], loc[b], Complex(ae(a, b), 0.0));
    }

  // Impedance term on every edge of the box boundary. The local problem of a
  // subdomain extended box discretizes Robin data on -all- of its boundary,
  // so the whole-domain box reproduces the global matrix exactly.
  auto add_edge = [&trips](int n0, int n1, const Eigen::Matrix2d& me, double kedge) {
    const Complex scale(0.0, -kedge);
    const int nodes[2] = {n0, n1};
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b)
        trips.emplace_back(nodes[a], nodes[b], scale * me(a, b));
  };
  for (int ei = box.i0; ei < box.i1; ++ei) {
    const double xm = (ei + 0.5) * hx;
    add_edge(box.local_node(ei, box.j0), box.local_node(ei + 1, box.j0), bx_edge,
             field.at(xm, box.j0 * hy));
    add_edge(box.local_node(ei, box.j1), box.local_node(ei + 1, box.j1), bx_edge,
             field.at(xm, box.j1 * hy));
  }
  for (int ej = box.j0; ej < box.j1; ++ej) {
    const double ym = (ej + 0.5) * hy;
    add_edge(box.local_node(box.i0, ej), box.local_node(box.i0, ej + 1), by_edge,
             field.at(box.i0 * hx, ym));
    add_edge(box.local_node(box.i1, ej), box.local_node(box.i1, ej + 1), by_edge,
             field.at(box.i1 * hx, ym));
  }

  SparseMatrix a(box.node_count(), box.node_count());
  a.setFromTriplets(trips.begin(), trips.end());
  a.makeCompressed();
  return a;
}

SparseMatrix assemble_global(const RectMesh& mesh, const WavenumberField& field) {
  return assemble_box(mesh, ElementBox{0, mesh.nx, 0, mesh.ny}, field);
}

Problem random_solution_problem(const RectMesh& mesh, const WavenumberField& field,
                                std::uint64_t seed) {
  Problem p;
  p.mesh = mesh;
  p.field = field;
  p.A = assemble_global(mesh, field);
  p.exact = GaussianStream(seed, stream_key::kRandomSolution).vector(mesh.node_count());
  p.rhs = p.A * p.exact;
  return p;
}

Problem planewave_problem(const RectMesh& mesh, double k, double dx, double dy) {
  const double dnorm = std::hypot(dx, dy);
  if (std::abs(dnorm - 1.0) > 1e-12)
    throw std::invalid_argument("planewave_problem: direction must be a unit vector");

  Problem p;
  p.mesh = mesh;
  p.field = WavenumberField::constant(k);
  p.A = assemble_global(mesh, p.field);

  const Complex ik(0.0, k);
  auto wave = [&](double x, double y) { return std::exp(ik * (dx * x + dy * y)); };

  p.exact.resize(mesh.node_count());
  for (int j = 0; j <= mesh.ny; ++j)
    for (int i = 0; i <= mesh.nx; ++i)
      p.exact[mesh.node_index(i, j)] = wave(mesh.node_x(i), mesh.node_y(j));

  // f = 0; the load is the boundary integral of g = ik(d.n - 1) u against the
  // edge hat functions, 2-point Gauss per edge.
  p.rhs = Vector::Zero(mesh.node_count());
  const double gauss_t[2] = {0.5 * (1.0 - 1.0 / std::sqrt(3.0)),
                             0.5 * (1.0 + 1.0 / std::sqrt(3.0))};
  auto add_edge_load = [&](double x0, double y0, double x1, double y1, int n0, int n1,
                           double nx_out, double ny_out) {
    const double h = std::hypot(x1 - x0, y1 - y0);
    const Complex gfac = ik * (dx * nx_out + dy * ny_out - 1.0);
    for (double t : gauss_t) {
      const double x = x0 + t * (x1 - x0), y = y0 + t * (y1 - y0);
      const Complex g = gfac * wave(x, y);
      const double w = 0.5 * h;
      p.rhs[n0] += w * g * (1.0 - t);
      p.rhs[n1] += w * g * t;
    }
  };
  for (int i = 0; i < mesh.nx; ++i) {
    add_edge_load(mesh.node_x(i), 0.0, mesh.node_x(i + 1), 0.0, mesh.node_index(i, 0),
                  mesh.node_index(i + 1, 0), 0.0, -1.0);
    add_edge_load(mesh.node_x(i), 1.0, mesh.node_x(i + 1), 1.0, mesh.node_index(i, mesh.ny),
                  mesh.node_index(i + 1, mesh.ny), 0.0, 1.0);
  }
  for (int j = 0; j < mesh.ny; ++j) {
    add_edge_load(0.0, mesh.node_y(j), 0.0, mesh.node_y(j + 1), mesh.node_index(0, j),
                  mesh.node_index(0, j + 1), -1.0, 0.0);
    add_edge_load(1.0, mesh.node_y(j), 1.0, mesh.node_y(j + 1), mesh.node_index(mesh.nx, j),
                  mesh.node_index(mesh.nx, j + 1), 1.0, 0.0);
  }
  return p;
}

}  // namespace helmwave
