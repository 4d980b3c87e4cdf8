#pragma once

#include <cstdint>

#include "helmwave/mesh.hpp"
#include "helmwave/types.hpp"

namespace helmwave {

/// Q1 element stiffness and mass on an hx-by-hy rectangle.
/// Local node order (SW, SE, NW, NE): a = 2*ay + ax.
struct ElementMatrices {
  Eigen::Matrix4d stiffness;
  Eigen::Matrix4d mass;
};

ElementMatrices q1_element_matrices(double hx, double hy);

/// Trace mass matrix of one boundary edge of length h (linear shape functions).
Eigen::Matrix2d edge_mass(double h);

/// Helmholtz matrix over the elements of `box` with the impedance term
/// -i*k*edge_mass on all four sides of the box, artificial or physical alike:
///   A = K - sum_e k_e^2 M_e - i sum_{boundary edges} k_edge B_edge.
/// k_e is the field at the element center, k_edge at the edge midpoint.
/// Indices are box-local (x fastest). Complex symmetric by construction.
SparseMatrix assemble_box(const RectMesh& mesh, const ElementBox& box,
                          const WavenumberField& field);

/// Whole mesh as one box; global node indices.
SparseMatrix assemble_global(const RectMesh& mesh, const WavenumberField& field);

/// A discretized problem: matrix, load, and the known solution when one
/// exists (size 0 otherwise).
struct Problem {
  RectMesh mesh;
  WavenumberField field;
  SparseMatrix A;
  Vector rhs;
  Vector exact;
};

/// Manufactured problem: u_true has independent standard-normal real and
/// imaginary parts from a stream keyed by seed, f = A u_true.
Problem random_solution_problem(const RectMesh& mesh, const WavenumberField& field,
                                std::uint64_t seed);

/// Validation problem with known solution u(x) = exp(i k d.x), f = 0 and
/// inhomogeneous impedance datum g = ik(d.n - 1) u on the boundary,
/// integrated edge-wise with 2-point Gauss.
Problem planewave_problem(const RectMesh& mesh, double k, double dx, double dy);

}  // namespace helmwave
