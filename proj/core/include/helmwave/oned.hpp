#pragma once

#include <vector>

#include "helmwave/types.hpp"

namespace helmwave {

/// Uniform 1D mesh of (0, 1), linear elements.
struct Mesh1D {
  int n = 0;

  explicit Mesh1D(int n_);
  double h() const { return 1.0 / n; }
  int nodes() const { return n + 1; }
  double x(int p) const { return p * h(); }
};

/// 1D Helmholtz system -u'' - k^2 u = f with impedance ends
/// -(u' + iku)(0) = g0 and (u' - iku)(1) = g1; f holds the boundary load.
struct System1D {
  SparseMatrix A;
  Vector f;
};

System1D assemble_1d(const Mesh1D& mesh, double k, Complex g0 = Complex(0, 0),
                     Complex g1 = Complex(0, 0));

/// Helmholtz matrix of the subinterval spanning elements [e0, e1), impedance
/// at both subinterval ends. Row/column indices are subinterval-local.
SparseMatrix assemble_interval_1d(const Mesh1D& mesh, double k, int e0, int e1);

/// Two overlapping subdomains (0, b1*h) and (a2*h, 1) with a2 < b1; the
/// ownership cut sits midway between the two interface nodes.
struct Decomposition1D {
  int a2 = 0;   // first element of the right subdomain
  int b1 = 0;   // one past the last element of the left subdomain
  int cut = 0;  // last node owned by the left subdomain

  Decomposition1D(const Mesh1D& mesh, int a2_, int b1_);
  /// Symmetric split with overlap_elems elements on each side of the middle.
  static Decomposition1D bisect(const Mesh1D& mesh, int overlap_elems = 2);
};

/// The two a-harmonic interface modes: each column solves the local problem
/// with zero source and a unit Robin datum at the interior end, prolonged by
/// the boolean ownership masks. Spans the entire post-sweep error space.
DenseMatrix exact_interface_basis(const Mesh1D& mesh, double k, const Decomposition1D& dec);

struct OneStepResult {
  Vector direct;        // sparse-LU solution of the global system
  Vector after_sweep;   // zero start + one restricted additive sweep
  Vector after_coarse;  // + interface-basis coarse correction
  double relative_error = 0.0;  // |after_coarse - direct| / |direct|
};

/// One Schwarz step with the exact interface basis reproduces the direct
/// solution to round-off; the returned stages let tests check why.
OneStepResult one_step_solve(const Mesh1D& mesh, double k, const Decomposition1D& dec,
                             const Vector& f);

/// One basis vector of the hierarchical bisection family, embedded into the
/// global node set by zero-extension for plotting.
struct BasisColumn {
  Vector values;
  int basis_id = 0;
  int level = 1;
};

/// Interface bases of `levels` recursive bisections: the top split yields 2
/// columns at level 1, each subdomain's own split 2 more at level 2, and so
/// on (2^(l+1) - 2 columns in total).
std::vector<BasisColumn> hierarchical_basis_1d(const Mesh1D& mesh, double k, int levels,
                                               int overlap_elems = 2);

}  // namespace helmwave
