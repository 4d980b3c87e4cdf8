#include "helmwave/oned.hpp"

#include <stdexcept>

#include "helmwave/linalg.hpp"

namespace helmwave {

Mesh1D::Mesh1D(int n_) : n(n_) {
  if (n < 2) throw std::invalid_argument("Mesh1D: need at least two elements");
}

SparseMatrix assemble_interval_1d(const Mesh1D& mesh, double k, int e0, int e1) {
  if (e0 < 0 || e1 > mesh.n || e1 - e0 < 1)
    throw std::invalid_argument("assemble_interval_1d: bad element range");
  const double h = mesh.h();
  const int m = e1 - e0;  // local node count is m + 1
  std::vector<Triplet> trips;
  trips.reserve(static_cast<std::size_t>(m) * 4 + 2);
  const double kd = 1.0 / h, md = k * k * h / 6.0;
  for (int e = 0; e < m; ++e) {
    const Complex diag(kd - 2.0 * md, 0.0), off(-kd - md, 0.0);
    trips.emplace_back(e, e, diag);
    trips.emplace_back(e + 1, e + 1, diag);
    trips.emplace_back(e, e + 1, off);
    trips.emplace_back(e + 1, e, off);
  }
  trips.emplace_back(0, 0, Complex(0.0, -k));
  trips.emplace_back(m, m, Complex(0.0, -k));
  SparseMatrix a(m + 1, m + 1);
  a.setFromTriplets(trips.begin(), trips.end());
  a.makeCompressed();
  return a;
}

System1D assemble_1d(const Mesh1D& mesh, double k, Complex g0, Complex g1) {
  System1D sys;
  sys.A = assemble_interval_1d(mesh, k, 0, mesh.n);
  sys.f = Vector::Zero(mesh.nodes());
  sys.f[0] += g0;
  sys.f[mesh.n] += g1;
  return sys;
}

Decomposition1D::Decomposition1D(const Mesh1D& mesh, int a2_, int b1_)
    : a2(a2_), b1(b1_), cut((a2_ + b1_) / 2) {
  if (!(0 < a2 && a2 < b1 && b1 < mesh.n))
    throw std::invalid_argument("Decomposition1D: need 0 < a2 < b1 < n");
}

Decomposition1D Decomposition1D::bisect(const Mesh1D& mesh, int overlap_elems) {
  const int mid = mesh.n / 2;
  return Decomposition1D(mesh, mid - overlap_elems, mid + overlap_elems);
}

DenseMatrix exact_interface_basis(const Mesh1D& mesh, double k, const Decomposition1D& dec) {
  const SparseMatrix a1 = assemble_interval_1d(mesh, k, 0, dec.b1);
  const SparseMatrix a2 = assemble_interval_1d(mesh, k, dec.a2, mesh.n);
  Vector g1 = Vector::Zero(dec.b1 + 1);
  g1[dec.b1] = Complex(1.0, 0.0);  // unit Robin datum at the right interface
  Vector g2 = Vector::Zero(mesh.n - dec.a2 + 1);
  g2[0] = Complex(1.0, 0.0);  // unit Robin datum at the left interface
  const Vector u1 = SparseFactorization(a1).solve(g1);
  const Vector u2 = SparseFactorization(a2).solve(g2);

  DenseMatrix c = DenseMatrix::Zero(mesh.nodes(), 2);
  for (int p = 0; p <= dec.cut; ++p) c(p, 0) = u1[p];
  for (int p = dec.cut + 1; p <= mesh.n; ++p) c(p, 1) = u2[p - dec.a2];
  return c;
}

OneStepResult one_step_solve(const Mesh1D& mesh, double k, const Decomposition1D& dec,
                             const Vector& f) {
  if (f.size() != mesh.nodes()) throw std::invalid_argument("one_step_solve: bad load size");
  const System1D sys = assemble_1d(mesh, k);
  OneStepResult res;
  res.direct = SparseFactorization(sys.A).solve(f);

  const SparseMatrix a1 = assemble_interval_1d(mesh, k, 0, dec.b1);
  const SparseMatrix a2 = assemble_interval_1d(mesh, k, dec.a2, mesh.n);
  const Vector u1 = SparseFactorization(a1).solve(Vector(f.segment(0, dec.b1 + 1)));
  const Vector u2 = SparseFactorization(a2).solve(Vector(f.segment(dec.a2, mesh.n - dec.a2 + 1)));
  res.after_sweep = Vector::Zero(mesh.nodes());
  for (int p = 0; p <= dec.cut; ++p) res.after_sweep[p] = u1[p];
  for (int p = dec.cut + 1; p <= mesh.n; ++p) res.after_sweep[p] = u2[p - dec.a2];

  const DenseMatrix c = exact_interface_basis(mesh, k, dec);
  const DenseMatrix ac = c.adjoint() * (sys.A * c);
  const Vector rc = c.adjoint() * (f - sys.A * res.after_sweep);
  res.after_coarse = res.after_sweep + c * DenseFactorization(ac).solve(rc);
  const double scale = res.direct.norm();
  res.relative_error = (res.after_coarse - res.direct).norm() / (scale > 0 ? scale : 1.0);
  return res;
}

namespace {

void emit_bisection(const Mesh1D& mesh, double k, int overlap, int owned_e0, int owned_e1,
                    int ext_e0, int ext_e1, int level, int max_level,
                    std::vector<BasisColumn>& out, int& next_id) {
  if (owned_e1 - owned_e0 < 2)
    throw std::invalid_argument("hierarchical_basis_1d: interval too small to bisect");
  const int mid = owned_e0 + (owned_e1 - owned_e0) / 2;
  const int left_hi = std::min(mid + overlap, ext_e1);    // left child extended end
  const int right_lo = std::max(mid - overlap, ext_e0);   // right child extended start

  const SparseMatrix a_left = assemble_interval_1d(mesh, k, ext_e0, left_hi);
  const SparseMatrix a_right = assemble_interval_1d(mesh, k, right_lo, ext_e1);
  Vector gl = Vector::Zero(left_hi - ext_e0 + 1);
  gl[left_hi - ext_e0] = Complex(1.0, 0.0);
  Vector gr = Vector::Zero(ext_e1 - right_lo + 1);
  gr[0] = Complex(1.0, 0.0);
  const Vector ul = SparseFactorization(a_left).solve(gl);
  const Vector ur = SparseFactorization(a_right).solve(gr);

  BasisColumn cl;
  cl.values = Vector::Zero(mesh.nodes());
  for (int p = ext_e0; p <= mid; ++p) cl.values[p] = ul[p - ext_e0];
  cl.basis_id = next_id++;
  cl.level = level;
  out.push_back(std::move(cl));

  BasisColumn cr;
  cr.values = Vector::Zero(mesh.nodes());
  for (int p = mid + 1; p <= ext_e1; ++p) cr.values[p] = ur[p - right_lo];
  cr.basis_id = next_id++;
  cr.level = level;
  out.push_back(std::move(cr));

  if (level < max_level) {
    emit_bisection(mesh, k, overlap, owned_e0, mid, ext_e0, left_hi, level + 1, max_level,
                   out, next_id);
    emit_bisection(mesh, k, overlap, mid, owned_e1, right_lo, ext_e1, level + 1, max_level,
                   out, next_id);
  }
}

}  // namespace

std::vector<BasisColumn> hierarchical_basis_1d(const Mesh1D& mesh, double k, int levels,
                                               int overlap_elems) {
  if (levels < 1) throw std::invalid_argument("hierarchical_basis_1d: levels must be >= 1");
  std::vector<BasisColumn> out;
  int next_id = 0;
  emit_bisection(mesh, k, overlap_elems, 0, mesh.n, 0, mesh.n, 1, levels, out, next_id);
  return out;
}

}  // namespace helmwave
