#include "helmwave/gmres.hpp"

#include <cmath>
#include <stdexcept>

namespace helmwave {

namespace {

// Unitary rotation eliminating a real subdiagonal entry b against a complex a:
// [conj(c) s; -s c] [a; b] = [r; 0] with s real.
struct Givens {
  Complex c;
  double s;
  void apply(Complex& x, Complex& y) const {
    const Complex xn = std::conj(c) * x + s * y;
    const Complex yn = -s * x + c * y;
    x = xn;
    y = yn;
  }
};

Givens make_givens(const Complex& a, double b) {
  const double r = std::sqrt(std::norm(a) + b * b);
  if (r == 0.0) return {Complex(1.0, 0.0), 0.0};
  return {a / r, b / r};
}

}  // namespace

GmresResult gmres(const LinearOp& apply_A, const LinearOp& apply_M, const Vector& b,
                  const GmresOptions& opts) {
  if (opts.tolerance <= 0.0) throw std::invalid_argument("gmres: tolerance must be positive");
  if (opts.max_iterations < 1) throw std::invalid_argument("gmres: max_iterations must be >= 1");
  if (!is_finite(b)) throw std::invalid_argument("gmres: right-hand side is not finite");

  const Index n = b.size();
  const double beta = b.norm();
  GmresResult res;
  res.residual_history.push_back(1.0);
  if (beta == 0.0) {
    res.x = Vector::Zero(n);
    res.converged = true;
    res.final_relres = 0.0;
    return res;
  }

  const auto precondition = [&](const Vector& v) { return apply_M ? apply_M(v) : v; };
  const int maxit = static_cast<int>(std::min<Index>(opts.max_iterations, n));

  std::vector<Vector> basis;  // Krylov basis of the preconditioned system
  basis.reserve(maxit + 1);
  basis.push_back(b / beta);

  DenseMatrix H = DenseMatrix::Zero(maxit + 1, maxit);
  std::vector<Givens> rotations;
  Vector g = Vector::Zero(maxit + 1);
  g[0] = beta;

  // Assemble the iterate from the first k Arnoldi steps.
  const auto form_iterate = [&](int k) {
    Vector y = H.topLeftCorner(k, k).triangularView<Eigen::Upper>().solve(g.head(k));
    Vector v = Vector::Zero(n);
    for (int i = 0; i < k; ++i) v += basis[i] * y[i];
    return precondition(v);
  };

  for (int j = 0; j < maxit; ++j) {
    Vector w = apply_A(precondition(basis[j]));
    for (int i = 0; i <= j; ++i) {  // modified Gram-Schmidt
      const Complex h = basis[i].dot(w);  // conjugates basis[i]
      H(i, j) = h;
      w -= h * basis[i];
    }
    const double hsub = w.norm();
    H(j + 1, j) = hsub;
    const bool breakdown = hsub < 1e-300;
    if (!breakdown) basis.push_back(w / hsub);

    for (int i = 0; i < j; ++i) rotations[i].apply(H(i, j), H(i + 1, j));
    rotations.push_back(make_givens(H(j, j), hsub));
    {
      Complex top = H(j, j), bot = H(j + 1, j);
      rotations[j].apply(top, bot);
      H(j, j) = top;
      H(j + 1, j) = 0.0;
      Complex gt = g[j], gb = g[j + 1];
      rotations[j].apply(gt, gb);
      g[j] = gt;
      g[j + 1] = gb;
    }

    const double estimate = std::abs(g[j + 1]) / beta;
    res.residual_history.push_back(std::min(estimate, res.residual_history.back()));
    res.iterations = j + 1;

    if (breakdown || estimate < opts.tolerance || j == maxit - 1) {
      res.x = form_iterate(j + 1);
      res.final_relres = (b - apply_A(res.x)).norm() / beta;
      // The stopping quantity is the true residual; the recurrence estimate
      // only decides when to check it.
      if (res.final_relres < opts.tolerance) {
        res.converged = true;
        return res;
      }
      if (breakdown || j == maxit - 1) return res;
    }
  }
  return res;
}

}  // namespace helmwave
