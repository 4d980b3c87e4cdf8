#pragma once

#include <functional>
#include <vector>

#include "helmwave/types.hpp"

namespace helmwave {

struct GmresOptions {
  double tolerance = 1e-5;  // relative residual ||b - A x|| / ||b||
  int max_iterations = 400;
  // full GMRES, no restart
};

struct GmresResult {
  Vector x;
  int iterations = 0;  // Krylov basis vectors built
  std::vector<double> residual_history;  // relative; starts at 1
  double final_relres = 0.0;  // true (unpreconditioned) relative residual
  bool converged = false;
};

using LinearOp = std::function<Vector(const Vector&)>;

/// Right-preconditioned full GMRES on A M^{-1} y = b with x = M^{-1} y,
/// modified Gram-Schmidt and Givens rotations. Stops when the true relative
/// residual of x drops below the tolerance; pass a null apply_M for M = I.
/// Non-convergence is reported in the result, not thrown.
GmresResult gmres(const LinearOp& apply_A, const LinearOp& apply_M, const Vector& b,
                  const GmresOptions& opts);

}  // namespace helmwave
