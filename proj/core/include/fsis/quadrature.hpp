#pragma once

#include "fsis/types.hpp"

namespace fsis {

/// Quadrature rule on the reference simplex {xi >= 0, sum(xi) <= 1}
/// (or on [0,1] for dim = 1). Weights sum to the reference volume 1/d!.
struct QuadratureRule {
  Mat points;   // n_q x dim
  Vec weights;  // n_q
};

/// Gauss-Jacobi rule for integral over [0,1] of f(t) (1-t)^alpha dt
/// (Golub-Welsch). Exact for polynomial degree 2n-1.
QuadratureRule gauss_jacobi_01(int n, double alpha);

/// Conical-product rule on the reference simplex, exact for total polynomial
/// degree at least `degree`, any dimension.
QuadratureRule simplex_rule(int dim, int degree);

}  // namespace fsis
