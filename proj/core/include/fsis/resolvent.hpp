#pragma once

#include "fsis/nullspace.hpp"

namespace fsis {

/// Elastic-harmonic extension: div sigma(f) = 0 in the structure,
/// f|GammaS = g. Linear and bounded; the discrete bound is reported.
struct DirichletMapResult {
  Vec f;                  // structure coefficients
  double bound_ratio;     // ||f||_H1(Os) / ||g||_H1(Gs)
  double interior_residual;
};
DirichletMapResult dirichlet_map(const SpaceLayout& layout, const FormSet& forms, const Vec& g);

/// The mixed (saddle) problem in the displacement unknowns with the
/// one-dimensional multiplier pairing b([phi,psi],r) = -r * integral
/// of nu . phi: its inf-sup constant in the a-norm is sqrt(ell' K^-1 ell).
double estimate_infsup(const Gram& gram);

/// Diagnostic witness: eta on the interface with Lap_G eta = sgn(r) nu,
/// mirrored from the continuous inf-sup argument; returns (eta, b-value).
std::pair<Vec, double> infsup_witness(const SpaceLayout& layout, const FormSet& forms);

/// Factorizations for the zero-resolvent solve: the enclosed Stokes saddle
/// on (free fluid dofs, mean-free pressure, mean multiplier).
struct ResolventWorkspace {
  std::shared_ptr<Eigen::SparseLU<SpMat>> stokes;
  SpMat E_f;      // n_u x n_uf
  Vec mean_vec;   // M_p * 1
  Index n_uf = 0, n_p = 0;
};
ResolventWorkspace build_resolvent_workspace(const SpaceLayout& layout, const FormSet& forms);

struct ResolventSolution {
  CVec x;            // reduced solution in N-perp
  Vec q_re, q_im;    // mean-free pressure (imaginary part zero for real input)
  Complex c0_star{0, 0};
  double residual = 0;     // ||A x - rhs||_H / ||rhs||_H
  double bound_ratio = 0;  // ||x||_H / ||rhs||_H
};

/// Solve A Phi = Phi* on N-perp: Stokes recovery of the fluid block, then
/// the mixed saddle problem for (h0, w0, c0*) with the one-dimensional
/// constraint ell(h0) = 0.
ResolventSolution solve_resolvent_at_zero(const GeneratorBundle& bundle,
                                          const ResolventWorkspace& ws,
                                          const CVec& rhs, double nperp_tol = 1e-9);

}  // namespace fsis
