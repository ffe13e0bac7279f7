#pragma once

#include <memory>

#include "fsis/layout.hpp"
#include "fsis/mesh.hpp"
#include "fsis/types.hpp"

namespace fsis {

/// All bilinear forms of the model, assembled on the field-level coefficient
/// spaces (fluid P2 dofs, interface P1 dofs, structure P1 dofs).
struct FormSet {
  double lambda = 1.0;  // Lame first parameter, >= 0
  double mu = 1.0;      // shear modulus, > 0

  SpMat A_f;        // 1/2 <grad u + grad^T u, grad v + grad^T v>_Of
  SpMat B;          // <div u, q>_Of : n_p x n_u
  SpMat M_f;        // fluid vector mass
  SpMat M_p;        // pressure-space scalar mass (mean constraints, L2 norms)
  SpMat S_G;        // <grad_G h, grad_G phi>_Gs (arc-length Laplacian stiffness)
  SpMat M_G;        // interface vector mass
  SpMat A_s;        // <sigma(w), eps(psi)>_Os + <w, psi>_Os
  SpMat A_s_strain; // strain part of A_s only
  SpMat M_s;        // structure vector mass
  Vec N_G;          // <nu, phi>_Gs, the interface normal-load vector
};

FormSet assemble_forms(const Mesh& mesh, const SpaceLayout& layout, double lambda, double mu);

/// Energy Gram on the trace-constrained master coordinates (y, x0):
///   <(y,x0),(yt,x0t)>_H = yt' M_y y + x0t' K_w x0
/// M_y combines fluid, interface-kinetic and structure-kinetic mass through
/// the trace sharing; K_w = A_s + trace' S_G trace is SPD (the h0 block alone
/// is only semidefinite; definiteness comes from the slaved A_s block).
struct Gram {
  SpMat M_y;
  SpMat K_w;
  SpMat A_fy;      // viscous form on master velocity coords (dissipation rate)
  SpMat M_master;  // blkdiag(M_y, K_w)
  SpMat B_y;       // divergence constraint on master velocity coords
  Vec ell_w;       // ell(x0) = integral over GammaS of nu . h0
  std::shared_ptr<Eigen::SimplicialLDLT<SpMat>> My_solver;
  std::shared_ptr<Eigen::SimplicialLDLT<SpMat>> Kw_solver;
};

Gram assemble_gram(const SpaceLayout& layout, const FormSet& forms);

/// real sparse times complex vector
CVec spmul(const SpMat& A, const CVec& x);
Complex quad_form(const SpMat& A, const CVec& x, const CVec& y);  // y^H A x

void write_matrix_market(const SpMat& A, const std::string& path);
SpMat read_matrix_market(const std::string& path);

}  // namespace fsis
