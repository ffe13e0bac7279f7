#pragma once

#include "fsis/forms.hpp"
#include "fsis/layout.hpp"
#include "fsis/mesh.hpp"

namespace fsis {

/// Boundary-condition variant for the explicit pressure maps. The displayed
/// elliptic problems impose Dirichlet data on GammaS; the derived boundary
/// identity is of Robin type there. Both are implemented; neither is declared
/// "the" semantics.
enum class PressureBC { Dirichlet, Robin };
PressureBC parse_pressure_bc(const std::string& name);
std::string to_string(PressureBC bc);

/// Discrete harmonic-pressure solution operators: each map solves a Laplace
/// problem on the fluid region with data on GammaS derived from (u, h0, w0)
/// and Neumann data on GammaF. Second-derivative interface data is evaluated
/// by elementwise differentiation plus facet L2 projection.
struct PressureMaps {
  PressureBC bc = PressureBC::Dirichlet;
  const Mesh* mesh = nullptr;
  const SpaceLayout* layout = nullptr;
  const FormSet* forms = nullptr;
  InterfaceFrame frame;
  Mat nodal_normal;  // n_inodes x d, measure-weighted average of facet normals

  SpMat L;                             // pressure Laplace stiffness
  SpMat Ms_scalar;                     // scalar interface mass (interface nodes)
  SpMat Mbnd;                          // n_h x n_p: <q nu_c, phi_i>_Gs pairing
  SpMat Bnd_P2;                        // n_u x n_p: <q nu_i, P2 basis>_Gs pairing
  std::vector<Index> pnode_of_inode;   // interface node -> pressure node
  std::vector<char> pnode_on_gs, pnode_on_gf;
  std::vector<Index> interior_of_pnode;  // Dirichlet variant unknown numbering
  Index n_unknown = 0;
  using Solver = Eigen::SimplicialLDLT<SpMat>;
  std::shared_ptr<Solver> dirichlet_solver;  // L restricted to non-GammaS nodes
  std::shared_ptr<Solver> robin_solver;      // L + <p,q>_GammaS
  std::shared_ptr<Solver> ms_solver;         // scalar interface mass
  std::shared_ptr<Solver> mg_solver;         // vector interface mass
};

PressureMaps build_pressure_maps(const Mesh& mesh, const SpaceLayout& layout,
                                 const FormSet& forms, PressureBC bc);

/// Dirichlet data of the three maps, nodal scalars on the interface nodes.
Vec p1_boundary_data(const PressureMaps& maps, const Vec& u);
Vec p2_boundary_data(const PressureMaps& maps, const Vec& h0);
Vec p3_boundary_data(const PressureMaps& maps, const Vec& w0);
/// Assembled Neumann load on GammaF:  div(grad u + grad^T u) . nu
Vec p1_neumann_load(const PressureMaps& maps, const Vec& u);

Vec apply_P1(const PressureMaps& maps, const Vec& u);
Vec apply_P2(const PressureMaps& maps, const Vec& h0);
Vec apply_P3(const PressureMaps& maps, const Vec& w0);

/// p = P1(u) + P2(h0) + P3(w0), or the single Robin solve with the summed
/// data when the Robin variant is selected.
Vec apply_pressure_maps(const PressureMaps& maps, const Vec& u, const Vec& h0, const Vec& w0);

/// Relative residual of the discrete Laplacian at nodes away from the
/// boundary (solver-exact for map outputs).
double interior_laplace_residual(const PressureMaps& maps, const Vec& p);
/// Flux-jump a posteriori indicator sqrt(sum over interior facets of
/// len^2 [dp/dn]^2); decreases under refinement for smooth data.
double flux_jump_estimator(const PressureMaps& maps, const Vec& p);

/// Weak normal derivative dp/dnu on GammaS (nu outward w.r.t. the fluid),
/// recovered from stiffness residuals; nodal scalars on interface nodes.
Vec weak_normal_derivative_gs(const PressureMaps& maps, const Vec& p);

/// Weak pressure coupling into the master velocity momentum rows:
///   <p, div v> - <p nu, v|Gs> + <p nu, phi>
/// for matched velocity tests; the boundary terms are assembled through two
/// independent paths (P2 fluid trace vs interface P1) and cancel numerically.
Vec pressure_coupling(const PressureMaps& maps, const SpaceLayout& layout, const Gram& gram,
                      const Vec& p);

/// Mean (volume average) of a pressure-space function.
double pressure_mean(const FormSet& forms, const Vec& p);

}  // namespace fsis
