#pragma once

#include <array>
#include <memory>
#include <vector>

#include "fsis/mesh.hpp"
#include "fsis/types.hpp"

namespace fsis {

enum class FluidNodeClass : char { Free, GammaF, GammaSVertex, GammaSMid };

/// Discrete space layout for the coupled state [u, h0, h1, w0, w1]:
///   - fluid velocity: vector P2 on FLUID cells, u = 0 on GammaF essential;
///   - fluid pressure: continuous P1 on FLUID cells (inf-sup stable pair);
///   - interface displacement/velocity: vector P1 on GammaS facets;
///   - structure displacement/velocity: vector P1 on SOLID cells.
///
/// Trace coupling is by shared coefficients: interface vertex dofs are
/// identified with the GammaS vertex dofs of both the fluid and the structure
/// space (fluid midside nodes on GammaS interpolate linearly), so h0 = w0|Gs
/// and u|Gs = h1 = w1|Gs hold exactly for every master coefficient vector.
///
/// Master coordinates:
///   velocity level  y  = [free fluid dofs ; all structure velocity dofs]
///   displacement    x0 = [all structure displacement dofs]
/// with h1, h0 the shared trace blocks of w1, w0.
class SpaceLayout {
 public:
  explicit SpaceLayout(const Mesh& mesh);

  int dim = 0;

  // fluid velocity space (scalar node tables; dofs are node*d + component)
  Index n_unodes = 0, n_u = 0;
  std::vector<Index> fluid_cells;             // mesh cell ids
  std::vector<Index> fluid_row_of_cell;       // mesh cell -> row in fluid_cells or -1
  Eigen::MatrixXi fluid_cell_nodes;           // cell -> P2 node ids
  Mat fluid_node_coords;                      // node -> position
  std::vector<FluidNodeClass> fluid_node_class;
  std::vector<Index> fluid_node_iface;                  // GammaSVertex -> interface node
  std::vector<std::array<Index, 2>> fluid_node_mid_ends;  // GammaSMid -> interface nodes

  // pressure space
  Index n_p = 0;
  Eigen::MatrixXi fluid_cell_pnodes;
  std::vector<Index> pressure_node_of_vertex;  // mesh vertex -> node or -1
  Mat pressure_node_coords;

  // structure space
  Index n_wnodes = 0, n_w = 0;
  std::vector<Index> solid_cells;
  Eigen::MatrixXi solid_cell_nodes;
  std::vector<Index> solid_node_of_vertex;
  Mat solid_node_coords;

  // interface space
  Index n_inodes = 0, n_h = 0;
  std::vector<Index> iface_vertex_of_node;
  std::vector<Index> iface_node_of_vertex;
  Eigen::MatrixXi iface_facet_nodes;     // GammaS facet -> interface nodes
  std::vector<Index> iface_facet_ids;    // mesh facet ids, same order
  std::vector<Index> iface_to_fluid_node;
  std::vector<Index> iface_to_solid_node;
  Mat iface_node_coords;

  // master coefficient layout
  Index n_uf = 0;  // free fluid dofs
  Index n_y = 0;   // n_uf + n_w
  std::vector<Index> fluid_dof_to_master;  // full fluid dof -> y index or -1
  Index n_essential = 0;                   // GammaF dofs (flagged essential)

  // composition operators (all 0/1/half entries)
  SpMat E_u;   // n_u x n_y: master velocity -> full fluid coefficients
  SpMat T_h1;  // n_h x n_y: interface velocity trace
  SpMat P_w;   // n_w x n_y: structure velocity block
  SpMat T_w0;  // n_h x n_w: structure -> interface displacement trace

  const Mesh* mesh = nullptr;  // non-owning; valid for the layout's lifetime
};

}  // namespace fsis
