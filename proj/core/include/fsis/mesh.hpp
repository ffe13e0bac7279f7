#pragma once

#include <array>
#include <string>
#include <vector>

#include "fsis/types.hpp"

namespace fsis {

enum class RegionTag : int { Fluid = 1, Solid = 2 };
enum class FacetTag : int { Interior = 0, GammaS = 10, GammaF = 11 };

/// A facet is a (d-1)-simplex of the mesh: an edge in 2D, a triangle in 3D.
/// Facets are derived from cell connectivity; tags are assigned from region
/// adjacency (GammaS between FLUID and SOLID, GammaF on the fluid boundary).
struct Facet {
  std::array<Index, 3> v{-1, -1, -1};  // vertex ids, first dim entries used
  Index cell_fluid = -1;               // adjacent fluid cell (or -1)
  Index cell_solid = -1;               // adjacent solid cell (or -1)
  FacetTag tag = FacetTag::Interior;
};

/// Simplicial two-region mesh. Immutable after construction; safe to share
/// read-only across threads.
class Mesh {
 public:
  Mesh(int dim, Mat vertices, Eigen::MatrixXi cells, std::vector<RegionTag> cell_tags);

  int dim() const { return dim_; }
  Index num_vertices() const { return vertices_.rows(); }
  Index num_cells() const { return cells_.rows(); }
  const Mat& vertices() const { return vertices_; }
  const Eigen::MatrixXi& cells() const { return cells_; }
  RegionTag cell_tag(Index c) const { return cell_tags_[static_cast<size_t>(c)]; }
  const std::vector<Facet>& facets() const { return facets_; }
  const std::vector<Index>& gamma_s_facets() const { return gamma_s_; }
  const std::vector<Index>& gamma_f_facets() const { return gamma_f_; }

  double cell_volume(Index c) const;
  double facet_measure(const Facet& f) const;
  Eigen::Vector3d facet_midpoint(const Facet& f) const;
  double bbox_diameter() const;

  /// Total measure of a region by summing cell volumes.
  double region_measure(RegionTag tag) const;
  /// Area/volume of the outer domain computed from the GammaF boundary alone
  /// (divergence theorem), independent of the cell decomposition.
  double outer_domain_measure() const;

  /// Checks every invariant of the mesh contract; throws Error with the first
  /// violated invariant in the message.
  void validate() const;

 private:
  void build_facets();

  int dim_;
  Mat vertices_;            // num_vertices x dim
  Eigen::MatrixXi cells_;   // num_cells x (dim+1)
  std::vector<RegionTag> cell_tags_;
  std::vector<Facet> facets_;
  std::vector<Index> gamma_s_, gamma_f_;
};

/// Per-GammaS-facet orthonormal frame. The normal is oriented outward with
/// respect to the fluid region, i.e. it points from the fluid cell into the
/// solid cell; every sign convention downstream references this orientation.
struct InterfaceFrame {
  std::vector<Index> facet_ids;          // indices into mesh.facets()
  Mat normal;                            // n_facets x d, unit
  Mat tangent;                           // n_facets x d, unit (first tangent)
  Mat tangent2;                          // n_facets x d (3D only, else empty)
  Vec measure;                           // facet length/area
  double total_measure = 0.0;
};

enum class GeometryKind { AnnulusDisc, BoxInBox };

GeometryKind parse_geometry_kind(const std::string& name);
std::string to_string(GeometryKind kind);

/// Reference two-region geometries. annulus_disc: fluid annulus (radii 1..2)
/// around a solid unit disc, the interface circle approximated by a polygon
/// with 2*resolution segments. box_in_box: fluid [-2,2]^2 minus solid [-1,1]^2.
Mesh make_reference_geometry(GeometryKind kind, int resolution);

InterfaceFrame interface_frame(const Mesh& mesh);

/// Averaged unit normals at the GammaS vertices (one row per interface vertex,
/// ordering given by `vertex_ids`).
struct NodalNormals {
  std::vector<Index> vertex_ids;
  Mat normal;
};
NodalNormals interface_nodal_normals(const Mesh& mesh, const InterfaceFrame& frame);

/// Largest distance from the polygonal interface to the unit circle
/// (annulus_disc geometries only; used by refinement tests).
double interface_hausdorff_to_unit_circle(const Mesh& mesh);

Mesh load_mesh(const std::string& path);
void save_mesh(const Mesh& mesh, const std::string& path);

}  // namespace fsis
