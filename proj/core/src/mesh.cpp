#include "fsis/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <numeric>
#include <sstream>

namespace fsis {

namespace {

std::array<Index, 3> facet_key(std::array<Index, 3> v, int nv) {
  std::sort(v.begin(), v.begin() + nv);
  for (int i = nv; i < 3; ++i) v[i] = -1;
  return v;
}

double simplex_volume(const Mat& verts, const Eigen::MatrixXi& cells, int dim, Index c) {
  Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, 0, 3, 3> J(dim, dim);
  for (int j = 0; j < dim; ++j)
    J.col(j) = (verts.row(cells(c, j + 1)) - verts.row(cells(c, 0))).transpose();
  double fact = (dim == 2) ? 2.0 : 6.0;
  return J.determinant() / fact;
}

}  // namespace

Mesh::Mesh(int dim, Mat vertices, Eigen::MatrixXi cells, std::vector<RegionTag> cell_tags)
    : dim_(dim), vertices_(std::move(vertices)), cells_(std::move(cells)),
      cell_tags_(std::move(cell_tags)) {
  if (dim_ != 2 && dim_ != 3) throw Error("mesh: dimension must be 2 or 3");
  if (cells_.cols() != dim_ + 1) throw Error("mesh: cells must have dim+1 vertices");
  if (static_cast<Index>(cell_tags_.size()) != cells_.rows())
    throw Error("mesh: one region tag per cell required");
  // Enforce positive orientation; degenerate cells are caught by validate().
  for (Index c = 0; c < cells_.rows(); ++c) {
    if (simplex_volume(vertices_, cells_, dim_, c) < 0.0)
      std::swap(cells_(c, 0), cells_(c, 1));
  }
  build_facets();
}

void Mesh::build_facets() {
  const int nv = dim_;  // vertices per facet
  std::map<std::array<Index, 3>, std::vector<Index>> adjacency;
  for (Index c = 0; c < cells_.rows(); ++c) {
    for (int omit = 0; omit <= dim_; ++omit) {
      std::array<Index, 3> v{-1, -1, -1};
      int k = 0;
      for (int i = 0; i <= dim_; ++i)
        if (i != omit) v[k++] = cells_(c, i);
      adjacency[facet_key(v, nv)].push_back(c);
    }
  }
  for (const auto& [key, cells_adj] : adjacency) {
    if (cells_adj.size() > 2) throw Error("mesh: facet shared by more than two cells");
    Facet f;
    f.v = key;
    int n_fluid = 0, n_solid = 0;
    for (Index c : cells_adj) {
      if (cell_tag(c) == RegionTag::Fluid) { f.cell_fluid = c; ++n_fluid; }
      else { f.cell_solid = c; ++n_solid; }
    }
    if (n_fluid == 1 && n_solid == 1) f.tag = FacetTag::GammaS;
    else if (cells_adj.size() == 1 && n_fluid == 1) f.tag = FacetTag::GammaF;
    else if (cells_adj.size() == 1 && n_solid == 1)
      throw Error("mesh: solid region touches the outer boundary (structure must be completely immersed)");
    else f.tag = FacetTag::Interior;
    if (n_fluid == 2) f.cell_solid = -1;   // keep one representative fluid cell
    if (n_solid == 2) f.cell_fluid = -1;
    facets_.push_back(f);
  }
  for (Index i = 0; i < static_cast<Index>(facets_.size()); ++i) {
    if (facets_[i].tag == FacetTag::GammaS) gamma_s_.push_back(i);
    if (facets_[i].tag == FacetTag::GammaF) gamma_f_.push_back(i);
  }
}

double Mesh::cell_volume(Index c) const {
  return simplex_volume(vertices_, cells_, dim_, c);
}

double Mesh::facet_measure(const Facet& f) const {
  if (dim_ == 2) return (vertices_.row(f.v[1]) - vertices_.row(f.v[0])).norm();
  Eigen::Vector3d a = vertices_.row(f.v[1]) - vertices_.row(f.v[0]);
  Eigen::Vector3d b = vertices_.row(f.v[2]) - vertices_.row(f.v[0]);
  return 0.5 * a.cross(b).norm();
}

Eigen::Vector3d Mesh::facet_midpoint(const Facet& f) const {
  Eigen::Vector3d m = Eigen::Vector3d::Zero();
  for (int i = 0; i < dim_; ++i) m.head(dim_) += vertices_.row(f.v[i]).transpose();
  m /= dim_;
  return m;
}

double Mesh::bbox_diameter() const {
  Vec lo = vertices_.colwise().minCoeff();
  Vec hi = vertices_.colwise().maxCoeff();
  return (hi - lo).norm();
}

double Mesh::region_measure(RegionTag tag) const {
  double s = 0.0;
  for (Index c = 0; c < num_cells(); ++c)
    if (cell_tag(c) == tag) s += cell_volume(c);
  return s;
}

double Mesh::outer_domain_measure() const {
  // (1/d) * integral of x . n over the outer boundary, outward normal.
  double s = 0.0;
  for (Index fi : gamma_f_) {
    const Facet& f = facets_[fi];
    Eigen::Vector3d mid = facet_midpoint(f);
    Eigen::Vector3d n = Eigen::Vector3d::Zero();
    if (dim_ == 2) {
      Eigen::Vector2d t = (vertices_.row(f.v[1]) - vertices_.row(f.v[0])).transpose().normalized();
      n.head<2>() = Eigen::Vector2d(t.y(), -t.x());
    } else {
      Eigen::Vector3d a = vertices_.row(f.v[1]) - vertices_.row(f.v[0]);
      Eigen::Vector3d b = vertices_.row(f.v[2]) - vertices_.row(f.v[0]);
      n = a.cross(b).normalized();
    }
    // orient away from the adjacent fluid cell
    Eigen::Vector3d cen = Eigen::Vector3d::Zero();
    for (int i = 0; i <= dim_; ++i) cen.head(dim_) += vertices_.row(cells_(f.cell_fluid, i)).transpose();
    cen /= (dim_ + 1);
    if (n.dot(mid - cen) < 0) n = -n;
    s += mid.dot(n) * facet_measure(f);
  }
  return s / dim_;
}

void Mesh::validate() const {
  const double tol = 1e-12 * bbox_diameter();
  // duplicate vertices
  std::vector<Index> order(num_vertices());
  std::iota(order.begin(), order.end(), Index{0});
  std::sort(order.begin(), order.end(), [&](Index a, Index b) {
    return vertices_(a, 0) < vertices_(b, 0);
  });
  for (size_t i = 0; i < order.size(); ++i) {
    for (size_t j = i + 1; j < order.size(); ++j) {
      if (vertices_(order[j], 0) - vertices_(order[i], 0) > tol) break;
      if ((vertices_.row(order[i]) - vertices_.row(order[j])).norm() <= tol)
        throw Error("mesh: duplicate vertices " + std::to_string(order[i]) + " and " +
                    std::to_string(order[j]));
    }
  }
  // positive volumes
  for (Index c = 0; c < num_cells(); ++c) {
    if (!(cell_volume(c) > tol * tol))
      throw Error("mesh: degenerate cell " + std::to_string(c));
  }
  // facet adjacency invariants
  for (const auto& f : facets_) {
    if (f.tag == FacetTag::GammaS && (f.cell_fluid < 0 || f.cell_solid < 0))
      throw Error("mesh: GAMMA_S facet not shared by one FLUID and one SOLID cell");
    if (f.tag == FacetTag::GammaF && f.cell_fluid < 0)
      throw Error("mesh: GAMMA_F facet must belong to a FLUID cell");
  }
  // interface is a closed, connected, orientable curve/surface
  if (gamma_s_.empty()) throw Error("mesh: no GAMMA_S interface found");
  if (dim_ == 2) {
    std::map<Index, std::vector<Index>> vert2facet;
    for (Index fi : gamma_s_) {
      vert2facet[facets_[fi].v[0]].push_back(fi);
      vert2facet[facets_[fi].v[1]].push_back(fi);
    }
    for (const auto& [v, fs] : vert2facet)
      if (fs.size() != 2)
        throw Error("mesh: interface not a closed manifold curve at vertex " + std::to_string(v));
    // walk the cycle
    std::vector<char> seen(facets_.size(), 0);
    Index start = gamma_s_[0];
    Index current = start, prev_vertex = facets_[start].v[0];
    size_t count = 0;
    do {
      seen[current] = 1;
      ++count;
      Index next_vertex = (facets_[current].v[0] == prev_vertex) ? facets_[current].v[1]
                                                                 : facets_[current].v[0];
      const auto& fs = vert2facet[next_vertex];
      current = (fs[0] == current) ? fs[1] : fs[0];
      prev_vertex = next_vertex;
    } while (current != start && count <= gamma_s_.size());
    if (count != gamma_s_.size())
      throw Error("mesh: interface is not a single connected closed curve");
  } else {
    std::map<std::pair<Index, Index>, int> edge_count;
    for (Index fi : gamma_s_) {
      const auto& v = facets_[fi].v;
      for (int e = 0; e < 3; ++e) {
        Index a = v[e], b = v[(e + 1) % 3];
        edge_count[{std::min(a, b), std::max(a, b)}]++;
      }
    }
    for (const auto& [e, n] : edge_count)
      if (n != 2) throw Error("mesh: interface surface is not closed/manifold");
  }
  // region volumes tile the outer domain
  double vol = region_measure(RegionTag::Fluid) + region_measure(RegionTag::Solid);
  double outer = outer_domain_measure();
  if (std::abs(vol - outer) > 1e-10 * std::abs(outer))
    throw Error("mesh: cell volumes do not tile the outer domain");
}

GeometryKind parse_geometry_kind(const std::string& name) {
  if (name == "annulus_disc") return GeometryKind::AnnulusDisc;
  if (name == "box_in_box") return GeometryKind::BoxInBox;
  throw ConfigError("unknown geometry kind '" + name + "' (expected annulus_disc or box_in_box)");
}

std::string to_string(GeometryKind kind) {
  return kind == GeometryKind::AnnulusDisc ? "annulus_disc" : "box_in_box";
}

namespace {

Mesh make_annulus_disc(int resolution) {
  const int a = 2 * resolution;        // angular segments (interface polygon)
  const int rs = resolution;           // solid radial rings
  const int rf = resolution;           // fluid radial rings
  std::vector<Eigen::Vector2d> verts;
  verts.emplace_back(0.0, 0.0);        // center
  auto ring_id = [&](int ring, int k) -> Index {
    // ring 1..rs+rf, k modulo a; ring rs is the interface circle
    return 1 + static_cast<Index>(ring - 1) * a + (k % a);
  };
  for (int ring = 1; ring <= rs + rf; ++ring) {
    double r = (ring <= rs) ? static_cast<double>(ring) / rs
                            : 1.0 + static_cast<double>(ring - rs) / rf;
    for (int k = 0; k < a; ++k) {
      double th = 2.0 * kPi * k / a;
      verts.emplace_back(r * std::cos(th), r * std::sin(th));
    }
  }
  std::vector<std::array<int, 3>> tris;
  std::vector<RegionTag> tags;
  auto add_band = [&](int ring_in, int ring_out, RegionTag tag) {
    for (int k = 0; k < a; ++k) {
      Index i0 = ring_id(ring_in, k), i1 = ring_id(ring_in, k + 1);
      Index o0 = ring_id(ring_out, k), o1 = ring_id(ring_out, k + 1);
      tris.push_back({static_cast<int>(i0), static_cast<int>(i1), static_cast<int>(o1)});
      tags.push_back(tag);
      tris.push_back({static_cast<int>(i0), static_cast<int>(o1), static_cast<int>(o0)});
      tags.push_back(tag);
    }
  };
  // solid fan around the center
  for (int k = 0; k < a; ++k) {
    tris.push_back({0, static_cast<int>(ring_id(1, k)), static_cast<int>(ring_id(1, k + 1))});
    tags.push_back(RegionTag::Solid);
  }
  for (int ring = 1; ring < rs; ++ring) add_band(ring, ring + 1, RegionTag::Solid);
  for (int ring = rs; ring < rs + rf; ++ring) add_band(ring, ring + 1, RegionTag::Fluid);

  Mat V(static_cast<Index>(verts.size()), 2);
  for (size_t i = 0; i < verts.size(); ++i) V.row(static_cast<Index>(i)) = verts[i].transpose();
  Eigen::MatrixXi C(static_cast<Index>(tris.size()), 3);
  for (size_t i = 0; i < tris.size(); ++i)
    C.row(static_cast<Index>(i)) << tris[i][0], tris[i][1], tris[i][2];
  return Mesh(2, std::move(V), std::move(C), std::move(tags));
}

Mesh make_box_in_box(int resolution) {
  if (resolution % 2 != 0)
    throw Error("box_in_box: resolution must be even so the unit-square interface lies on grid lines");
  const int n = 2 * resolution;  // cells per side over [-2,2]
  auto vid = [&](int i, int j) { return static_cast<Index>(j) * (n + 1) + i; };
  // coordinate (2k - 2*res)/res maps k=0..n to [-2,2] hitting -1, 1 exactly
  Mat V(static_cast<Index>((n + 1) * (n + 1)), 2);
  for (int j = 0; j <= n; ++j)
    for (int i = 0; i <= n; ++i)
      V.row(vid(i, j)) << (2.0 * i - 2.0 * resolution) / resolution,
          (2.0 * j - 2.0 * resolution) / resolution;
  std::vector<std::array<int, 3>> tris;
  std::vector<RegionTag> tags;
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      double cx = (2.0 * (i + 0.5) - 2.0 * resolution) / resolution;
      double cy = (2.0 * (j + 0.5) - 2.0 * resolution) / resolution;
      RegionTag tag = (std::abs(cx) < 1.0 && std::abs(cy) < 1.0) ? RegionTag::Solid
                                                                 : RegionTag::Fluid;
      int v00 = static_cast<int>(vid(i, j)), v10 = static_cast<int>(vid(i + 1, j));
      int v01 = static_cast<int>(vid(i, j + 1)), v11 = static_cast<int>(vid(i + 1, j + 1));
      tris.push_back({v00, v10, v11});
      tags.push_back(tag);
      tris.push_back({v00, v11, v01});
      tags.push_back(tag);
    }
  }
  Eigen::MatrixXi C(static_cast<Index>(tris.size()), 3);
  for (size_t i = 0; i < tris.size(); ++i)
    C.row(static_cast<Index>(i)) << tris[i][0], tris[i][1], tris[i][2];
  return Mesh(2, std::move(V), std::move(C), std::move(tags));
}

}  // namespace

Mesh make_reference_geometry(GeometryKind kind, int resolution) {
  if (resolution < 4)
    throw Error("make_reference_geometry: resolution must be >= 4, got " +
                std::to_string(resolution));
  Mesh mesh = (kind == GeometryKind::AnnulusDisc) ? make_annulus_disc(resolution)
                                                  : make_box_in_box(resolution);
  mesh.validate();
  return mesh;
}

InterfaceFrame interface_frame(const Mesh& mesh) {
  const int d = mesh.dim();
  const auto& ids = mesh.gamma_s_facets();
  InterfaceFrame fr;
  fr.facet_ids = ids;
  fr.normal.resize(static_cast<Index>(ids.size()), d);
  fr.tangent.resize(static_cast<Index>(ids.size()), d);
  if (d == 3) fr.tangent2.resize(static_cast<Index>(ids.size()), d);
  fr.measure.resize(static_cast<Index>(ids.size()));
  for (size_t i = 0; i < ids.size(); ++i) {
    const Facet& f = mesh.facets()[ids[i]];
    if (f.cell_fluid < 0) throw Error("interface_frame: non-manifold interface facet");
    Eigen::Vector3d n = Eigen::Vector3d::Zero(), t = Eigen::Vector3d::Zero();
    if (d == 2) {
      Eigen::Vector2d e = (mesh.vertices().row(f.v[1]) - mesh.vertices().row(f.v[0])).transpose();
      t.head<2>() = e.normalized();
      n.head<2>() = Eigen::Vector2d(t.y(), -t.x());
    } else {
      Eigen::Vector3d e1 = mesh.vertices().row(f.v[1]) - mesh.vertices().row(f.v[0]);
      Eigen::Vector3d e2 = mesh.vertices().row(f.v[2]) - mesh.vertices().row(f.v[0]);
      n = e1.cross(e2).normalized();
      t = e1.normalized();
    }
    // orient from the fluid cell into the solid cell
    Eigen::Vector3d cen = Eigen::Vector3d::Zero();
    for (int k = 0; k <= d; ++k)
      cen.head(d) += mesh.vertices().row(mesh.cells()(f.cell_fluid, k)).transpose();
    cen /= (d + 1);
    if (n.dot(mesh.facet_midpoint(f) - cen) < 0) n = -n;
    fr.normal.row(static_cast<Index>(i)) = n.head(d).transpose();
    fr.tangent.row(static_cast<Index>(i)) = t.head(d).transpose();
    if (d == 3)
      fr.tangent2.row(static_cast<Index>(i)) = n.cross(t).head(d).transpose();
    fr.measure(static_cast<Index>(i)) = mesh.facet_measure(f);
  }
  fr.total_measure = fr.measure.sum();
  return fr;
}

NodalNormals interface_nodal_normals(const Mesh& mesh, const InterfaceFrame& frame) {
  std::map<Index, Eigen::Vector3d> acc;
  for (size_t i = 0; i < frame.facet_ids.size(); ++i) {
    const Facet& f = mesh.facets()[frame.facet_ids[i]];
    for (int k = 0; k < mesh.dim(); ++k) {
      Eigen::Vector3d n = Eigen::Vector3d::Zero();
      n.head(mesh.dim()) = frame.normal.row(static_cast<Index>(i)).transpose();
      auto it = acc.find(f.v[k]);
      if (it == acc.end()) acc[f.v[k]] = frame.measure(static_cast<Index>(i)) * n;
      else it->second += frame.measure(static_cast<Index>(i)) * n;
    }
  }
  NodalNormals out;
  out.normal.resize(static_cast<Index>(acc.size()), mesh.dim());
  Index row = 0;
  for (auto& [v, n] : acc) {
    out.vertex_ids.push_back(v);
    out.normal.row(row++) = n.head(mesh.dim()).normalized().transpose();
  }
  return out;
}

double interface_hausdorff_to_unit_circle(const Mesh& mesh) {
  if (mesh.dim() != 2) throw Error("hausdorff check is for 2D interfaces");
  double h = 0.0;
  for (Index fi : mesh.gamma_s_facets()) {
    const Facet& f = mesh.facets()[fi];
    Eigen::Vector2d a = mesh.vertices().row(f.v[0]).transpose();
    Eigen::Vector2d b = mesh.vertices().row(f.v[1]).transpose();
    // distance from the origin to the segment, vs. the unit circle
    Eigen::Vector2d ab = b - a;
    double t = std::clamp(-a.dot(ab) / ab.squaredNorm(), 0.0, 1.0);
    double dmin = (a + t * ab).norm();
    h = std::max(h, std::abs(1.0 - dmin));
    h = std::max(h, std::abs(a.norm() - 1.0));
  }
  return h;
}

void save_mesh(const Mesh& mesh, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("save_mesh: cannot open '" + path + "'");
  char buf[64];
  out << "$Vertices\n" << mesh.num_vertices() << "\n";
  for (Index i = 0; i < mesh.num_vertices(); ++i) {
    for (int j = 0; j < mesh.dim(); ++j) {
      std::snprintf(buf, sizeof(buf), "%.17g", mesh.vertices()(i, j));
      out << (j ? " " : "") << buf;
    }
    out << "\n";
  }
  out << "$Cells\n" << mesh.num_cells() << "\n";
  for (Index c = 0; c < mesh.num_cells(); ++c) {
    for (int j = 0; j <= mesh.dim(); ++j) out << mesh.cells()(c, j) << " ";
    out << static_cast<int>(mesh.cell_tag(c)) << "\n";
  }
  std::vector<const Facet*> tagged;
  for (const auto& f : mesh.facets())
    if (f.tag != FacetTag::Interior) tagged.push_back(&f);
  out << "$Facets\n" << tagged.size() << "\n";
  for (const Facet* f : tagged) {
    for (int j = 0; j < mesh.dim(); ++j) out << f->v[j] << " ";
    out << static_cast<int>(f->tag) << "\n";
  }
}

Mesh load_mesh(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("load_mesh: cannot open '" + path + "'");
  std::string line;
  int lineno = 0;
  auto next_line = [&](bool required) -> bool {
    while (std::getline(in, line)) {
      ++lineno;
      if (!line.empty() && line[0] != '#') return true;
    }
    if (required) throw Error("load_mesh: " + path + ": unexpected end of file at line " +
                              std::to_string(lineno));
    return false;
  };
  auto parse_count = [&](const std::string& section) -> Index {
    next_line(true);
    if (line != section)
      throw Error("load_mesh: " + path + ":" + std::to_string(lineno) + ": expected '" +
                  section + "'");
    next_line(true);
    return static_cast<Index>(std::stoll(line));
  };

  Index nv = parse_count("$Vertices");
  if (nv <= 0) throw Error("load_mesh: " + path + ": no vertices");
  std::vector<std::vector<double>> vert_rows;
  int dim = 0;
  for (Index i = 0; i < nv; ++i) {
    next_line(true);
    std::istringstream ss(line);
    std::vector<double> row;
    double x;
    while (ss >> x) row.push_back(x);
    if (dim == 0) {
      dim = static_cast<int>(row.size());
      if (dim != 2 && dim != 3)
        throw Error("load_mesh: " + path + ":" + std::to_string(lineno) +
                    ": vertex must have 2 or 3 coordinates");
    }
    if (static_cast<int>(row.size()) != dim)
      throw Error("load_mesh: " + path + ":" + std::to_string(lineno) +
                  ": inconsistent vertex dimension");
    vert_rows.push_back(row);
  }
  Mat V(nv, dim);
  for (Index i = 0; i < nv; ++i)
    for (int j = 0; j < dim; ++j) V(i, j) = vert_rows[static_cast<size_t>(i)][static_cast<size_t>(j)];

  Index nc = parse_count("$Cells");
  Eigen::MatrixXi C(nc, dim + 1);
  std::vector<RegionTag> tags;
  for (Index c = 0; c < nc; ++c) {
    next_line(true);
    std::istringstream ss(line);
    std::vector<long long> row;
    long long v;
    while (ss >> v) row.push_back(v);
    if (static_cast<int>(row.size()) != dim + 2)
      throw Error("load_mesh: " + path + ":" + std::to_string(lineno) +
                  ": cell record needs dim+1 vertex ids and a region tag");
    for (int j = 0; j <= dim; ++j) {
      if (row[static_cast<size_t>(j)] < 0 || row[static_cast<size_t>(j)] >= nv)
        throw Error("load_mesh: " + path + ":" + std::to_string(lineno) + ": vertex id out of range");
      C(c, j) = static_cast<int>(row[static_cast<size_t>(j)]);
    }
    long long t = row.back();
    if (t != 1 && t != 2)
      throw Error("load_mesh: " + path + ":" + std::to_string(lineno) +
                  ": region tag must be 1 (FLUID) or 2 (SOLID)");
    tags.push_back(static_cast<RegionTag>(t));
  }

  Index nf = parse_count("$Facets");
  struct Rec { std::array<Index, 3> key; FacetTag tag; int line; };
  std::vector<Rec> recs;
  for (Index i = 0; i < nf; ++i) {
    next_line(true);
    std::istringstream ss(line);
    std::vector<long long> row;
    long long v;
    while (ss >> v) row.push_back(v);
    if (static_cast<int>(row.size()) != dim + 1)
      throw Error("load_mesh: " + path + ":" + std::to_string(lineno) +
                  ": facet record needs dim vertex ids and a tag");
    std::array<Index, 3> key{-1, -1, -1};
    for (int j = 0; j < dim; ++j) key[static_cast<size_t>(j)] = static_cast<Index>(row[static_cast<size_t>(j)]);
    long long t = row.back();
    if (t != 10 && t != 11)
      throw Error("load_mesh: " + path + ":" + std::to_string(lineno) +
                  ": facet tag must be 10 (GAMMA_S) or 11 (GAMMA_F)");
    recs.push_back({facet_key(key, dim), static_cast<FacetTag>(t), lineno});
  }

  Mesh mesh(dim, std::move(V), std::move(C), std::move(tags));
  // Cross-check stored facet tags against region adjacency.
  std::map<std::array<Index, 3>, FacetTag> derived;
  for (const auto& f : mesh.facets()) derived[f.v] = f.tag;
  size_t tagged_in_mesh = mesh.gamma_s_facets().size() + mesh.gamma_f_facets().size();
  if (recs.size() != tagged_in_mesh)
    throw Error("load_mesh: " + path + ": facet section lists " + std::to_string(recs.size()) +
                " tagged facets but region adjacency yields " + std::to_string(tagged_in_mesh));
  for (const auto& r : recs) {
    auto it = derived.find(r.key);
    if (it == derived.end())
      throw Error("load_mesh: " + path + ":" + std::to_string(r.line) +
                  ": facet does not exist in the cell complex");
    if (it->second != r.tag)
      throw Error("load_mesh: " + path + ":" + std::to_string(r.line) +
                  ": facet tag inconsistent with region adjacency (e.g. GAMMA_S facet not "
                  "between FLUID and SOLID cells)");
  }
  mesh.validate();
  return mesh;
}

}  // namespace fsis
