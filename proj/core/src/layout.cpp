#include "fsis/layout.hpp"

#include <map>
#include <set>

#include "fsis/elements.hpp"

namespace fsis {

namespace {
using EdgeKey = std::pair<Index, Index>;
EdgeKey edge_key(Index a, Index b) { return {std::min(a, b), std::max(a, b)}; }
}  // namespace

SpaceLayout::SpaceLayout(const Mesh& m) : mesh(&m) {
  dim = m.dim();
  const int d = dim;

  fluid_row_of_cell.assign(static_cast<size_t>(m.num_cells()), -1);
  for (Index c = 0; c < m.num_cells(); ++c) {
    if (m.cell_tag(c) == RegionTag::Fluid) {
      fluid_row_of_cell[static_cast<size_t>(c)] = static_cast<Index>(fluid_cells.size());
      fluid_cells.push_back(c);
    } else {
      solid_cells.push_back(c);
    }
  }

  // --- fluid P2 nodes: vertices first, then edges (deterministic order) ---
  std::set<Index> fluid_verts;
  std::map<EdgeKey, Index> fluid_edges;
  const auto edges = simplex_edges(d);
  for (Index c : fluid_cells) {
    for (int i = 0; i <= d; ++i) fluid_verts.insert(m.cells()(c, i));
    for (auto [i, j] : edges) fluid_edges.emplace(edge_key(m.cells()(c, i), m.cells()(c, j)), -1);
  }
  std::map<Index, Index> fluid_node_of_vertex;
  Index node = 0;
  for (Index v : fluid_verts) fluid_node_of_vertex[v] = node++;
  for (auto& [key, id] : fluid_edges) id = node++;
  n_unodes = node;
  n_u = n_unodes * d;

  fluid_node_coords.resize(n_unodes, d);
  for (auto [v, nid] : fluid_node_of_vertex) fluid_node_coords.row(nid) = m.vertices().row(v);
  for (auto& [key, nid] : fluid_edges)
    fluid_node_coords.row(nid) =
        0.5 * (m.vertices().row(key.first) + m.vertices().row(key.second));

  const int nodes_per_cell = d + 1 + static_cast<int>(edges.size());
  fluid_cell_nodes.resize(static_cast<Index>(fluid_cells.size()), nodes_per_cell);
  for (size_t fc = 0; fc < fluid_cells.size(); ++fc) {
    Index c = fluid_cells[fc];
    for (int i = 0; i <= d; ++i)
      fluid_cell_nodes(static_cast<Index>(fc), i) =
          static_cast<int>(fluid_node_of_vertex.at(m.cells()(c, i)));
    for (size_t e = 0; e < edges.size(); ++e)
      fluid_cell_nodes(static_cast<Index>(fc), d + 1 + static_cast<int>(e)) = static_cast<int>(
          fluid_edges.at(edge_key(m.cells()(c, edges[e].first), m.cells()(c, edges[e].second))));
  }

  // --- pressure P1 nodes = fluid vertices ---
  pressure_node_of_vertex.assign(static_cast<size_t>(m.num_vertices()), -1);
  n_p = 0;
  for (Index v : fluid_verts) pressure_node_of_vertex[static_cast<size_t>(v)] = n_p++;
  pressure_node_coords.resize(n_p, d);
  for (Index v : fluid_verts)
    pressure_node_coords.row(pressure_node_of_vertex[static_cast<size_t>(v)]) = m.vertices().row(v);
  fluid_cell_pnodes.resize(static_cast<Index>(fluid_cells.size()), d + 1);
  for (size_t fc = 0; fc < fluid_cells.size(); ++fc)
    for (int i = 0; i <= d; ++i)
      fluid_cell_pnodes(static_cast<Index>(fc), i) = static_cast<int>(
          pressure_node_of_vertex[static_cast<size_t>(m.cells()(fluid_cells[fc], i))]);

  // --- structure P1 nodes ---
  std::set<Index> solid_verts;
  for (Index c : solid_cells)
    for (int i = 0; i <= d; ++i) solid_verts.insert(m.cells()(c, i));
  solid_node_of_vertex.assign(static_cast<size_t>(m.num_vertices()), -1);
  n_wnodes = 0;
  for (Index v : solid_verts) solid_node_of_vertex[static_cast<size_t>(v)] = n_wnodes++;
  n_w = n_wnodes * d;
  solid_node_coords.resize(n_wnodes, d);
  for (Index v : solid_verts)
    solid_node_coords.row(solid_node_of_vertex[static_cast<size_t>(v)]) = m.vertices().row(v);
  solid_cell_nodes.resize(static_cast<Index>(solid_cells.size()), d + 1);
  for (size_t sc = 0; sc < solid_cells.size(); ++sc)
    for (int i = 0; i <= d; ++i)
      solid_cell_nodes(static_cast<Index>(sc), i) = static_cast<int>(
          solid_node_of_vertex[static_cast<size_t>(m.cells()(solid_cells[sc], i))]);

  // --- interface P1 nodes (GammaS vertices, deterministic order) ---
  std::set<Index> iface_verts;
  for (Index fi : m.gamma_s_facets()) {
    iface_facet_ids.push_back(fi);
    for (int i = 0; i < d; ++i) iface_verts.insert(m.facets()[fi].v[i]);
  }
  iface_node_of_vertex.assign(static_cast<size_t>(m.num_vertices()), -1);
  n_inodes = 0;
  for (Index v : iface_verts) {
    iface_node_of_vertex[static_cast<size_t>(v)] = n_inodes++;
    iface_vertex_of_node.push_back(v);
  }
  n_h = n_inodes * d;
  iface_node_coords.resize(n_inodes, d);
  for (Index v : iface_verts)
    iface_node_coords.row(iface_node_of_vertex[static_cast<size_t>(v)]) = m.vertices().row(v);
  iface_facet_nodes.resize(static_cast<Index>(iface_facet_ids.size()), d);
  for (size_t f = 0; f < iface_facet_ids.size(); ++f)
    for (int i = 0; i < d; ++i)
      iface_facet_nodes(static_cast<Index>(f), i) = static_cast<int>(
          iface_node_of_vertex[static_cast<size_t>(m.facets()[iface_facet_ids[f]].v[i])]);

  // trace maps; a conforming mesh has every interface vertex in both spaces
  iface_to_fluid_node.resize(static_cast<size_t>(n_inodes));
  iface_to_solid_node.resize(static_cast<size_t>(n_inodes));
  for (Index i = 0; i < n_inodes; ++i) {
    Index v = iface_vertex_of_node[static_cast<size_t>(i)];
    auto fit = fluid_node_of_vertex.find(v);
    Index sn = solid_node_of_vertex[static_cast<size_t>(v)];
    if (fit == fluid_node_of_vertex.end() || sn < 0)
      throw Error("layout: interface trace mismatch at vertex " + std::to_string(v) +
                  " (non-conforming mesh)");
    iface_to_fluid_node[static_cast<size_t>(i)] = fit->second;
    iface_to_solid_node[static_cast<size_t>(i)] = sn;
  }

  // --- classify fluid nodes ---
  fluid_node_class.assign(static_cast<size_t>(n_unodes), FluidNodeClass::Free);
  fluid_node_iface.assign(static_cast<size_t>(n_unodes), -1);
  fluid_node_mid_ends.assign(static_cast<size_t>(n_unodes), {-1, -1});
  auto classify = [&](Index nid, FluidNodeClass cls) {
    auto& cur = fluid_node_class[static_cast<size_t>(nid)];
    if (cur != FluidNodeClass::Free && cur != cls)
      throw Error("layout: interface touches the outer boundary");
    cur = cls;
  };
  // vertex nodes lying on tagged facets
  for (const auto& f : m.facets()) {
    if (f.tag == FacetTag::Interior) continue;
    FluidNodeClass vcls = (f.tag == FacetTag::GammaF) ? FluidNodeClass::GammaF
                                                      : FluidNodeClass::GammaSVertex;
    for (int i = 0; i < d; ++i) classify(fluid_node_of_vertex.at(f.v[i]), vcls);
  }
  // midside nodes: in 2D the facet *is* an edge; in 3D each facet has 3 edges
  for (const auto& f : m.facets()) {
    if (f.tag == FacetTag::Interior) continue;
    std::vector<EdgeKey> fedges;
    if (d == 2) fedges.push_back(edge_key(f.v[0], f.v[1]));
    else
      for (int i = 0; i < 3; ++i)
        fedges.push_back(edge_key(f.v[i], f.v[(i + 1) % 3]));
    for (const auto& ek : fedges) {
      auto it = fluid_edges.find(ek);
      if (it == fluid_edges.end()) continue;
      if (f.tag == FacetTag::GammaF) classify(it->second, FluidNodeClass::GammaF);
      else {
        classify(it->second, FluidNodeClass::GammaSMid);
        fluid_node_mid_ends[static_cast<size_t>(it->second)] = {
            iface_node_of_vertex[static_cast<size_t>(ek.first)],
            iface_node_of_vertex[static_cast<size_t>(ek.second)]};
      }
    }
  }
  for (Index i = 0; i < n_inodes; ++i)
    fluid_node_iface[static_cast<size_t>(iface_to_fluid_node[static_cast<size_t>(i)])] = i;
  for (Index i = 0; i < n_inodes; ++i)
    classify(iface_to_fluid_node[static_cast<size_t>(i)], FluidNodeClass::GammaSVertex);

  // --- master velocity numbering ---
  fluid_dof_to_master.assign(static_cast<size_t>(n_u), -1);
  n_uf = 0;
  n_essential = 0;
  for (Index nid = 0; nid < n_unodes; ++nid) {
    switch (fluid_node_class[static_cast<size_t>(nid)]) {
      case FluidNodeClass::Free:
        for (int c = 0; c < d; ++c) fluid_dof_to_master[static_cast<size_t>(nid * d + c)] = n_uf++;
        break;
      case FluidNodeClass::GammaF:
        n_essential += d;
        break;
      default:
        break;  // shared or slaved; resolved through E_u below
    }
  }
  n_y = n_uf + n_w;

  auto wdof = [&](Index iface_node, int c) {
    return n_uf + iface_to_solid_node[static_cast<size_t>(iface_node)] * d + c;
  };
  std::vector<Triplet> te, th, tp, tt;
  for (Index nid = 0; nid < n_unodes; ++nid) {
    for (int c = 0; c < d; ++c) {
      Index dof = nid * d + c;
      switch (fluid_node_class[static_cast<size_t>(nid)]) {
        case FluidNodeClass::Free:
          te.emplace_back(dof, fluid_dof_to_master[static_cast<size_t>(dof)], 1.0);
          break;
        case FluidNodeClass::GammaSVertex:
          te.emplace_back(dof, wdof(fluid_node_iface[static_cast<size_t>(nid)], c), 1.0);
          break;
        case FluidNodeClass::GammaSMid: {
          auto [a, b] = fluid_node_mid_ends[static_cast<size_t>(nid)];
          te.emplace_back(dof, wdof(a, c), 0.5);
          te.emplace_back(dof, wdof(b, c), 0.5);
          break;
        }
        case FluidNodeClass::GammaF:
          break;  // essential zero
      }
    }
  }
  E_u.resize(n_u, n_y);
  E_u.setFromTriplets(te.begin(), te.end());

  for (Index i = 0; i < n_inodes; ++i)
    for (int c = 0; c < d; ++c) th.emplace_back(i * d + c, wdof(i, c), 1.0);
  T_h1.resize(n_h, n_y);
  T_h1.setFromTriplets(th.begin(), th.end());

  for (Index j = 0; j < n_w; ++j) tp.emplace_back(j, n_uf + j, 1.0);
  P_w.resize(n_w, n_y);
  P_w.setFromTriplets(tp.begin(), tp.end());

  for (Index i = 0; i < n_inodes; ++i)
    for (int c = 0; c < d; ++c)
      tt.emplace_back(i * d + c, iface_to_solid_node[static_cast<size_t>(i)] * d + c, 1.0);
  T_w0.resize(n_h, n_w);
  T_w0.setFromTriplets(tt.begin(), tt.end());
}

}  // namespace fsis
