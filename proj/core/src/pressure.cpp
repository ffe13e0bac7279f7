#include "fsis/pressure.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "fsis/elements.hpp"

namespace fsis {

PressureBC parse_pressure_bc(const std::string& name) {
  if (name == "dirichlet") return PressureBC::Dirichlet;
  if (name == "robin") return PressureBC::Robin;
  throw ConfigError("pressure_bc must be 'dirichlet' or 'robin', got '" + name + "'");
}
std::string to_string(PressureBC bc) {
  return bc == PressureBC::Dirichlet ? "dirichlet" : "robin";
}

namespace {

// P2 shape data at one barycentric point of a d-simplex
struct P2Eval {
  Vec values;                 // n_basis
  Mat grads;                  // n_basis x d (reference)
  std::vector<Mat> hessians;  // n_basis entries, d x d (reference, constant)
};

P2Eval p2_at(int d, const Vec& xi) {
  const auto edges = simplex_edges(d);
  const Index nb = d + 1 + static_cast<Index>(edges.size());
  P2Eval ev;
  ev.values.resize(nb);
  ev.grads.setZero(nb, d);
  ev.hessians.assign(static_cast<size_t>(nb), Mat::Zero(d, d));
  Vec lambda(d + 1);
  lambda(0) = 1.0 - xi.sum();
  for (int i = 0; i < d; ++i) lambda(i + 1) = xi(i);
  Mat gl = Mat::Zero(d + 1, d);
  gl.row(0).setConstant(-1.0);
  for (int i = 0; i < d; ++i) gl(i + 1, i) = 1.0;
  for (int i = 0; i <= d; ++i) {
    ev.values(i) = lambda(i) * (2.0 * lambda(i) - 1.0);
    ev.grads.row(i) = (4.0 * lambda(i) - 1.0) * gl.row(i);
    ev.hessians[static_cast<size_t>(i)] = 4.0 * gl.row(i).transpose() * gl.row(i);
  }
  for (size_t e = 0; e < edges.size(); ++e) {
    auto [i, j] = edges[e];
    Index r = d + 1 + static_cast<Index>(e);
    ev.values(r) = 4.0 * lambda(i) * lambda(j);
    ev.grads.row(r) = 4.0 * (lambda(j) * gl.row(i) + lambda(i) * gl.row(j));
    ev.hessians[static_cast<size_t>(r)] =
        4.0 * (gl.row(i).transpose() * gl.row(j) + gl.row(j).transpose() * gl.row(i));
  }
  return ev;
}

// gradient G_ij = du_i/dx_j and the constant vector div(grad u + grad^T u)
// of a P2 vector field on one fluid cell
struct CellDerivs {
  Mat grad;     // d x d at the evaluation point
  Vec divsym;   // d, constant on the cell
};

CellDerivs fluid_cell_derivs(const Mesh& mesh, const SpaceLayout& layout, const Vec& u,
                             Index fluid_cell_row, const Vec& xi) {
  const int d = mesh.dim();
  auto geo = cell_geometry(mesh.vertices(), mesh.cells(), d,
                           layout.fluid_cells[static_cast<size_t>(fluid_cell_row)]);
  P2Eval ev = p2_at(d, xi);
  const Index nb = ev.values.size();
  CellDerivs out;
  out.grad.setZero(d, d);
  out.divsym = Vec::Zero(d);
  std::vector<Mat> H(static_cast<size_t>(d), Mat::Zero(d, d));  // physical Hessians per component
  for (Index a = 0; a < nb; ++a) {
    Index node = layout.fluid_cell_nodes(fluid_cell_row, static_cast<int>(a));
    Vec gphys = geo.inv_jac_t * ev.grads.row(a).transpose();
    Mat hphys = geo.inv_jac_t * ev.hessians[static_cast<size_t>(a)] * geo.inv_jac_t.transpose();
    for (int i = 0; i < d; ++i) {
      double coef = u(node * d + i);
      out.grad.row(i) += coef * gphys.transpose();
      H[static_cast<size_t>(i)] += coef * hphys;
    }
  }
  for (int i = 0; i < d; ++i) {
    out.divsym(i) = H[static_cast<size_t>(i)].trace();
    for (int j = 0; j < d; ++j) out.divsym(i) += H[static_cast<size_t>(j)](i, j);
  }
  return out;
}

Vec reference_coords(const Mesh& mesh, Index cell, const Vec& x) {
  const int d = mesh.dim();
  Mat J(d, d);
  for (int j = 0; j < d; ++j)
    J.col(j) = (mesh.vertices().row(mesh.cells()(cell, j + 1)) -
                mesh.vertices().row(mesh.cells()(cell, 0)))
                   .transpose();
  return J.lu().solve(x - mesh.vertices().row(mesh.cells()(cell, 0)).transpose());
}

}  // namespace

PressureMaps build_pressure_maps(const Mesh& mesh, const SpaceLayout& layout,
                                 const FormSet& forms, PressureBC bc) {
  PressureMaps maps;
  maps.bc = bc;
  maps.mesh = &mesh;
  maps.layout = &layout;
  maps.forms = &forms;
  maps.frame = interface_frame(mesh);
  const int d = mesh.dim();

  NodalNormals nn = interface_nodal_normals(mesh, maps.frame);
  maps.nodal_normal.setZero(layout.n_inodes, d);
  for (size_t k = 0; k < nn.vertex_ids.size(); ++k) {
    Index inode = layout.iface_node_of_vertex[static_cast<size_t>(nn.vertex_ids[k])];
    maps.nodal_normal.row(inode) = nn.normal.row(static_cast<Index>(k));
  }

  // pressure Laplace stiffness
  const QuadratureRule rule = simplex_rule(d, 2);
  const ElementBasis p1 = tabulate_basis(d, 1, rule);
  std::vector<Triplet> tl;
  for (Index fc = 0; fc < static_cast<Index>(layout.fluid_cells.size()); ++fc) {
    auto geo = cell_geometry(mesh.vertices(), mesh.cells(), d, layout.fluid_cells[static_cast<size_t>(fc)]);
    for (Index q = 0; q < rule.points.rows(); ++q) {
      double w = rule.weights(q) * geo.det;
      Mat g = p1.ref_gradients[static_cast<size_t>(q)] * geo.inv_jac_t.transpose();
      for (int a = 0; a <= d; ++a)
        for (int b = 0; b <= d; ++b)
          tl.emplace_back(layout.fluid_cell_pnodes(fc, a), layout.fluid_cell_pnodes(fc, b),
                          w * g.row(a).dot(g.row(b)));
    }
  }
  maps.L.resize(layout.n_p, layout.n_p);
  maps.L.setFromTriplets(tl.begin(), tl.end());

  // node classification and interface pairings
  maps.pnode_on_gs.assign(static_cast<size_t>(layout.n_p), 0);
  maps.pnode_on_gf.assign(static_cast<size_t>(layout.n_p), 0);
  maps.pnode_of_inode.resize(static_cast<size_t>(layout.n_inodes));
  for (Index i = 0; i < layout.n_inodes; ++i) {
    Index v = layout.iface_vertex_of_node[static_cast<size_t>(i)];
    Index pn = layout.pressure_node_of_vertex[static_cast<size_t>(v)];
    if (pn < 0) throw Error("pressure maps: interface vertex missing from the pressure space");
    maps.pnode_of_inode[static_cast<size_t>(i)] = pn;
    maps.pnode_on_gs[static_cast<size_t>(pn)] = 1;
  }
  for (Index fi : mesh.gamma_f_facets())
    for (int k = 0; k < d; ++k) {
      Index pn = layout.pressure_node_of_vertex[static_cast<size_t>(mesh.facets()[fi].v[k])];
      if (pn >= 0) maps.pnode_on_gf[static_cast<size_t>(pn)] = 1;
    }

  // scalar interface mass, boundary pairings (2D exact segment quadrature;
  // 3D via the facet-plane rule)
  std::vector<Triplet> tms, tmb, tb2;
  const QuadratureRule frule = simplex_rule(d - 1, 4);
  for (size_t f = 0; f < layout.iface_facet_ids.size(); ++f) {
    const Facet& fac = mesh.facets()[layout.iface_facet_ids[f]];
    const double meas = maps.frame.measure(static_cast<Index>(f));
    const Index cell = fac.cell_fluid;
    // facet nodes in interface numbering and the facet-local P1 basis
    for (Index q = 0; q < frule.points.rows(); ++q) {
      double w = frule.weights(q) * meas / ((d == 2) ? 1.0 : 0.5);
      // barycentric facet coordinates
      Vec lam(d);
      lam(0) = 1.0 - frule.points.row(q).sum();
      for (int i = 1; i < d; ++i) lam(i) = frule.points(q, i - 1);
      // physical point
      Vec x = Vec::Zero(d);
      for (int i = 0; i < d; ++i) x += lam(i) * mesh.vertices().row(fac.v[i]).transpose();
      // P2 fluid basis on the adjacent cell at x
      Vec xi = reference_coords(mesh, cell, x);
      P2Eval ev = p2_at(d, xi);
      Index fcrow = layout.fluid_row_of_cell[static_cast<size_t>(cell)];
      for (int a = 0; a < d; ++a) {
        Index ia = layout.iface_node_of_vertex[static_cast<size_t>(fac.v[a])];
        Index pa = maps.pnode_of_inode[static_cast<size_t>(ia)];
        for (int b = 0; b < d; ++b) {
          Index ib = layout.iface_node_of_vertex[static_cast<size_t>(fac.v[b])];
          tms.emplace_back(ia, ib, w * lam(a) * lam(b));
          (void)pa;
        }
        for (int b = 0; b < d; ++b) {
          Index pb = maps.pnode_of_inode[static_cast<size_t>(
              layout.iface_node_of_vertex[static_cast<size_t>(fac.v[b])])];
          for (int c = 0; c < d; ++c)
            tmb.emplace_back(ia * d + c, pb,
                             w * lam(a) * lam(b) * maps.frame.normal(static_cast<Index>(f), c));
        }
      }
      for (Index a = 0; a < ev.values.size(); ++a) {
        Index unode = layout.fluid_cell_nodes(fcrow, static_cast<int>(a));
        for (int b = 0; b < d; ++b) {
          Index pb = maps.pnode_of_inode[static_cast<size_t>(
              layout.iface_node_of_vertex[static_cast<size_t>(fac.v[b])])];
          for (int c = 0; c < d; ++c)
            tb2.emplace_back(unode * d + c, pb,
                             w * ev.values(a) * lam(b) * maps.frame.normal(static_cast<Index>(f), c));
        }
      }
    }
  }
  maps.Ms_scalar.resize(layout.n_inodes, layout.n_inodes);
  maps.Ms_scalar.setFromTriplets(tms.begin(), tms.end());
  maps.Mbnd.resize(layout.n_h, layout.n_p);
  maps.Mbnd.setFromTriplets(tmb.begin(), tmb.end());
  maps.Bnd_P2.resize(layout.n_u, layout.n_p);
  maps.Bnd_P2.setFromTriplets(tb2.begin(), tb2.end());
  maps.ms_solver = std::make_shared<PressureMaps::Solver>(maps.Ms_scalar);
  maps.mg_solver = std::make_shared<PressureMaps::Solver>(forms.M_G);
  if (maps.ms_solver->info() != Eigen::Success || maps.mg_solver->info() != Eigen::Success)
    throw Error("pressure maps: interface mass factorization failed");

  // Dirichlet variant: eliminate GammaS nodes
  maps.interior_of_pnode.assign(static_cast<size_t>(layout.n_p), -1);
  maps.n_unknown = 0;
  for (Index pn = 0; pn < layout.n_p; ++pn)
    if (!maps.pnode_on_gs[static_cast<size_t>(pn)])
      maps.interior_of_pnode[static_cast<size_t>(pn)] = maps.n_unknown++;
  std::vector<Triplet> tint;
  for (int k = 0; k < maps.L.outerSize(); ++k)
    for (SpMat::InnerIterator it(maps.L, k); it; ++it) {
      Index ri = maps.interior_of_pnode[static_cast<size_t>(it.row())];
      Index ci = maps.interior_of_pnode[static_cast<size_t>(it.col())];
      if (ri >= 0 && ci >= 0) tint.emplace_back(ri, ci, it.value());
    }
  SpMat Lii(maps.n_unknown, maps.n_unknown);
  Lii.setFromTriplets(tint.begin(), tint.end());
  maps.dirichlet_solver = std::make_shared<PressureMaps::Solver>(Lii);
  if (maps.dirichlet_solver->info() != Eigen::Success)
    throw Error("pressure maps: Laplace solve failure (Dirichlet variant)");

  // Robin variant: L + <p, q>_GammaS over pressure dofs
  std::vector<Triplet> trob;
  for (int k = 0; k < maps.Ms_scalar.outerSize(); ++k)
    for (SpMat::InnerIterator it(maps.Ms_scalar, k); it; ++it)
      trob.emplace_back(maps.pnode_of_inode[static_cast<size_t>(it.row())],
                        maps.pnode_of_inode[static_cast<size_t>(it.col())], it.value());
  SpMat Rob(layout.n_p, layout.n_p);
  Rob.setFromTriplets(trob.begin(), trob.end());
  Rob = maps.L + Rob;
  maps.robin_solver = std::make_shared<PressureMaps::Solver>(Rob);
  if (maps.robin_solver->info() != Eigen::Success)
    throw Error("pressure maps: Laplace solve failure (Robin variant)");
  return maps;
}

Vec p1_boundary_data(const PressureMaps& maps, const Vec& u) {
  const Mesh& mesh = *maps.mesh;
  const SpaceLayout& layout = *maps.layout;
  const int d = mesh.dim();
  const QuadratureRule frule = simplex_rule(d - 1, 4);
  Vec rhs = Vec::Zero(layout.n_inodes);
  for (size_t f = 0; f < layout.iface_facet_ids.size(); ++f) {
    const Facet& fac = mesh.facets()[layout.iface_facet_ids[f]];
    const double meas = maps.frame.measure(static_cast<Index>(f));
    Index fcrow = layout.fluid_row_of_cell[static_cast<size_t>(fac.cell_fluid)];
    Vec nu = maps.frame.normal.row(static_cast<Index>(f)).transpose();
    for (Index q = 0; q < frule.points.rows(); ++q) {
      double w = frule.weights(q) * meas / ((d == 2) ? 1.0 : 0.5);
      Vec lam(d);
      lam(0) = 1.0 - frule.points.row(q).sum();
      for (int i = 1; i < d; ++i) lam(i) = frule.points(q, i - 1);
      Vec x = Vec::Zero(d);
      for (int i = 0; i < d; ++i) x += lam(i) * mesh.vertices().row(fac.v[i]).transpose();
      auto der = fluid_cell_derivs(mesh, layout, u, fcrow, reference_coords(mesh, fac.cell_fluid, x));
      double val = der.divsym.dot(nu) + nu.dot((der.grad + der.grad.transpose()) * nu);
      for (int a = 0; a < d; ++a)
        rhs(layout.iface_node_of_vertex[static_cast<size_t>(fac.v[a])]) += w * val * lam(a);
    }
  }
  return maps.ms_solver->solve(rhs);
}

Vec p2_boundary_data(const PressureMaps& maps, const Vec& h0) {
  // -(Lap_G h0) . nu with the weak arc-length Laplacian
  Vec lap = -maps.mg_solver->solve(Vec(maps.forms->S_G * h0));
  const SpaceLayout& layout = *maps.layout;
  Vec data(layout.n_inodes);
  for (Index i = 0; i < layout.n_inodes; ++i) {
    double v = 0;
    for (int c = 0; c < layout.dim; ++c) v += lap(i * layout.dim + c) * maps.nodal_normal(i, c);
    data(i) = -v;
  }
  return data;
}

Vec p3_boundary_data(const PressureMaps& maps, const Vec& w0) {
  // weak traction via the zero-extension lifting: <t, phi> = <sigma(w),eps(E phi)> + <w, E phi>
  const SpaceLayout& layout = *maps.layout;
  Vec r = layout.T_w0 * Vec(maps.forms->A_s * w0);
  Vec t = maps.mg_solver->solve(r);
  Vec data(layout.n_inodes);
  for (Index i = 0; i < layout.n_inodes; ++i) {
    double v = 0;
    for (int c = 0; c < layout.dim; ++c) v += t(i * layout.dim + c) * maps.nodal_normal(i, c);
    data(i) = -v;
  }
  return data;
}

Vec p1_neumann_load(const PressureMaps& maps, const Vec& u) {
  const Mesh& mesh = *maps.mesh;
  const SpaceLayout& layout = *maps.layout;
  const int d = mesh.dim();
  Vec load = Vec::Zero(layout.n_p);
  for (Index fi : mesh.gamma_f_facets()) {
    const Facet& fac = mesh.facets()[fi];
    Index fcrow = layout.fluid_row_of_cell[static_cast<size_t>(fac.cell_fluid)];
    // outward normal (away from the fluid cell centroid)
    Vec mid = mesh.facet_midpoint(fac).head(d);
    Vec cen = Vec::Zero(d);
    for (int i = 0; i <= d; ++i)
      cen += mesh.vertices().row(mesh.cells()(fac.cell_fluid, i)).transpose();
    cen /= (d + 1);
    Vec nu(d);
    if (d == 2) {
      Eigen::Vector2d t = (mesh.vertices().row(fac.v[1]) - mesh.vertices().row(fac.v[0]))
                              .transpose()
                              .normalized();
      nu << t.y(), -t.x();
    } else {
      Eigen::Vector3d a = mesh.vertices().row(fac.v[1]) - mesh.vertices().row(fac.v[0]);
      Eigen::Vector3d b = mesh.vertices().row(fac.v[2]) - mesh.vertices().row(fac.v[0]);
      nu = a.cross(b).normalized();
    }
    if (nu.dot(mid - cen) < 0) nu = -nu;
    // div(grad u + grad^T u) is constant on the cell
    Vec xi0 = Vec::Zero(d);
    auto der = fluid_cell_derivs(mesh, layout, u, fcrow, xi0);
    double g = der.divsym.dot(nu);
    double meas = mesh.facet_measure(fac);
    for (int a = 0; a < d; ++a) {
      Index pn = layout.pressure_node_of_vertex[static_cast<size_t>(fac.v[a])];
      load(pn) += g * meas / d;
    }
  }
  return load;
}

namespace {

Vec solve_dirichlet(const PressureMaps& maps, const Vec& data_gs, const Vec& neumann_load) {
  const SpaceLayout& layout = *maps.layout;
  Vec p = Vec::Zero(layout.n_p);
  for (Index i = 0; i < layout.n_inodes; ++i)
    p(maps.pnode_of_inode[static_cast<size_t>(i)]) = data_gs(i);
  Vec rhs_full = neumann_load - maps.L * p;
  Vec rhs(maps.n_unknown);
  for (Index pn = 0; pn < layout.n_p; ++pn) {
    Index ii = maps.interior_of_pnode[static_cast<size_t>(pn)];
    if (ii >= 0) rhs(ii) = rhs_full(pn);
  }
  Vec sol = maps.dirichlet_solver->solve(rhs);
  for (Index pn = 0; pn < layout.n_p; ++pn) {
    Index ii = maps.interior_of_pnode[static_cast<size_t>(pn)];
    if (ii >= 0) p(pn) = sol(ii);
  }
  return p;
}

Vec solve_robin(const PressureMaps& maps, const Vec& data_gs, const Vec& neumann_load) {
  const SpaceLayout& layout = *maps.layout;
  Vec bnd = maps.Ms_scalar * data_gs;
  Vec rhs = neumann_load;
  for (Index i = 0; i < layout.n_inodes; ++i)
    rhs(maps.pnode_of_inode[static_cast<size_t>(i)]) += bnd(i);
  return maps.robin_solver->solve(rhs);
}

}  // namespace

Vec apply_P1(const PressureMaps& maps, const Vec& u) {
  return solve_dirichlet(maps, p1_boundary_data(maps, u), p1_neumann_load(maps, u));
}
Vec apply_P2(const PressureMaps& maps, const Vec& h0) {
  return solve_dirichlet(maps, p2_boundary_data(maps, h0), Vec::Zero(maps.layout->n_p));
}
Vec apply_P3(const PressureMaps& maps, const Vec& w0) {
  return solve_dirichlet(maps, p3_boundary_data(maps, w0), Vec::Zero(maps.layout->n_p));
}

Vec apply_pressure_maps(const PressureMaps& maps, const Vec& u, const Vec& h0, const Vec& w0) {
  if (maps.bc == PressureBC::Dirichlet)
    return apply_P1(maps, u) + apply_P2(maps, h0) + apply_P3(maps, w0);
  Vec data = p1_boundary_data(maps, u) + p2_boundary_data(maps, h0) + p3_boundary_data(maps, w0);
  return solve_robin(maps, data, p1_neumann_load(maps, u));
}

double interior_laplace_residual(const PressureMaps& maps, const Vec& p) {
  Vec r = maps.L * p;
  double res = 0.0;
  for (Index pn = 0; pn < maps.layout->n_p; ++pn)
    if (!maps.pnode_on_gs[static_cast<size_t>(pn)] && !maps.pnode_on_gf[static_cast<size_t>(pn)])
      res = std::max(res, std::abs(r(pn)));
  double scale = Mat(maps.L).cwiseAbs().maxCoeff() * p.cwiseAbs().maxCoeff();
  return res / std::max(scale, 1e-300);
}

double flux_jump_estimator(const PressureMaps& maps, const Vec& p) {
  const Mesh& mesh = *maps.mesh;
  const SpaceLayout& layout = *maps.layout;
  const int d = mesh.dim();
  // P1 gradients are constant per cell
  std::map<Index, Vec> grads;  // mesh cell -> grad p
  for (Index fc = 0; fc < static_cast<Index>(layout.fluid_cells.size()); ++fc) {
    auto geo = cell_geometry(mesh.vertices(), mesh.cells(), d, layout.fluid_cells[static_cast<size_t>(fc)]);
    Mat gl = Mat::Zero(d + 1, d);
    gl.row(0).setConstant(-1.0);
    for (int i = 0; i < d; ++i) gl(i + 1, i) = 1.0;
    Vec g = Vec::Zero(d);
    for (int a = 0; a <= d; ++a)
      g += p(layout.fluid_cell_pnodes(fc, a)) * (geo.inv_jac_t * gl.row(a).transpose());
    grads[layout.fluid_cells[static_cast<size_t>(fc)]] = g;
  }
  // The Facet struct stores one representative cell per region, so recover
  // both fluid neighbours of each interior facet from cell connectivity.
  double eta2 = 0.0;
  std::map<std::array<Index, 3>, std::vector<Index>> fluid_adj;
  for (Index fc : layout.fluid_cells) {
    for (int omit = 0; omit <= d; ++omit) {
      std::array<Index, 3> v{-1, -1, -1};
      int k = 0;
      for (int i = 0; i <= d; ++i)
        if (i != omit) v[static_cast<size_t>(k++)] = mesh.cells()(fc, i);
      std::sort(v.begin(), v.begin() + d);
      fluid_adj[v].push_back(fc);
    }
  }
  for (const auto& [key, cells] : fluid_adj) {
    if (cells.size() != 2) continue;
    Vec dg = grads.at(cells[0]) - grads.at(cells[1]);
    // facet normal (any orientation; squared jump is orientation-free)
    Vec nu(d);
    double meas;
    if (d == 2) {
      Eigen::Vector2d t = (mesh.vertices().row(key[1]) - mesh.vertices().row(key[0])).transpose();
      meas = t.norm();
      t.normalize();
      nu << t.y(), -t.x();
    } else {
      Eigen::Vector3d a = mesh.vertices().row(key[1]) - mesh.vertices().row(key[0]);
      Eigen::Vector3d b = mesh.vertices().row(key[2]) - mesh.vertices().row(key[0]);
      Eigen::Vector3d n3 = a.cross(b);
      meas = 0.5 * n3.norm();
      nu = n3.normalized();
    }
    double jump = dg.dot(nu);
    eta2 += meas * meas * jump * jump;
  }
  return std::sqrt(eta2);
}

Vec weak_normal_derivative_gs(const PressureMaps& maps, const Vec& p) {
  const SpaceLayout& layout = *maps.layout;
  Vec r = maps.L * p;
  Vec r_gs(layout.n_inodes);
  for (Index i = 0; i < layout.n_inodes; ++i)
    r_gs(i) = r(maps.pnode_of_inode[static_cast<size_t>(i)]);
  return maps.ms_solver->solve(r_gs);
}

Vec pressure_coupling(const PressureMaps& maps, const SpaceLayout& layout, const Gram& gram,
                      const Vec& p) {
  Vec g = gram.B_y.transpose() * p;                                   // <p, div v>
  Vec fluid_side = layout.E_u.transpose() * Vec(maps.Bnd_P2 * p);     // <p nu, v|Gs>
  Vec iface_side = layout.T_h1.transpose() * Vec(maps.Mbnd * p);      // <p nu, phi>
  return g - fluid_side + iface_side;
}

double pressure_mean(const FormSet& forms, const Vec& p) {
  Vec ones = Vec::Ones(p.size());
  double vol = ones.dot(forms.M_p * ones);
  return ones.dot(forms.M_p * p) / vol;
}

}  // namespace fsis
