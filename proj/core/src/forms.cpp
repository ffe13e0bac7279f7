#include "fsis/forms.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "fsis/elements.hpp"

namespace fsis {

namespace {

void add_block(std::vector<Triplet>& out, const Mat& local, const Eigen::MatrixXi& cell_nodes,
               Index cell_row, int d) {
  // local is (n*d) x (n*d) with dof = a*d + i
  const int n = static_cast<int>(cell_nodes.cols());
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
          double v = local(a * d + i, b * d + j);
          if (v != 0.0)
            out.emplace_back(cell_nodes(cell_row, a) * d + i, cell_nodes(cell_row, b) * d + j, v);
        }
}

}  // namespace

FormSet assemble_forms(const Mesh& mesh, const SpaceLayout& layout, double lambda, double mu) {
  if (!(mu > 0.0)) throw Error("assemble_forms: shear modulus mu must be > 0");
  if (lambda < 0.0) throw Error("assemble_forms: Lame parameter lambda must be >= 0");
  FormSet fs;
  fs.lambda = lambda;
  fs.mu = mu;
  const int d = layout.dim;

  const QuadratureRule vol_rule = simplex_rule(d, 5);
  const ElementBasis p2 = tabulate_basis(d, 2, vol_rule);
  const ElementBasis p1 = tabulate_basis(d, 1, vol_rule);
  const Index n_q = vol_rule.points.rows();

  std::vector<Triplet> t_af, t_b, t_mf, t_mp, t_as, t_ass, t_ms;

  // --- fluid cells: A_f, M_f, B ---
  const int nu_loc = static_cast<int>(p2.n_basis);
  for (Index fc = 0; fc < static_cast<Index>(layout.fluid_cells.size()); ++fc) {
    auto geo = cell_geometry(mesh.vertices(), mesh.cells(), d, layout.fluid_cells[fc]);
    if (!(geo.det > 0.0)) throw Error("assemble_forms: singular element Jacobian");
    Mat a_loc = Mat::Zero(nu_loc * d, nu_loc * d);
    Mat m_loc = Mat::Zero(nu_loc * d, nu_loc * d);
    Mat b_loc = Mat::Zero(d + 1, nu_loc * d);
    for (Index q = 0; q < n_q; ++q) {
      const double w = vol_rule.weights(q) * geo.det;
      Mat gu = p2.ref_gradients[static_cast<size_t>(q)] * geo.inv_jac_t.transpose();
      for (int a = 0; a < nu_loc; ++a)
        for (int b = 0; b < nu_loc; ++b) {
          double gg = gu.row(a).dot(gu.row(b));
          double pp = p2.values(a, q) * p2.values(b, q);
          for (int i = 0; i < d; ++i) {
            m_loc(a * d + i, b * d + i) += w * pp;
            a_loc(a * d + i, b * d + i) += w * gg;
            for (int j = 0; j < d; ++j)
              a_loc(a * d + i, b * d + j) += w * gu(a, j) * gu(b, i);
          }
        }
      for (int r = 0; r <= d; ++r)
        for (int b = 0; b < nu_loc; ++b)
          for (int i = 0; i < d; ++i)
            b_loc(r, b * d + i) += w * p1.values(r, q) * gu(b, i);
      for (int r = 0; r <= d; ++r)
        for (int s = 0; s <= d; ++s)
          t_mp.emplace_back(layout.fluid_cell_pnodes(fc, r), layout.fluid_cell_pnodes(fc, s),
                            w * p1.values(r, q) * p1.values(s, q));
    }
    add_block(t_af, a_loc, layout.fluid_cell_nodes, fc, d);
    add_block(t_mf, m_loc, layout.fluid_cell_nodes, fc, d);
    for (int r = 0; r <= d; ++r)
      for (int b = 0; b < nu_loc; ++b)
        for (int i = 0; i < d; ++i)
          t_b.emplace_back(layout.fluid_cell_pnodes(fc, r),
                           layout.fluid_cell_nodes(fc, b) * d + i, b_loc(r, b * d + i));
  }

  // --- structure cells: A_s, M_s ---
  const int nw_loc = d + 1;
  for (Index sc = 0; sc < static_cast<Index>(layout.solid_cells.size()); ++sc) {
    auto geo = cell_geometry(mesh.vertices(), mesh.cells(), d, layout.solid_cells[sc]);
    if (!(geo.det > 0.0)) throw Error("assemble_forms: singular element Jacobian");
    Mat s_loc = Mat::Zero(nw_loc * d, nw_loc * d);
    Mat m_loc = Mat::Zero(nw_loc * d, nw_loc * d);
    for (Index q = 0; q < n_q; ++q) {
      const double w = vol_rule.weights(q) * geo.det;
      Mat gw = p1.ref_gradients[static_cast<size_t>(q)] * geo.inv_jac_t.transpose();
      for (int a = 0; a < nw_loc; ++a)
        for (int b = 0; b < nw_loc; ++b) {
          double gg = gw.row(a).dot(gw.row(b));
          double pp = p1.values(a, q) * p1.values(b, q);
          for (int i = 0; i < d; ++i) {
            m_loc(a * d + i, b * d + i) += w * pp;
            s_loc(a * d + i, b * d + i) += w * mu * gg;
            for (int j = 0; j < d; ++j)
              s_loc(a * d + i, b * d + j) +=
                  w * (mu * gw(a, j) * gw(b, i) + lambda * gw(a, i) * gw(b, j));
          }
        }
    }
    add_block(t_ass, s_loc, layout.solid_cell_nodes, sc, d);
    add_block(t_ms, m_loc, layout.solid_cell_nodes, sc, d);
  }

  // --- interface facets: S_G, M_G, N_G ---
  std::vector<Triplet> t_sg, t_mg;
  fs.N_G = Vec::Zero(layout.n_h);
  const InterfaceFrame frame = interface_frame(mesh);
  if (d == 2) {
    for (size_t f = 0; f < layout.iface_facet_ids.size(); ++f) {
      const double len = frame.measure(static_cast<Index>(f));
      const Index a = layout.iface_facet_nodes(static_cast<Index>(f), 0);
      const Index b = layout.iface_facet_nodes(static_cast<Index>(f), 1);
      for (int i = 0; i < d; ++i) {
        t_sg.emplace_back(a * d + i, a * d + i, 1.0 / len);
        t_sg.emplace_back(b * d + i, b * d + i, 1.0 / len);
        t_sg.emplace_back(a * d + i, b * d + i, -1.0 / len);
        t_sg.emplace_back(b * d + i, a * d + i, -1.0 / len);
        t_mg.emplace_back(a * d + i, a * d + i, len / 3.0);
        t_mg.emplace_back(b * d + i, b * d + i, len / 3.0);
        t_mg.emplace_back(a * d + i, b * d + i, len / 6.0);
        t_mg.emplace_back(b * d + i, a * d + i, len / 6.0);
        fs.N_G(a * d + i) += 0.5 * len * frame.normal(static_cast<Index>(f), i);
        fs.N_G(b * d + i) += 0.5 * len * frame.normal(static_cast<Index>(f), i);
      }
    }
  } else {
    // P1 on flat surface triangles: assemble in facet-plane coordinates
    const QuadratureRule srule = simplex_rule(2, 4);
    const ElementBasis sp1 = tabulate_basis(2, 1, srule);
    for (size_t f = 0; f < layout.iface_facet_ids.size(); ++f) {
      const Facet& fac = mesh.facets()[layout.iface_facet_ids[f]];
      Eigen::Vector3d t1 = frame.tangent.row(static_cast<Index>(f)).transpose();
      Eigen::Vector3d t2 = frame.tangent2.row(static_cast<Index>(f)).transpose();
      Eigen::Matrix2d J;
      Eigen::Vector3d e1 = mesh.vertices().row(fac.v[1]) - mesh.vertices().row(fac.v[0]);
      Eigen::Vector3d e2 = mesh.vertices().row(fac.v[2]) - mesh.vertices().row(fac.v[0]);
      J << e1.dot(t1), e2.dot(t1), e1.dot(t2), e2.dot(t2);
      double det = J.determinant();
      Eigen::Matrix2d invJT = J.inverse().transpose();
      for (Index q = 0; q < srule.points.rows(); ++q) {
        double w = srule.weights(q) * std::abs(det);
        Mat g = sp1.ref_gradients[static_cast<size_t>(q)] * invJT.transpose();
        for (int a = 0; a < 3; ++a)
          for (int b = 0; b < 3; ++b)
            for (int i = 0; i < d; ++i) {
              Index ga = layout.iface_facet_nodes(static_cast<Index>(f), a) * d + i;
              Index gb = layout.iface_facet_nodes(static_cast<Index>(f), b) * d + i;
              t_sg.emplace_back(ga, gb, w * g.row(a).dot(g.row(b)));
              t_mg.emplace_back(ga, gb, w * sp1.values(a, q) * sp1.values(b, q));
            }
        for (int a = 0; a < 3; ++a)
          for (int i = 0; i < d; ++i)
            fs.N_G(layout.iface_facet_nodes(static_cast<Index>(f), a) * d + i) +=
                w * sp1.values(a, q) * frame.normal(static_cast<Index>(f), i);
      }
    }
  }

  auto build = [](Index rows, Index cols, std::vector<Triplet>& t) {
    SpMat A(rows, cols);
    A.setFromTriplets(t.begin(), t.end());
    A.makeCompressed();
    return A;
  };
  fs.A_f = build(layout.n_u, layout.n_u, t_af);
  fs.M_f = build(layout.n_u, layout.n_u, t_mf);
  fs.B = build(layout.n_p, layout.n_u, t_b);
  fs.M_p = build(layout.n_p, layout.n_p, t_mp);
  fs.A_s_strain = build(layout.n_w, layout.n_w, t_ass);
  fs.M_s = build(layout.n_w, layout.n_w, t_ms);
  fs.A_s = fs.A_s_strain + fs.M_s;
  fs.S_G = build(layout.n_h, layout.n_h, t_sg);
  fs.M_G = build(layout.n_h, layout.n_h, t_mg);
  return fs;
}

Gram assemble_gram(const SpaceLayout& layout, const FormSet& forms) {
  Gram g;
  g.M_y = SpMat(layout.E_u.transpose() * forms.M_f * layout.E_u) +
          SpMat(layout.T_h1.transpose() * forms.M_G * layout.T_h1) +
          SpMat(layout.P_w.transpose() * forms.M_s * layout.P_w);
  g.K_w = forms.A_s + SpMat(layout.T_w0.transpose() * forms.S_G * layout.T_w0);
  g.A_fy = layout.E_u.transpose() * forms.A_f * layout.E_u;
  g.B_y = forms.B * layout.E_u;
  g.ell_w = layout.T_w0.transpose() * forms.N_G;
  g.M_y.makeCompressed();
  g.K_w.makeCompressed();
  g.A_fy.makeCompressed();
  g.B_y.makeCompressed();

  std::vector<Triplet> t;
  for (int k = 0; k < g.M_y.outerSize(); ++k)
    for (SpMat::InnerIterator it(g.M_y, k); it; ++it)
      t.emplace_back(it.row(), it.col(), it.value());
  for (int k = 0; k < g.K_w.outerSize(); ++k)
    for (SpMat::InnerIterator it(g.K_w, k); it; ++it)
      t.emplace_back(layout.n_y + it.row(), layout.n_y + it.col(), it.value());
  g.M_master.resize(layout.n_y + layout.n_w, layout.n_y + layout.n_w);
  g.M_master.setFromTriplets(t.begin(), t.end());

  g.My_solver = std::make_shared<Eigen::SimplicialLDLT<SpMat>>(g.M_y);
  g.Kw_solver = std::make_shared<Eigen::SimplicialLDLT<SpMat>>(g.K_w);
  if (g.My_solver->info() != Eigen::Success || g.Kw_solver->info() != Eigen::Success)
    throw Error("assemble_gram: energy Gram factorization failed (singular M_H)");
  return g;
}

CVec spmul(const SpMat& A, const CVec& x) {
  CVec y(A.rows());
  y.real() = A * x.real();
  y.imag() = A * x.imag();
  return y;
}

Complex quad_form(const SpMat& A, const CVec& x, const CVec& y) {
  return y.dot(spmul(A, x));  // Eigen dot conjugates the first argument
}

void write_matrix_market(const SpMat& A, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("write_matrix_market: cannot open '" + path + "'");
  out << "%%MatrixMarket matrix coordinate real general\n";
  out << A.rows() << " " << A.cols() << " " << A.nonZeros() << "\n";
  char buf[64];
  for (int k = 0; k < A.outerSize(); ++k)
    for (SpMat::InnerIterator it(A, k); it; ++it) {
      std::snprintf(buf, sizeof(buf), "%.17g", it.value());
      out << it.row() + 1 << " " << it.col() + 1 << " " << buf << "\n";
    }
}

SpMat read_matrix_market(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("read_matrix_market: cannot open '" + path + "'");
  std::string line;
  if (!std::getline(in, line) || line.rfind("%%MatrixMarket", 0) != 0)
    throw Error("read_matrix_market: missing MatrixMarket header in '" + path + "'");
  while (std::getline(in, line) && (line.empty() || line[0] == '%')) {}
  Index rows, cols, nnz;
  {
    std::istringstream ss(line);
    if (!(ss >> rows >> cols >> nnz))
      throw Error("read_matrix_market: malformed size line in '" + path + "'");
  }
  std::vector<Triplet> t;
  t.reserve(static_cast<size_t>(nnz));
  for (Index k = 0; k < nnz; ++k) {
    Index i, j;
    double v;
    if (!(in >> i >> j >> v)) throw Error("read_matrix_market: truncated data in '" + path + "'");
    t.emplace_back(i - 1, j - 1, v);
  }
  SpMat A(rows, cols);
  A.setFromTriplets(t.begin(), t.end());
  return A;
}

}  // namespace fsis
