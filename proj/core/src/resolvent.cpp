#include "fsis/resolvent.hpp"

#include <cmath>

namespace fsis {

DirichletMapResult dirichlet_map(const SpaceLayout& layout, const FormSet& forms, const Vec& g) {
  if (g.size() != layout.n_h) throw Error("dirichlet_map: data must live on the interface space");
  // interior structure dofs (trace dofs carry the data)
  std::vector<char> on_iface(static_cast<size_t>(layout.n_wnodes), 0);
  for (Index i = 0; i < layout.n_inodes; ++i)
    on_iface[static_cast<size_t>(layout.iface_to_solid_node[static_cast<size_t>(i)])] = 1;
  std::vector<Index> interior_of_dof(static_cast<size_t>(layout.n_w), -1);
  Index n_int = 0;
  for (Index n = 0; n < layout.n_wnodes; ++n)
    if (!on_iface[static_cast<size_t>(n)])
      for (int c = 0; c < layout.dim; ++c)
        interior_of_dof[static_cast<size_t>(n * layout.dim + c)] = n_int++;

  Vec f = layout.T_w0.transpose() * g;  // boundary data, zero interior
  Vec rhs_full = -(forms.A_s_strain * f);
  std::vector<Triplet> t;
  for (int k = 0; k < forms.A_s_strain.outerSize(); ++k)
    for (SpMat::InnerIterator it(forms.A_s_strain, k); it; ++it) {
      Index ri = interior_of_dof[static_cast<size_t>(it.row())];
      Index ci = interior_of_dof[static_cast<size_t>(it.col())];
      if (ri >= 0 && ci >= 0) t.emplace_back(ri, ci, it.value());
    }
  SpMat Aii(n_int, n_int);
  Aii.setFromTriplets(t.begin(), t.end());
  Eigen::SimplicialLDLT<SpMat> solver(Aii);
  if (solver.info() != Eigen::Success) throw Error("dirichlet_map: interior solve failed");
  Vec rhs(n_int);
  for (Index dof = 0; dof < layout.n_w; ++dof) {
    Index ii = interior_of_dof[static_cast<size_t>(dof)];
    if (ii >= 0) rhs(ii) = rhs_full(dof);
  }
  Vec sol = solver.solve(rhs);
  for (Index dof = 0; dof < layout.n_w; ++dof) {
    Index ii = interior_of_dof[static_cast<size_t>(dof)];
    if (ii >= 0) f(dof) = sol(ii);
  }
  DirichletMapResult out;
  out.f = f;
  double fnorm = std::sqrt(f.dot(forms.A_s_strain * f) + f.dot(forms.M_s * f));
  double gnorm = std::sqrt(g.dot(forms.S_G * g) + g.dot(forms.M_G * g));
  out.bound_ratio = (gnorm > 0) ? fnorm / gnorm : 0.0;
  Vec res_full = forms.A_s_strain * f;
  double res = 0;
  for (Index dof = 0; dof < layout.n_w; ++dof)
    if (interior_of_dof[static_cast<size_t>(dof)] >= 0) res = std::max(res, std::abs(res_full(dof)));
  out.interior_residual = res / std::max(1.0, fnorm);
  return out;
}

double estimate_infsup(const Gram& gram) {
  Vec kinv = gram.Kw_solver->solve(gram.ell_w);
  double b2 = gram.ell_w.dot(kinv);
  if (!(b2 > 1e-24))
    throw Error("estimate_infsup: degenerate constraint pairing (beta^2 = " +
                std::to_string(b2) + ")");
  return std::sqrt(b2);
}

std::pair<Vec, double> infsup_witness(const SpaceLayout& layout, const FormSet& forms) {
  // solve <grad_G eta, grad_G phi> = -<nu, phi> with the per-component means
  // pinned (the compatibility integral of nu over the closed interface is 0)
  const int d = layout.dim;
  const Index n = layout.n_h;
  Mat S = Mat(forms.S_G);
  Mat sys = Mat::Zero(n + d, n + d);
  sys.topLeftCorner(n, n) = S;
  Vec ones_c = Vec::Zero(n);
  for (int c = 0; c < d; ++c) {
    Vec col = Vec::Zero(n);
    for (Index i = 0; i < layout.n_inodes; ++i) col(i * d + c) = 1.0;
    Vec mcol = forms.M_G * col;
    sys.block(0, n + c, n, 1) = mcol;
    sys.block(n + c, 0, 1, n) = mcol.transpose();
  }
  (void)ones_c;
  Vec rhs = Vec::Zero(n + d);
  rhs.head(n) = -forms.N_G;
  Vec sol = sys.lu().solve(rhs);
  Vec eta = sol.head(n);
  double bval = -forms.N_G.dot(eta);  // b([eta, lift eta], 1)
  return {eta, bval};
}

ResolventWorkspace build_resolvent_workspace(const SpaceLayout& layout, const FormSet& forms) {
  ResolventWorkspace ws;
  ws.n_uf = layout.n_uf;
  ws.n_p = layout.n_p;
  ws.E_f = layout.E_u.leftCols(layout.n_uf);
  SpMat A_ff = ws.E_f.transpose() * forms.A_f * ws.E_f;
  SpMat B_f = forms.B * ws.E_f;
  ws.mean_vec = forms.M_p * Vec::Ones(layout.n_p);

  const Index n = ws.n_uf + ws.n_p + 1;
  std::vector<Triplet> t;
  for (int k = 0; k < A_ff.outerSize(); ++k)
    for (SpMat::InnerIterator it(A_ff, k); it; ++it)
      t.emplace_back(it.row(), it.col(), it.value());
  for (int k = 0; k < B_f.outerSize(); ++k)
    for (SpMat::InnerIterator it(B_f, k); it; ++it) {
      t.emplace_back(ws.n_uf + it.row(), it.col(), it.value());
      t.emplace_back(it.col(), ws.n_uf + it.row(), it.value());
    }
  for (Index i = 0; i < ws.n_p; ++i) {
    t.emplace_back(ws.n_uf + i, ws.n_uf + ws.n_p, ws.mean_vec(i));
    t.emplace_back(ws.n_uf + ws.n_p, ws.n_uf + i, ws.mean_vec(i));
  }
  SpMat saddle(n, n);
  saddle.setFromTriplets(t.begin(), t.end());
  ws.stokes = std::make_shared<Eigen::SparseLU<SpMat>>();
  ws.stokes->compute(saddle);
  if (ws.stokes->info() != Eigen::Success)
    throw Error("resolvent workspace: Stokes saddle factorization failed");
  return ws;
}

namespace {

struct RealSolution {
  Vec x;
  Vec q;
  double c0 = 0;
};

RealSolution solve_real(const GeneratorBundle& b, const ResolventWorkspace& ws, const Vec& rhs) {
  const SpaceLayout& L = *b.layout;
  const Gram& G = *b.gram;
  const Index m = b.m, nw = b.n_disp;

  Vec ystar = from_reduced(*b.reducer, Vec(rhs.head(m)));
  Vec x0star = rhs.tail(nw);
  Vec ustar_field = L.E_u * ystar;

  // fluid block: enclosed Stokes with boundary data from the interface row
  Vec u_bc = L.E_u.rightCols(L.n_w) * x0star;
  Vec b_f = -(ws.E_f.transpose() * Vec(b.forms->M_f * ustar_field)) -
            (ws.E_f.transpose() * Vec(b.forms->A_f * u_bc));
  Vec b_c = -(b.forms->B * u_bc);
  Vec full = Vec::Zero(ws.n_uf + ws.n_p + 1);
  full.head(ws.n_uf) = b_f;
  full.segment(ws.n_uf, ws.n_p) = b_c;
  Vec sol = ws.stokes->solve(full);
  Vec u_f = sol.head(ws.n_uf);
  Vec q = -sol.segment(ws.n_uf, ws.n_p);  // saddle solves with -q for symmetry

  // the mixed saddle problem for (h0, w0, c0*)
  Vec y_sol(L.n_y);
  y_sol.head(L.n_uf) = u_f;
  y_sol.tail(L.n_w) = x0star;
  Vec F_rows = -(G.M_y * ystar) - (G.A_fy * y_sol) + (G.B_y.transpose() * q);
  Vec F0 = F_rows.tail(nw);
  Vec kF = G.Kw_solver->solve(F0);
  Vec kl = G.Kw_solver->solve(G.ell_w);
  double c0 = -G.ell_w.dot(kF) / G.ell_w.dot(kl);
  Vec x0_sol = kF + c0 * kl;

  RealSolution out;
  out.x = Vec(b.N);
  out.x.head(m) = to_reduced(*b.reducer, y_sol);
  out.x.tail(nw) = x0_sol;
  out.q = q;
  out.c0 = c0;
  return out;
}

}  // namespace

ResolventSolution solve_resolvent_at_zero(const GeneratorBundle& bundle,
                                          const ResolventWorkspace& ws,
                                          const CVec& rhs, double nperp_tol) {
  double rnorm = bundle.norm(rhs);
  if (rnorm == 0.0) {
    ResolventSolution out;
    out.x = CVec::Zero(bundle.N);
    out.q_re = Vec::Zero(ws.n_p);
    out.q_im = Vec::Zero(ws.n_p);
    return out;
  }
  if (std::abs(bundle.ell(rhs)) > nperp_tol * std::max(1.0, rnorm))
    throw Error("solve_resolvent_at_zero: input not in N-perp (ell(Phi*) = " +
                std::to_string(std::abs(bundle.ell(rhs))) + ")");
  RealSolution re = solve_real(bundle, ws, Vec(rhs.real()));
  RealSolution im = solve_real(bundle, ws, Vec(rhs.imag()));
  ResolventSolution out;
  out.x = re.x.cast<Complex>() + Complex(0, 1) * im.x.cast<Complex>();
  out.q_re = re.q;
  out.q_im = im.q;
  out.c0_star = Complex(re.c0, im.c0);
  out.residual = bundle.norm(CVec(bundle.apply(out.x) - rhs)) / rnorm;
  out.bound_ratio = bundle.norm(out.x) / rnorm;
  return out;
}

}  // namespace fsis
