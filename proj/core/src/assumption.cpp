#include "fsis/assumption.hpp"

#include <cmath>

namespace fsis {

namespace {

std::vector<Index> interior_structure_dofs(const SpaceLayout& layout) {
  std::vector<char> on_iface(static_cast<size_t>(layout.n_wnodes), 0);
  for (Index i = 0; i < layout.n_inodes; ++i)
    on_iface[static_cast<size_t>(layout.iface_to_solid_node[static_cast<size_t>(i)])] = 1;
  std::vector<Index> interior;
  for (Index n = 0; n < layout.n_wnodes; ++n)
    if (!on_iface[static_cast<size_t>(n)])
      for (int c = 0; c < layout.dim; ++c) interior.push_back(n * layout.dim + c);
  return interior;
}

SpMat restrict_to(const SpMat& A, const std::vector<Index>& dofs) {
  std::vector<Index> pos(static_cast<size_t>(A.rows()), -1);
  for (size_t i = 0; i < dofs.size(); ++i) pos[static_cast<size_t>(dofs[i])] = static_cast<Index>(i);
  std::vector<Triplet> t;
  for (int k = 0; k < A.outerSize(); ++k)
    for (SpMat::InnerIterator it(A, k); it; ++it) {
      Index r = pos[static_cast<size_t>(it.row())], c = pos[static_cast<size_t>(it.col())];
      if (r >= 0 && c >= 0) t.emplace_back(r, c, it.value());
    }
  SpMat out(static_cast<Index>(dofs.size()), static_cast<Index>(dofs.size()));
  out.setFromTriplets(t.begin(), t.end());
  return out;
}

}  // namespace

ClampedModes clamped_lame_modes(const SpaceLayout& layout, const FormSet& forms, Index n_modes) {
  if (n_modes < 1) throw Error("clamped_lame_modes: n_modes must be >= 1");
  auto interior = interior_structure_dofs(layout);
  if (n_modes > static_cast<Index>(interior.size()))
    throw Error("clamped_lame_modes: requested more modes than interior dofs");
  Mat A0 = Mat(restrict_to(forms.A_s, interior));
  Mat M0 = Mat(restrict_to(forms.M_s, interior));
  Eigen::GeneralizedSelfAdjointEigenSolver<Mat> ges(A0, M0);
  if (ges.info() != Eigen::Success) throw Error("clamped_lame_modes: eigensolver non-convergence");
  ClampedModes out;
  out.beta2 = ges.eigenvalues().head(n_modes);
  out.vectors = Mat::Zero(layout.n_w, n_modes);
  for (Index k = 0; k < n_modes; ++k)
    for (size_t i = 0; i < interior.size(); ++i)
      out.vectors(interior[i], k) = ges.eigenvectors()(static_cast<Index>(i), k);
  return out;
}

Index clamped_count_below(const SpaceLayout& layout, const FormSet& forms, double tau) {
  auto interior = interior_structure_dofs(layout);
  SpMat S = restrict_to(forms.A_s, interior) - SpMat(tau * restrict_to(forms.M_s, interior));
  Eigen::SimplicialLDLT<SpMat> ldlt(S);
  if (ldlt.info() != Eigen::Success) throw Error("clamped_count_below: factorization failed");
  Index count = 0;
  for (Index i = 0; i < ldlt.vectorD().size(); ++i)
    if (ldlt.vectorD()(i) < 0) ++count;
  return count;
}

Vec weak_traction(const SpaceLayout& layout, const FormSet& forms, const Vec& w, double beta2) {
  Vec r = layout.T_w0 * Vec(forms.A_s * w - beta2 * (forms.M_s * w));
  Eigen::SimplicialLDLT<SpMat> mg(forms.M_G);
  return mg.solve(r);
}

AssumptionReport check_assumption(const Mesh& mesh, const SpaceLayout& layout,
                                  const FormSet& forms, Index n_modes, double assumption_tol) {
  AssumptionReport rep;
  rep.tol = assumption_tol;
  ClampedModes modes = clamped_lame_modes(layout, forms, n_modes);
  InterfaceFrame frame = interface_frame(mesh);
  const double glen = frame.total_measure;
  Eigen::SimplicialLDLT<SpMat> mg(forms.M_G);
  for (Index k = 0; k < n_modes; ++k) {
    Vec r = layout.T_w0 * Vec(forms.A_s * modes.vectors.col(k) -
                              modes.beta2(k) * (forms.M_s * modes.vectors.col(k)));
    Vec t = mg.solve(r);
    double tn2 = t.dot(forms.M_G * t);
    double tnu = forms.N_G.dot(t);  // <t, nu>_GammaS, exact facet quadrature
    AssumptionMode m;
    m.beta2 = modes.beta2(k);
    m.c = -tnu / glen;
    double dn2 = std::max(0.0, tn2 + 2.0 * m.c * tnu + m.c * m.c * glen);
    m.delta = (tn2 > 0) ? std::sqrt(dn2 / tn2) : 0.0;
    rep.modes.push_back(m);
    if (m.delta <= assumption_tol && rep.violated_at < 0) {
      rep.violated_at = static_cast<int>(k);
      rep.holds = false;
    }
  }
  return rep;
}

}  // namespace fsis
