#include "fsis/nullspace.hpp"

namespace fsis {

NullspaceData build_nullvector(const GeneratorBundle& bundle, double alpha) {
  NullspaceData nd;
  nd.alpha = alpha;
  nd.x0 = alpha * bundle.gram->Kw_solver->solve(bundle.gram->ell_w);
  if (bundle.gram->Kw_solver->info() != Eigen::Success)
    throw Error("build_nullvector: singular variational form");
  nd.reduced = Vec::Zero(bundle.N);
  nd.reduced.tail(bundle.n_disp) = nd.x0;
  Vec hat = bundle.hat_from_reduced(nd.reduced);
  nd.h_norm = hat.norm();
  if (nd.h_norm > 0) {
    nd.hat_unit = hat / nd.h_norm;
    nd.gen_residual = (bundle.A_hat * hat).norm() / nd.h_norm;
    nd.adj_residual = (bundle.A_hat.transpose() * hat).norm() / nd.h_norm;
  } else {
    nd.hat_unit = hat;
  }
  return nd;
}

Vec project_Nperp(const GeneratorBundle& bundle, const NullspaceData& nd, const Vec& x) {
  Vec xh = bundle.hat_from_reduced(x);
  xh -= nd.hat_unit.dot(xh) * nd.hat_unit;
  return bundle.reduced_from_hat(xh);
}

CVec project_Nperp(const GeneratorBundle& bundle, const NullspaceData& nd, const CVec& x) {
  CVec xh = bundle.hat_from_reduced(x);
  xh -= nd.hat_unit.cast<Complex>().dot(xh) * nd.hat_unit.cast<Complex>();
  return bundle.reduced_from_hat(xh);
}

}  // namespace fsis
