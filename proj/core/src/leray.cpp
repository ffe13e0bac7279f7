#include "fsis/leray.hpp"

#include <Eigen/QR>

namespace fsis {

LerayReducer build_leray(const SpaceLayout& layout, std::shared_ptr<const Gram> gram) {
  LerayReducer red;
  red.gram = gram;
  red.n_free = layout.n_y;
  const Index n_y = layout.n_y, n_p = layout.n_p;

  // kernel of B_y via a pivoted QR of B_y'
  Mat Bt = Mat(gram->B_y).transpose();  // n_y x n_p
  Eigen::ColPivHouseholderQR<Mat> qr(Bt);
  qr.setThreshold(1e-10);
  red.rank_B = qr.rank();
  if (red.rank_B < n_p - 1)
    throw Error("build_leray: divergence constraint rank " + std::to_string(red.rank_B) +
                " deficient beyond the one-dimensional pressure mean (defective element pair?)");
  const Index m = n_y - red.rank_B;
  red.m = m;
  Mat tail = Mat::Zero(n_y, m);
  tail.bottomRows(m).setIdentity();
  Mat K0 = qr.householderQ() * tail;  // Euclidean-orthonormal kernel basis

  // M_y-orthonormalize: Z = K0 * chol(K0' M K0)^-T
  Mat G = K0.transpose() * (gram->M_y * K0);
  Eigen::LLT<Mat> llt(G);
  if (llt.info() != Eigen::Success) throw Error("build_leray: Gram factorization failed");
  Mat Kt = K0.transpose();
  llt.matrixL().solveInPlace(Kt);
  red.Z = Kt.transpose();

  double bz = (gram->B_y * red.Z).cwiseAbs().maxCoeff();
  double bscale = Mat(gram->B_y).cwiseAbs().maxCoeff();
  if (bz > 1e-10 * std::max(1.0, bscale))
    throw Error("build_leray: kernel residual too large: " + std::to_string(bz));

  // pressure Schur complement for the lifting operator
  Mat X(n_y, n_p);
  Mat BtD = Mat(gram->B_y).transpose();
  for (Index j = 0; j < n_p; ++j) X.col(j) = gram->My_solver->solve(BtD.col(j));
  red.schur_llt.compute(Mat(gram->B_y) * X);
  if (red.schur_llt.info() != Eigen::Success)
    throw Error("build_leray: pressure Schur complement not positive definite");
  return red;
}

Vec to_reduced(const LerayReducer& r, const Vec& y) {
  return r.Z.transpose() * (r.gram->M_y * y);
}
CVec to_reduced(const LerayReducer& r, const CVec& y) {
  CVec out(r.m);
  out.real() = to_reduced(r, Vec(y.real()));
  out.imag() = to_reduced(r, Vec(y.imag()));
  return out;
}
Vec from_reduced(const LerayReducer& r, const Vec& z) { return r.Z * z; }
CVec from_reduced(const LerayReducer& r, const CVec& z) {
  CVec out(r.n_free);
  out.real() = r.Z * Vec(z.real());
  out.imag() = r.Z * Vec(z.imag());
  return out;
}

Vec pressure_from_residual(const LerayReducer& r, const Vec& residual) {
  Vec minv_r = r.gram->My_solver->solve(residual);
  return r.schur_llt.solve(r.gram->B_y * minv_r);
}

Mat reduce_to_divfree(const LerayReducer& r, const SpMat& form) {
  if (form.rows() != r.n_free || form.cols() != r.n_free)
    throw Error("reduce_to_divfree: dimension mismatch");
  return r.Z.transpose() * (form * r.Z);
}

}  // namespace fsis
