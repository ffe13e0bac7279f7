#include "fsis/scan.hpp"

#include <cmath>

#include <Eigen/Householder>

namespace fsis {

namespace {

// Givens QR of the complex upper-Hessenberg matrix (i beta I - H); solves
// with the matrix and its adjoint in O(n^2).
class HessenbergSolver {
 public:
  HessenbergSolver(const Mat& H, Complex shift) : n_(H.rows()), R_(n_, n_) {
    R_ = (-H).cast<Complex>();
    for (Index i = 0; i < n_; ++i) R_(i, i) += shift;
    cs_.resize(n_ - 1);
    sn_.resize(n_ - 1);
    for (Index j = 0; j < n_ - 1; ++j) {
      Complex a = R_(j, j), b = R_(j + 1, j);
      double r = std::hypot(std::abs(a), std::abs(b));
      if (r == 0.0) { cs_[j] = 1.0; sn_[j] = Complex(0.0); continue; }
      cs_[j] = std::abs(a) / r;
      Complex alpha = (std::abs(a) == 0.0) ? Complex(1.0) : a / std::abs(a);
      sn_[j] = alpha * std::conj(b) / r;
      // rotate rows j, j+1: G = [c, s; -conj(s), c] with c real
      for (Index col = j; col < n_; ++col) {
        Complex t1 = R_(j, col), t2 = R_(j + 1, col);
        R_(j, col) = cs_[j] * t1 + sn_[j] * t2;
        R_(j + 1, col) = -std::conj(sn_[j]) * t1 + cs_[j] * t2;
      }
    }
    double dmax = R_.diagonal().cwiseAbs().maxCoeff();
    dmin_rel_ = R_.diagonal().cwiseAbs().minCoeff() / std::max(dmax, 1e-300);
  }

  bool singular() const { return dmin_rel_ < 1e-13; }

  // solve (i beta - H) x = b
  CVec solve(const CVec& b) const {
    CVec y = b;
    for (Index j = 0; j < n_ - 1; ++j) {
      Complex t1 = y(j), t2 = y(j + 1);
      y(j) = cs_[j] * t1 + sn_[j] * t2;
      y(j + 1) = -std::conj(sn_[j]) * t1 + cs_[j] * t2;
    }
    return R_.triangularView<Eigen::Upper>().solve(y);
  }

  // solve (i beta - H)^H x = b
  CVec solve_adjoint(const CVec& b) const {
    CVec y = R_.triangularView<Eigen::Upper>().adjoint().solve(b);
    for (Index j = n_ - 2; j >= 0; --j) {
      Complex t1 = y(j), t2 = y(j + 1);
      y(j) = cs_[j] * t1 - sn_[j] * t2;
      y(j + 1) = std::conj(sn_[j]) * t1 + cs_[j] * t2;
    }
    return y;
  }

 private:
  Index n_;
  CMat R_;
  std::vector<double> cs_;
  std::vector<Complex> sn_;
  double dmin_rel_ = 1.0;
};

}  // namespace

ScanResult scan_imaginary_axis(const GeneratorBundle& bundle, const Vec& beta_grid,
                               bool restrict_nperp, const NullspaceData* nd) {
  if (restrict_nperp && nd == nullptr)
    throw Error("scan_imaginary_axis: N-perp restriction requires the nullspace data");
  if (!restrict_nperp) {
    for (Index i = 0; i < beta_grid.size(); ++i)
      if (beta_grid(i) == 0.0)
        throw Error("scan_imaginary_axis: beta = 0 requires the N-perp restriction flag");
  }
  const Index n = bundle.N;
  Mat A = bundle.A_hat;
  if (restrict_nperp) A += nd->hat_unit * nd->hat_unit.transpose();  // zero mode -> +1

  Eigen::HessenbergDecomposition<Mat> hd(A);
  Mat H = hd.matrixH();
  Mat Q = hd.matrixQ();

  CVec phi;
  if (restrict_nperp) phi = (Q.transpose() * nd->hat_unit).cast<Complex>();
  auto project = [&](CVec& v) {
    if (restrict_nperp) v -= phi.dot(v) * phi;
  };

  ScanResult out;
  out.restricted = restrict_nperp;
  out.beta = beta_grid;
  out.norms.setZero(beta_grid.size());
  out.singular.assign(static_cast<size_t>(beta_grid.size()), 0);

  CVec v0(n);
  for (Index i = 0; i < n; ++i) v0(i) = Complex(std::sin(1.7 * double(i) + 0.4), std::cos(0.9 * double(i)));

  for (Index g = 0; g < beta_grid.size(); ++g) {
    HessenbergSolver solver(H, Complex(0.0, beta_grid(g)));
    if (solver.singular()) {
      out.singular[static_cast<size_t>(g)] = 1;
      out.norms(g) = std::numeric_limits<double>::infinity();
      out.max_norm = std::numeric_limits<double>::infinity();
      continue;
    }
    // power iteration on R^H R for sigma_max(R), working in Hessenberg coords
    CVec v = v0;
    project(v);
    v.normalize();
    double s2 = 0.0, prev = -1.0;
    for (int it = 0; it < 400; ++it) {
      CVec w = solver.solve(v);
      project(w);
      CVec u = solver.solve_adjoint(w);
      project(u);
      s2 = u.norm();
      v = u / s2;
      if (it >= 8 && std::abs(s2 - prev) < 1e-4 * s2) break;
      prev = s2;
    }
    out.norms(g) = std::sqrt(s2);
    out.max_norm = std::max(out.max_norm, out.norms(g));
  }
  return out;
}

}  // namespace fsis
