#include "fsis/spectrum.hpp"

#include <algorithm>
#include <cmath>

namespace fsis {

namespace {

void finalize_report(const GeneratorBundle& bundle, SpectrumReport& rep) {
  const Index n = rep.eigenvalues.size();
  rep.residuals.resize(n);
  for (Index k = 0; k < n; ++k) {
    if (rep.vectors_hat.cols() == n && rep.vectors_hat.rows() == bundle.N) {
      CVec v = rep.vectors_hat.col(k);
      CVec av(bundle.N);
      av.real() = bundle.A_hat * v.real().matrix();
      av.imag() = bundle.A_hat * v.imag().matrix();
      rep.residuals(k) = (av - rep.eigenvalues(k) * v).norm() / v.norm();
    } else {
      rep.residuals(k) = std::numeric_limits<double>::quiet_NaN();
    }
  }
  rep.near_zero_count = 0;
  rep.near_axis_count = 0;
  double maxre = -std::numeric_limits<double>::infinity();
  double gap = std::numeric_limits<double>::infinity();
  for (Index k = 0; k < n; ++k) {
    Complex ev = rep.eigenvalues(k);
    if (std::abs(ev) < rep.gap_tol) {
      ++rep.near_zero_count;
      continue;
    }
    if (std::abs(ev.real()) < rep.gap_tol) ++rep.near_axis_count;
    maxre = std::max(maxre, ev.real());
    gap = std::min(gap, std::abs(ev.real()));
  }
  rep.abscissa_excl_zero = maxre;
  rep.gap = gap;
}

// k-step Arnoldi with the shift-inverted operator op(v) = (A - sigma)^-1 v
SpectrumReport arnoldi_shift_invert(const GeneratorBundle& bundle, const Mat& A, Index n_eigs,
                                    Complex sigma, double gap_tol) {
  const Index n = A.rows();
  Index k = std::min<Index>(n, std::max<Index>(2 * n_eigs + 16, 36));
  CMat As = A.cast<Complex>();
  for (Index i = 0; i < n; ++i) As(i, i) -= sigma;
  Eigen::PartialPivLU<CMat> lu;
  // retry with a perturbed shift if sigma sits on the spectrum
  Complex sig = sigma;
  for (int attempt = 0; attempt < 3; ++attempt) {
    lu.compute(As);
    double dmin = lu.matrixLU().diagonal().cwiseAbs().minCoeff();
    double dmax = lu.matrixLU().diagonal().cwiseAbs().maxCoeff();
    if (dmin > 1e-14 * std::max(1.0, dmax)) break;
    Complex bump(1e-3 * std::max(1.0, std::abs(sig)), 0.0);
    for (Index i = 0; i < n; ++i) As(i, i) -= bump;
    sig += bump;
  }

  CMat V(n, k + 1);
  CMat H = CMat::Zero(k + 1, k);
  CVec v0 = CVec::Ones(n);
  for (Index i = 0; i < n; ++i) v0(i) = Complex(std::cos(0.7 * double(i)), std::sin(0.3 * double(i)));
  V.col(0) = v0 / v0.norm();
  Index steps = k;
  for (Index j = 0; j < k; ++j) {
    CVec w = lu.solve(V.col(j));
    for (int pass = 0; pass < 2; ++pass) {  // modified Gram-Schmidt with reorth
      for (Index i = 0; i <= j; ++i) {
        Complex h = V.col(i).dot(w);
        if (pass == 0) H(i, j) = h;
        else H(i, j) += h;
        w -= h * V.col(i);
      }
    }
    double nw = w.norm();
    H(j + 1, j) = nw;
    if (nw < 1e-12) { steps = j + 1; break; }
    V.col(j + 1) = w / nw;
  }
  Eigen::ComplexEigenSolver<CMat> ces(H.topLeftCorner(steps, steps));
  // Ritz values: lambda = sigma + 1/theta, keep the n_eigs closest to sigma
  std::vector<Index> order(static_cast<size_t>(steps));
  for (Index i = 0; i < steps; ++i) order[static_cast<size_t>(i)] = i;
  std::sort(order.begin(), order.end(), [&](Index a, Index b) {
    return std::abs(ces.eigenvalues()(a)) > std::abs(ces.eigenvalues()(b));
  });
  Index keep = std::min<Index>(n_eigs, steps);
  SpectrumReport rep;
  rep.dense = false;
  rep.shift = sigma;
  rep.gap_tol = gap_tol;
  rep.eigenvalues.resize(keep);
  rep.vectors_hat.resize(n, keep);
  for (Index i = 0; i < keep; ++i) {
    Complex theta = ces.eigenvalues()(order[static_cast<size_t>(i)]);
    rep.eigenvalues(i) = sig + 1.0 / theta;
    CVec y = ces.eigenvectors().col(order[static_cast<size_t>(i)]);
    CVec v = V.leftCols(steps) * y;
    rep.vectors_hat.col(i) = v / v.norm();
  }
  return rep;
}

}  // namespace

SpectrumReport compute_spectrum(const GeneratorBundle& bundle, Index n_eigs, Complex shift,
                                bool dense, double gap_tol) {
  if (dense) {
    if (bundle.N > 6000)
      throw Error("compute_spectrum: dense mode limited to dimension 6000, got " +
                  std::to_string(bundle.N));
    Eigen::EigenSolver<Mat> es(bundle.A_hat);
    if (es.info() != Eigen::Success) throw Error("compute_spectrum: dense eigensolver failed");
    SpectrumReport rep;
    rep.dense = true;
    rep.gap_tol = gap_tol;
    rep.eigenvalues = es.eigenvalues();
    rep.vectors_hat = es.eigenvectors();
    finalize_report(bundle, rep);
    return rep;
  }
  if (n_eigs < 1 || n_eigs > bundle.N)
    throw Error("compute_spectrum: n_eigs must be in [1, dimension]");
  SpectrumReport rep = arnoldi_shift_invert(bundle, bundle.A_hat, n_eigs, shift, gap_tol);
  finalize_report(bundle, rep);
  return rep;
}

SpectrumReport compute_spectrum_deflated(const GeneratorBundle& bundle, const NullspaceData& nd,
                                         Index n_eigs, Complex shift, double gap_tol) {
  Mat A = bundle.A_hat + nd.hat_unit * nd.hat_unit.transpose();
  SpectrumReport rep = arnoldi_shift_invert(bundle, A, n_eigs, shift, gap_tol);
  // residuals against the true generator; drop the artificial +1 mode
  std::vector<Index> keep;
  for (Index i = 0; i < rep.eigenvalues.size(); ++i)
    if (std::abs(rep.eigenvalues(i) - 1.0) > 1e-6) keep.push_back(i);
  CVec ev(static_cast<Index>(keep.size()));
  CMat vecs(bundle.N, static_cast<Index>(keep.size()));
  for (size_t i = 0; i < keep.size(); ++i) {
    ev(static_cast<Index>(i)) = rep.eigenvalues(keep[i]);
    vecs.col(static_cast<Index>(i)) = rep.vectors_hat.col(keep[i]);
  }
  rep.eigenvalues = ev;
  rep.vectors_hat = vecs;
  finalize_report(bundle, rep);
  return rep;
}

AxisVerdict verify_no_imaginary_point_spectrum(const GeneratorBundle& bundle,
                                               const SpectrumReport& report, double tol) {
  AxisVerdict verdict;
  verdict.tol = tol;
  for (Index k = 0; k < report.eigenvalues.size(); ++k) {
    Complex ev = report.eigenvalues(k);
    if (std::abs(ev.real()) < tol && std::abs(ev) >= tol) {
      verdict.pass = false;
      AxisVerdict::Offender off;
      off.index = k;
      off.lambda = ev;
      off.u_norm = off.h1_norm = off.h0_norm = std::numeric_limits<double>::quiet_NaN();
      if (report.vectors_hat.cols() == report.eigenvalues.size() &&
          report.vectors_hat.rows() == bundle.N) {
        CVec x = bundle.reduced_from_hat(CVec(report.vectors_hat.col(k)));
        StateFields f = bundle.fields_from_reduced(x);
        double nrm = bundle.norm(x);
        off.u_norm = std::sqrt(std::abs(quad_form(bundle.forms->M_f, f.u, f.u))) / nrm;
        off.h1_norm = std::sqrt(std::abs(quad_form(bundle.forms->M_G, f.h1, f.h1))) / nrm;
        off.h0_norm = std::sqrt(std::abs(quad_form(bundle.forms->S_G, f.h0, f.h0))) / nrm;
      }
      verdict.offenders.push_back(off);
    }
  }
  return verdict;
}

}  // namespace fsis
