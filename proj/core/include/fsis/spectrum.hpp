#pragma once

#include "fsis/nullspace.hpp"

namespace fsis {

struct SpectrumReport {
  CVec eigenvalues;
  Vec residuals;       // ||A v - lambda v||_H / ||v||_H
  CMat vectors_hat;    // eigenvectors in energy coordinates (may be empty)
  double gap_tol = 1e-6;
  Index near_zero_count = 0;          // |lambda| < gap_tol
  Index near_axis_count = 0;          // |Re| < gap_tol but |lambda| >= gap_tol
  double abscissa_excl_zero = 0.0;    // max Re over |lambda| >= gap_tol
  double gap = 0.0;                   // min |Re| over |lambda| >= gap_tol
  bool dense = false;
  Complex shift{0.0, 0.0};
};

/// Dense full eigendecomposition when `dense` (dimension capped at 6000),
/// else shift-invert Arnoldi for the n_eigs eigenvalues nearest the shift.
SpectrumReport compute_spectrum(const GeneratorBundle& bundle, Index n_eigs, Complex shift,
                                bool dense, double gap_tol = 1e-6);

/// Shift-invert Arnoldi for the generator with the zero mode deflected to +1
/// (so a shift of 0 targets the smallest nonzero eigenvalues).
SpectrumReport compute_spectrum_deflated(const GeneratorBundle& bundle, const NullspaceData& nd,
                                         Index n_eigs, Complex shift, double gap_tol = 1e-6);

struct AxisVerdict {
  bool pass = true;
  double tol = 1e-6;
  struct Offender {
    Index index;
    Complex lambda;
    // proof-chain magnitudes of the offending eigenvector, relative to its norm
    double u_norm, h1_norm, h0_norm;
  };
  std::vector<Offender> offenders;  // near-axis, non-zero modes
};

/// PASS iff every eigenvalue with |Re| < tol also has |lambda| < tol. For
/// near-axis eigenvectors the proof-chain component norms (u, h1, h0) are
/// reported; nonvanishing structure blocks are discretization findings, not
/// crashes.
AxisVerdict verify_no_imaginary_point_spectrum(const GeneratorBundle& bundle,
                                               const SpectrumReport& report, double tol);

}  // namespace fsis
