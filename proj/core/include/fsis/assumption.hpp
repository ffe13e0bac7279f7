#pragma once

#include "fsis/forms.hpp"
#include "fsis/layout.hpp"

namespace fsis {

/// Clamped Lame eigenmodes  -div sigma(w) + w = beta^2 w,  w|GammaS = 0,
/// with weak tractions t_k and the best constant-normal fit
/// c_k = argmin ||t_k + c nu||_{GammaS}. The normalized defect
/// delta_k = ||t_k + c_k nu|| / ||t_k|| in [0, 1] measures how far mode k is
/// from solving the overdetermined eigenvalue problem; delta_k below the
/// tolerance flags a near-violation of the spectral assumption.
struct AssumptionMode {
  double beta2 = 0;
  double c = 0;
  double delta = 0;
};

struct AssumptionReport {
  std::vector<AssumptionMode> modes;
  double tol = 1e-3;
  bool holds = true;
  int violated_at = -1;  // first k with delta_k <= tol, or -1
};

/// Clamped eigenpairs: beta2 values ascending and full-space eigenvectors
/// (zero trace), M_s-normalized.
struct ClampedModes {
  Vec beta2;
  Mat vectors;  // n_w x n_modes
};
ClampedModes clamped_lame_modes(const SpaceLayout& layout, const FormSet& forms, Index n_modes);

/// Count of clamped eigenvalues below a threshold by Sylvester inertia
/// (LDLT of A - tau M), independent of the eigensolver.
Index clamped_count_below(const SpaceLayout& layout, const FormSet& forms, double tau);

/// Weak traction of a structure field relative to the clamped eigenvalue
/// beta2: <t, trace(v)> = <sigma(w), eps(v)> + (1 - beta2) <w, v>.
Vec weak_traction(const SpaceLayout& layout, const FormSet& forms, const Vec& w, double beta2);

AssumptionReport check_assumption(const Mesh& mesh, const SpaceLayout& layout,
                                  const FormSet& forms, Index n_modes, double assumption_tol);

}  // namespace fsis
