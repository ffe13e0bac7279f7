#pragma once

#include "fsis/generator.hpp"

namespace fsis {

/// The constructively built zero eigenvector phi_N = [0, h0(alpha), 0,
/// w0(alpha), 0]: K_w x0 = alpha * ell_w. For every discrete state,
/// <Phi, phi_N>_H = alpha * ell(Phi) holds exactly, so N-perp is
/// characterized by the vanishing of the interface normal moment.
struct NullspaceData {
  double alpha = 1.0;
  Vec x0;             // displacement coefficients
  Vec reduced;        // stacked [0; x0]
  Vec hat_unit;       // unit vector in energy coordinates
  double h_norm = 0;
  double gen_residual = 0;
  double adj_residual = 0;
};

NullspaceData build_nullvector(const GeneratorBundle& bundle, double alpha);

Vec project_Nperp(const GeneratorBundle& bundle, const NullspaceData& nd, const Vec& x);
CVec project_Nperp(const GeneratorBundle& bundle, const NullspaceData& nd, const CVec& x);

}  // namespace fsis
