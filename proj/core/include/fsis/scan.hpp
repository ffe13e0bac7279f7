#pragma once

#include "fsis/nullspace.hpp"

namespace fsis {

struct ScanResult {
  Vec beta;
  Vec norms;                  // ||(i beta - A)^-1||_H per grid point
  std::vector<char> singular; // shift numerically on the spectrum (reported, not fatal)
  double max_norm = 0.0;
  bool restricted = false;
};

/// Resolvent-norm probe along the imaginary axis. One Hessenberg reduction is
/// shared by the whole grid; each point costs O(N^2). With `restrict_nperp`
/// the scan acts on the orthogonal complement of the zero eigenspace (the
/// zero mode is deflected off the axis), so the grid may pass through 0.
ScanResult scan_imaginary_axis(const GeneratorBundle& bundle, const Vec& beta_grid,
                               bool restrict_nperp, const NullspaceData* nd);

}  // namespace fsis
