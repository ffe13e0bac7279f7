#pragma once

#include <memory>

#include "fsis/forms.hpp"
#include "fsis/layout.hpp"

namespace fsis {

/// Null-space (Leray) reduction of the divergence constraint on the coupled
/// velocity level: Z spans {y : B_y y = 0}, i.e. velocity states
/// (u, h1, w1) with u discretely divergence free, u|Gf = 0 and the shared
/// interface trace. Columns are orthonormal in the velocity energy Gram M_y,
/// so the reduced Gram is the identity.
struct LerayReducer {
  Mat Z;            // n_y x m
  Index rank_B = 0; // computed rank of the constraint
  Index n_free = 0; // n_y
  Index m = 0;      // dim of the divergence-free subspace
  // pressure lifting: p solves (B M^-1 B') p = B M^-1 r for a momentum residual r
  Eigen::LLT<Mat> schur_llt;
  std::shared_ptr<const Gram> gram;
};

LerayReducer build_leray(const SpaceLayout& layout, std::shared_ptr<const Gram> gram);

/// Coordinates of a divergence-free master velocity y (z = Z' M_y y).
Vec to_reduced(const LerayReducer& r, const Vec& y);
CVec to_reduced(const LerayReducer& r, const CVec& y);
Vec from_reduced(const LerayReducer& r, const Vec& z);
CVec from_reduced(const LerayReducer& r, const CVec& z);

/// Recover the pressure from a master momentum residual r = B_y' p.
Vec pressure_from_residual(const LerayReducer& r, const Vec& residual);

/// Congruence reduction of a bilinear form on master velocity coordinates.
Mat reduce_to_divfree(const LerayReducer& r, const SpMat& form);

}  // namespace fsis
