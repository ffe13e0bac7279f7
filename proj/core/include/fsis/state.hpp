#pragma once

#include <random>
#include <string>

#include "fsis/forms.hpp"
#include "fsis/layout.hpp"

namespace fsis {

/// Field-level coefficients of a state [u, h0, h1, w0, w1]. Complex scalars
/// throughout; evolution works on the real restriction.
struct StateFields {
  CVec u, h0, h1, w0, w1;
};

/// Master (trace-constrained) coefficients: y the velocity level
/// [free fluid dofs; structure velocity], x0 the displacement level.
struct MasterState {
  CVec y, x0;
};

StateFields fields_from_master(const SpaceLayout& layout, const CVec& y, const CVec& x0);

/// Inverse of fields_from_master. Verifies the energy-space membership
/// (shared traces, essential data, B u = 0) within `tol` relative and throws
/// otherwise.
MasterState master_from_fields(const SpaceLayout& layout, const Gram& gram,
                               const StateFields& phi, double tol = 1e-8);

/// The (Hilbert) energy inner product on field coefficients:
///   <u,ut> + <grad_G h0, grad_G h0t> + <h1,h1t> + <sigma(w0),eps(w0t)>
///   + <w0,w0t> + <w1,w1t>,
/// conjugate-linear in the second argument.
Complex energy_inner_product(const StateFields& phi, const StateFields& psi, const FormSet& forms);

Complex master_inner_product(const Gram& gram, const MasterState& a, const MasterState& b);
double master_norm(const Gram& gram, const MasterState& a);

void save_state(const StateFields& phi, const std::string& path);
StateFields load_state(const std::string& path);

}  // namespace fsis
