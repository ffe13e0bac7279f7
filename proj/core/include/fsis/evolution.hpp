#pragma once

#include "fsis/nullspace.hpp"

namespace fsis {

enum class Scheme { BackwardEuler, Midpoint };
Scheme parse_scheme(const std::string& name);
std::string to_string(Scheme s);

/// Per-step record of the energy balance: E = (1/2)<Phi,Phi>_H, the viscous
/// dissipation rate D = u' A_f u, the N-perp defect |ell(Phi)|/||Phi||, and
/// the five component norms (their squares sum to 2E).
struct EnergyTrace {
  Vec t, E, D, ldef;
  Mat comp;  // steps+1 x 5: fluid, iface kinetic, iface elastic, solid kinetic, solid elastic
  Vec final_state;  // reduced coordinates
  Index steps = 0;
};

/// One-shot factorized stepper for repeated steps with fixed dt.
struct StepOperator {
  Scheme scheme = Scheme::Midpoint;
  double dt = 0.0;
  Eigen::PartialPivLU<Mat> lu;  // I - theta dt A_hat
  Mat rhs_op;                   // midpoint: I + dt/2 A_hat; backward Euler: I
  Vec advance_hat(const Vec& xh) const;
};
StepOperator build_step(const GeneratorBundle& bundle, double dt, Scheme scheme);

/// Single step in reduced coordinates (factors on each call).
Vec step(const GeneratorBundle& bundle, const Vec& x, double dt, Scheme scheme);

EnergyTrace evolve(const GeneratorBundle& bundle, const Vec& x0, double T, double dt,
                   Scheme scheme, bool project_each_step = false,
                   const NullspaceData* nd = nullptr);

/// Samplers for initial data (H-normalized; projected to N-perp on demand).
Vec sample_random_state(const GeneratorBundle& bundle, uint64_t seed);
Vec sample_pluck_state(const GeneratorBundle& bundle, double center_angle = 0.0,
                       double width = 0.5);

}  // namespace fsis
