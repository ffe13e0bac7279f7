#pragma once

#include <memory>

#include "fsis/leray.hpp"
#include "fsis/pressure.hpp"
#include "fsis/state.hpp"

namespace fsis {

enum class EliminationRoute { Leray, ExplicitMaps };

struct GeneratorOptions {
  PressureBC pressure_bc = PressureBC::Dirichlet;
  EliminationRoute route = EliminationRoute::Leray;
};

/// Square root of K_w from a sparse Cholesky with permutation: K = R' R.
/// Mapping x -> R x turns the displacement energy into the Euclidean norm.
struct DispFactor {
  Eigen::SimplicialLLT<SpMat> llt;
  Vec apply_R(const Vec& x) const;        // R x
  Vec solve_R(const Vec& b) const;        // R^-1 b
  Vec apply_Rt(const Vec& x) const;       // R' x
  Vec solve_Rt(const Vec& b) const;       // R'^-1 b
};

/// Discrete semigroup generator on the pressure-eliminated, trace-coupled
/// state space. Reduced coordinates x = [z; x0] (divergence-free velocity
/// coordinates, structure displacement coefficients); the dense matrix A_hat
/// represents the generator in the coordinates where the energy Gram is the
/// identity. Immutable after build; apply/adjoint_apply are reentrant.
class GeneratorBundle {
 public:
  Index m = 0, n_disp = 0, N = 0;  // velocity dims, displacement dims, total
  Mat A_hat;                        // N x N
  GeneratorOptions options;

  std::shared_ptr<const Mesh> mesh;
  std::shared_ptr<const SpaceLayout> layout;
  std::shared_ptr<const FormSet> forms;
  std::shared_ptr<const Gram> gram;
  std::shared_ptr<const LerayReducer> reducer;
  std::shared_ptr<const DispFactor> disp;

  // coordinate changes
  Vec hat_from_reduced(const Vec& x) const;
  Vec reduced_from_hat(const Vec& xh) const;
  CVec hat_from_reduced(const CVec& x) const;
  CVec reduced_from_hat(const CVec& xh) const;
  MasterState master_from_reduced(const CVec& x) const;
  CVec reduced_from_master(const MasterState& ms) const;
  StateFields fields_from_reduced(const CVec& x) const;

  // operator action in reduced coordinates
  CVec apply(const CVec& x) const;
  CVec adjoint_apply(const CVec& x) const;
  Vec apply(const Vec& x) const;
  Vec adjoint_apply(const Vec& x) const;

  Complex inner(const CVec& x, const CVec& y) const;  // energy inner product
  double norm(const CVec& x) const;
  double energy(const CVec& x) const;                 // 1/2 <x,x>_H
  double dissipation(const CVec& x) const;            // u' A_f u >= 0
  Complex ell(const CVec& x) const;                   // interface normal moment of h0
  double operator_scale() const;                       // ||A_hat||_inf
};

std::shared_ptr<GeneratorBundle> build_generator(std::shared_ptr<const Mesh> mesh,
                                                 std::shared_ptr<const SpaceLayout> layout,
                                                 std::shared_ptr<const FormSet> forms,
                                                 std::shared_ptr<const Gram> gram,
                                                 std::shared_ptr<const LerayReducer> reducer,
                                                 const GeneratorOptions& options = {});

/// Everything needed to run one configuration, built in dependency order.
struct Problem {
  std::shared_ptr<const Mesh> mesh;
  std::shared_ptr<const SpaceLayout> layout;
  std::shared_ptr<const FormSet> forms;
  std::shared_ptr<const Gram> gram;
  std::shared_ptr<const LerayReducer> reducer;
  std::shared_ptr<GeneratorBundle> bundle;
};

Problem build_problem(Mesh mesh, double lambda, double mu, const GeneratorOptions& options = {});

}  // namespace fsis
