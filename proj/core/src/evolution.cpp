#include "fsis/evolution.hpp"

#include <cmath>
#include <random>

namespace fsis {

Scheme parse_scheme(const std::string& name) {
  if (name == "backward_euler") return Scheme::BackwardEuler;
  if (name == "midpoint") return Scheme::Midpoint;
  throw ConfigError("scheme must be 'backward_euler' or 'midpoint', got '" + name + "'");
}
std::string to_string(Scheme s) {
  return s == Scheme::BackwardEuler ? "backward_euler" : "midpoint";
}

Vec StepOperator::advance_hat(const Vec& xh) const {
  if (scheme == Scheme::BackwardEuler) return lu.solve(xh);
  return lu.solve(Vec(rhs_op * xh));
}

StepOperator build_step(const GeneratorBundle& bundle, double dt, Scheme scheme) {
  if (!(dt > 0)) throw Error("build_step: dt must be positive");
  StepOperator op;
  op.scheme = scheme;
  op.dt = dt;
  const double theta = (scheme == Scheme::Midpoint) ? 0.5 : 1.0;
  Mat M1 = Mat::Identity(bundle.N, bundle.N) - theta * dt * bundle.A_hat;
  op.lu.compute(M1);
  if (scheme == Scheme::Midpoint)
    op.rhs_op = Mat::Identity(bundle.N, bundle.N) + 0.5 * dt * bundle.A_hat;
  return op;
}

Vec step(const GeneratorBundle& bundle, const Vec& x, double dt, Scheme scheme) {
  StepOperator op = build_step(bundle, dt, scheme);
  return bundle.reduced_from_hat(op.advance_hat(bundle.hat_from_reduced(x)));
}

namespace {

void record(const GeneratorBundle& b, const Vec& xh, Index n, EnergyTrace& tr) {
  tr.E(n) = 0.5 * xh.squaredNorm();
  Vec x = b.reduced_from_hat(xh);
  tr.D(n) = b.dissipation(x.cast<Complex>());
  double nrm = xh.norm();
  tr.ldef(n) = (nrm > 0) ? std::abs(b.ell(x.cast<Complex>())) / nrm : 0.0;
  MasterState ms = b.master_from_reduced(x.cast<Complex>());
  StateFields f = fields_from_master(*b.layout, ms.y, ms.x0);
  tr.comp(n, 0) = std::abs(quad_form(b.forms->M_f, f.u, f.u));
  tr.comp(n, 1) = std::abs(quad_form(b.forms->M_G, f.h1, f.h1));
  tr.comp(n, 2) = std::abs(quad_form(b.forms->S_G, f.h0, f.h0));
  tr.comp(n, 3) = std::abs(quad_form(b.forms->M_s, f.w1, f.w1));
  tr.comp(n, 4) = std::abs(quad_form(b.forms->A_s, f.w0, f.w0));
}

}  // namespace

EnergyTrace evolve(const GeneratorBundle& bundle, const Vec& x0, double T, double dt,
                   Scheme scheme, bool project_each_step, const NullspaceData* nd) {
  if (!(T > 0) || !(dt > 0) || dt >= T) throw Error("evolve: need 0 < dt < T");
  if (project_each_step && nd == nullptr)
    throw Error("evolve: per-step projection requires the nullspace data");
  const Index steps = static_cast<Index>(std::llround(T / dt));
  StepOperator op = build_step(bundle, dt, scheme);

  EnergyTrace tr;
  tr.steps = steps;
  tr.t.resize(steps + 1);
  tr.E.resize(steps + 1);
  tr.D.resize(steps + 1);
  tr.ldef.resize(steps + 1);
  tr.comp.resize(steps + 1, 5);

  Vec xh = bundle.hat_from_reduced(x0);
  Vec phi_hat;
  if (project_each_step) phi_hat = nd->hat_unit;
  tr.t(0) = 0.0;
  record(bundle, xh, 0, tr);
  for (Index n = 1; n <= steps; ++n) {
    xh = op.advance_hat(xh);
    if (project_each_step) xh -= phi_hat.dot(xh) * phi_hat;
    tr.t(n) = n * dt;
    record(bundle, xh, n, tr);
    if (!std::isfinite(tr.E(n)))
      throw Error("evolve: NaN detected at step " + std::to_string(n));
  }
  tr.final_state = bundle.reduced_from_hat(xh);
  return tr;
}

Vec sample_random_state(const GeneratorBundle& bundle, uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> dist;
  Vec xh(bundle.N);
  for (Index i = 0; i < bundle.N; ++i) xh(i) = dist(rng);
  xh.normalize();
  return bundle.reduced_from_hat(xh);
}

Vec sample_pluck_state(const GeneratorBundle& bundle, double center_angle, double width) {
  const SpaceLayout& L = *bundle.layout;
  InterfaceFrame frame = interface_frame(*bundle.mesh);
  NodalNormals nn = interface_nodal_normals(*bundle.mesh, frame);
  Vec x0 = Vec::Zero(L.n_w);
  for (size_t k = 0; k < nn.vertex_ids.size(); ++k) {
    Index inode = L.iface_node_of_vertex[static_cast<size_t>(nn.vertex_ids[k])];
    Vec pos = L.iface_node_coords.row(inode).transpose();
    double theta = std::atan2(pos(1), pos(0)) - center_angle;
    while (theta > kPi) theta -= 2 * kPi;
    while (theta < -kPi) theta += 2 * kPi;
    double bump = std::exp(-std::pow(theta / width, 2));
    for (int c = 0; c < L.dim; ++c)
      x0(L.iface_to_solid_node[static_cast<size_t>(inode)] * L.dim + c) +=
          bump * nn.normal(static_cast<Index>(k), c);
  }
  Vec x = Vec::Zero(bundle.N);
  x.tail(bundle.n_disp) = x0;
  double nrm = bundle.hat_from_reduced(x).norm();
  if (nrm > 0) x /= nrm;
  return x;
}

}  // namespace fsis
