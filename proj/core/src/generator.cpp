#include "fsis/generator.hpp"

namespace fsis {

Vec DispFactor::apply_R(const Vec& x) const {
  return llt.matrixU() * (llt.permutationP() * x);
}
Vec DispFactor::solve_R(const Vec& b) const {
  Vec t = llt.matrixU().solve(b);
  return llt.permutationPinv() * t;
}
Vec DispFactor::apply_Rt(const Vec& x) const {
  return llt.permutationPinv() * Vec(llt.matrixL() * x);
}
Vec DispFactor::solve_Rt(const Vec& b) const {
  return llt.matrixL().solve(Vec(llt.permutationP() * b));
}

Vec GeneratorBundle::hat_from_reduced(const Vec& x) const {
  Vec xh(N);
  xh.head(m) = x.head(m);
  xh.tail(n_disp) = disp->apply_R(x.tail(n_disp));
  return xh;
}
Vec GeneratorBundle::reduced_from_hat(const Vec& xh) const {
  Vec x(N);
  x.head(m) = xh.head(m);
  x.tail(n_disp) = disp->solve_R(xh.tail(n_disp));
  return x;
}
CVec GeneratorBundle::hat_from_reduced(const CVec& x) const {
  CVec xh(N);
  xh.real() = hat_from_reduced(Vec(x.real()));
  xh.imag() = hat_from_reduced(Vec(x.imag()));
  return xh;
}
CVec GeneratorBundle::reduced_from_hat(const CVec& xh) const {
  CVec x(N);
  x.real() = reduced_from_hat(Vec(xh.real()));
  x.imag() = reduced_from_hat(Vec(xh.imag()));
  return x;
}

MasterState GeneratorBundle::master_from_reduced(const CVec& x) const {
  MasterState ms;
  ms.y = from_reduced(*reducer, CVec(x.head(m)));
  ms.x0 = x.tail(n_disp);
  return ms;
}

CVec GeneratorBundle::reduced_from_master(const MasterState& ms) const {
  CVec x(N);
  x.head(m) = to_reduced(*reducer, ms.y);
  x.tail(n_disp) = ms.x0;
  return x;
}

StateFields GeneratorBundle::fields_from_reduced(const CVec& x) const {
  MasterState ms = master_from_reduced(x);
  return fields_from_master(*layout, ms.y, ms.x0);
}

CVec GeneratorBundle::apply(const CVec& x) const {
  return reduced_from_hat(CVec(A_hat * hat_from_reduced(x)));
}
CVec GeneratorBundle::adjoint_apply(const CVec& x) const {
  return reduced_from_hat(CVec(A_hat.transpose() * hat_from_reduced(x)));
}
Vec GeneratorBundle::apply(const Vec& x) const {
  return reduced_from_hat(Vec(A_hat * hat_from_reduced(x)));
}
Vec GeneratorBundle::adjoint_apply(const Vec& x) const {
  return reduced_from_hat(Vec(A_hat.transpose() * hat_from_reduced(x)));
}

Complex GeneratorBundle::inner(const CVec& x, const CVec& y) const {
  return hat_from_reduced(y).dot(hat_from_reduced(x));
}
double GeneratorBundle::norm(const CVec& x) const { return hat_from_reduced(x).norm(); }
double GeneratorBundle::energy(const CVec& x) const {
  return 0.5 * hat_from_reduced(x).squaredNorm();
}
double GeneratorBundle::dissipation(const CVec& x) const {
  CVec y = from_reduced(*reducer, CVec(x.head(m)));
  return std::abs(quad_form(gram->A_fy, y, y));
}
Complex GeneratorBundle::ell(const CVec& x) const {
  return gram->ell_w.cast<Complex>().dot(CVec(x.tail(n_disp)));
}
double GeneratorBundle::operator_scale() const {
  return A_hat.cwiseAbs().rowwise().sum().maxCoeff();
}

std::shared_ptr<GeneratorBundle> build_generator(std::shared_ptr<const Mesh> mesh,
                                                 std::shared_ptr<const SpaceLayout> layout,
                                                 std::shared_ptr<const FormSet> forms,
                                                 std::shared_ptr<const Gram> gram,
                                                 std::shared_ptr<const LerayReducer> reducer,
                                                 const GeneratorOptions& options) {
  auto bundle = std::make_shared<GeneratorBundle>();
  bundle->mesh = mesh;
  bundle->layout = layout;
  bundle->forms = forms;
  bundle->gram = gram;
  bundle->reducer = reducer;
  bundle->options = options;
  bundle->m = reducer->m;
  bundle->n_disp = layout->n_w;
  bundle->N = bundle->m + bundle->n_disp;

  auto disp = std::make_shared<DispFactor>();
  disp->llt.compute(gram->K_w);
  if (disp->llt.info() != Eigen::Success)
    throw Error("build_generator: singular energy Gram (layout bug)");
  bundle->disp = disp;

  // A_hat = [ -Af_red  -C ; C'  0 ],  C = (R P_w Z)'
  const Index m = bundle->m, nw = bundle->n_disp;
  Mat Af_red = reducer->Z.transpose() * (gram->A_fy * reducer->Z);
  Mat W = layout->P_w * reducer->Z;  // n_w x m
  Mat RW(nw, m);
  for (Index j = 0; j < m; ++j) RW.col(j) = disp->apply_R(W.col(j));

  bundle->A_hat.setZero(bundle->N, bundle->N);
  bundle->A_hat.topLeftCorner(m, m) = -Af_red;
  bundle->A_hat.topRightCorner(m, nw) = -RW.transpose();
  bundle->A_hat.bottomLeftCorner(nw, m) = RW;

  if (options.route == EliminationRoute::ExplicitMaps) {
    // Substitute the explicit pressure maps of the generator block form: for
    // each reduced basis state assemble the weak pressure coupling
    //   <p, div v> - <p nu, v|Gs> + <p nu, phi>
    // tested against the matched velocity tests, and add its projection.
    PressureMaps maps = build_pressure_maps(*mesh, *layout, *forms, options.pressure_bc);
    Mat P_add = Mat::Zero(bundle->N, bundle->N);
    for (Index k = 0; k < bundle->N; ++k) {
      Vec xk = Vec::Zero(bundle->N);
      xk(k) = 1.0;
      Vec xr = bundle->reduced_from_hat(xk);
      Vec y = from_reduced(*reducer, Vec(xr.head(m)));
      Vec x0 = xr.tail(nw);
      StateFields f = fields_from_master(*layout, y.cast<Complex>(), x0.cast<Complex>());
      Vec p = apply_pressure_maps(maps, Vec(f.u.real()), Vec(f.h0.real()), Vec(f.w0.real()));
      Vec g = pressure_coupling(maps, *layout, *gram, p);
      Vec dz = reducer->Z.transpose() * g;  // momentum rows against div-free tests
      Vec col = Vec::Zero(bundle->N);
      col.head(m) = dz;
      P_add.col(k) = col;  // already hat coordinates in the velocity block
    }
    bundle->A_hat += P_add;
  }
  return bundle;
}

Problem build_problem(Mesh mesh, double lambda, double mu, const GeneratorOptions& options) {
  Problem p;
  p.mesh = std::make_shared<Mesh>(std::move(mesh));
  p.layout = std::make_shared<SpaceLayout>(*p.mesh);
  p.forms = std::make_shared<FormSet>(assemble_forms(*p.mesh, *p.layout, lambda, mu));
  p.gram = std::make_shared<Gram>(assemble_gram(*p.layout, *p.forms));
  p.reducer = std::make_shared<LerayReducer>(build_leray(*p.layout, p.gram));
  p.bundle = build_generator(p.mesh, p.layout, p.forms, p.gram, p.reducer, options);
  return p;
}

}  // namespace fsis
