#include "fsis/state.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace fsis {

StateFields fields_from_master(const SpaceLayout& layout, const CVec& y, const CVec& x0) {
  if (y.size() != layout.n_y || x0.size() != layout.n_w)
    throw Error("fields_from_master: dimension mismatch (expected y " +
                std::to_string(layout.n_y) + ", x0 " + std::to_string(layout.n_w) + ")");
  auto mul = [](const SpMat& A, const CVec& x) { return spmul(A, x); };
  StateFields f;
  f.u = mul(layout.E_u, y);
  f.h1 = mul(layout.T_h1, y);
  f.w1 = mul(layout.P_w, y);
  f.w0 = x0;
  f.h0 = mul(layout.T_w0, x0);
  return f;
}

MasterState master_from_fields(const SpaceLayout& layout, const Gram& gram,
                               const StateFields& phi, double tol) {
  const int d = layout.dim;
  if (phi.u.size() != layout.n_u || phi.h0.size() != layout.n_h || phi.h1.size() != layout.n_h ||
      phi.w0.size() != layout.n_w || phi.w1.size() != layout.n_w)
    throw Error("master_from_fields: field dimensions do not match the layout (expected u " +
                std::to_string(layout.n_u) + ", h " + std::to_string(layout.n_h) + ", w " +
                std::to_string(layout.n_w) + ")");
  const double scale = std::max({phi.u.norm(), phi.h1.norm(), phi.w0.norm(), phi.w1.norm(),
                                 phi.h0.norm(), 1e-300});
  auto check = [&](double err, const std::string& what) {
    if (err > tol * scale)
      throw Error("master_from_fields: " + what + " violated (residual " + std::to_string(err) +
                  ")");
  };
  check((phi.h0 - spmul(layout.T_w0, phi.w0)).norm(), "displacement trace h0 = w0|Gs");
  MasterState ms;
  ms.x0 = phi.w0;
  ms.y = CVec::Zero(layout.n_y);
  for (Index dof = 0; dof < layout.n_u; ++dof) {
    Index col = layout.fluid_dof_to_master[static_cast<size_t>(dof)];
    if (col >= 0) ms.y(col) = phi.u(dof);
  }
  ms.y.tail(layout.n_w) = phi.w1;
  // verify the velocity-level identifications against the given fields
  StateFields back = fields_from_master(layout, ms.y, ms.x0);
  check((back.u - phi.u).norm(), "velocity trace u|Gs = h1 (and u|Gf = 0)");
  check((back.h1 - phi.h1).norm(), "interface velocity h1 = w1|Gs");
  check(spmul(gram.B_y, ms.y).norm(), "discrete divergence-freeness B u = 0");
  (void)d;
  return ms;
}

Complex energy_inner_product(const StateFields& phi, const StateFields& psi,
                             const FormSet& forms) {
  if (phi.u.size() != psi.u.size() || phi.w0.size() != psi.w0.size() ||
      phi.h0.size() != psi.h0.size())
    throw Error("energy_inner_product: layout mismatch");
  return quad_form(forms.M_f, phi.u, psi.u) + quad_form(forms.S_G, phi.h0, psi.h0) +
         quad_form(forms.M_G, phi.h1, psi.h1) + quad_form(forms.A_s, phi.w0, psi.w0) +
         quad_form(forms.M_s, phi.w1, psi.w1);
}

Complex master_inner_product(const Gram& gram, const MasterState& a, const MasterState& b) {
  return quad_form(gram.M_y, a.y, b.y) + quad_form(gram.K_w, a.x0, b.x0);
}

double master_norm(const Gram& gram, const MasterState& a) {
  return std::sqrt(std::abs(master_inner_product(gram, a, a)));
}

namespace {
void write_block(std::ofstream& out, const char* name, const CVec& v) {
  out << name << "," << v.size() << "\n";
  char buf[128];
  for (Index i = 0; i < v.size(); ++i) {
    std::snprintf(buf, sizeof(buf), "%.17g,%.17g", v(i).real(), v(i).imag());
    out << buf << "\n";
  }
}
}  // namespace

void save_state(const StateFields& phi, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("save_state: cannot open '" + path + "'");
  out << "field,count\n";
  write_block(out, "u", phi.u);
  write_block(out, "h0", phi.h0);
  write_block(out, "h1", phi.h1);
  write_block(out, "w0", phi.w0);
  write_block(out, "w1", phi.w1);
}

StateFields load_state(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("load_state: cannot open '" + path + "'");
  std::string line;
  if (!std::getline(in, line) || line != "field,count")
    throw Error("load_state: '" + path + "' is not a state file");
  StateFields f;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto comma = line.find(',');
    if (comma == std::string::npos) throw Error("load_state: malformed block header: " + line);
    std::string name = line.substr(0, comma);
    Index count = std::stoll(line.substr(comma + 1));
    CVec v(count);
    for (Index i = 0; i < count; ++i) {
      if (!std::getline(in, line)) throw Error("load_state: truncated block '" + name + "'");
      double re = 0, im = 0;
      if (std::sscanf(line.c_str(), "%lg,%lg", &re, &im) < 1)
        throw Error("load_state: malformed value line: " + line);
      v(i) = Complex(re, im);
    }
    if (name == "u") f.u = v;
    else if (name == "h0") f.h0 = v;
    else if (name == "h1") f.h1 = v;
    else if (name == "w0") f.w0 = v;
    else if (name == "w1") f.w1 = v;
    else throw Error("load_state: unknown block '" + name + "'");
  }
  return f;
}

}  // namespace fsis
