// fsispectra: finite-element simulation and spectral verification of the
// multilayered structure / Stokes-fluid interaction system.
//
// Usage: fsispectra <command> [--config path] [flags]
// Commands: mesh, assemble, nullspace, spectrum, check-assumption, resolvent,
// evolve, verify. Exit codes: 0 pass, 1 check failure, 2 usage/config error.

#include <cstdio>
#include <string>

#include <CLI11.hpp>

#include "fsis/pipeline.hpp"

int main(int argc, char** argv) {
  CLI::App app{"multilayered structure-Stokes interaction: simulate and verify"};
  app.require_subcommand(1);

  std::string config_path;
  fsis::CommandOverrides ov;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--config", config_path, "TOML configuration file");
    cmd->add_option("--kind", [&](const CLI::results_t& r) { ov.kind = r[0]; return true; },
                    "geometry kind (annulus_disc | box_in_box)");
    cmd->add_option("--resolution",
                    [&](const CLI::results_t& r) { ov.resolution = std::stoi(r[0]); return true; },
                    "mesh resolution (>= 4)");
    cmd->add_option("--lambda",
                    [&](const CLI::results_t& r) { ov.lambda = std::stod(r[0]); return true; },
                    "Lame first parameter");
    cmd->add_option("--mu", [&](const CLI::results_t& r) { ov.mu = std::stod(r[0]); return true; },
                    "shear modulus");
    cmd->add_option("--pressure-bc",
                    [&](const CLI::results_t& r) { ov.pressure_bc = r[0]; return true; },
                    "pressure map boundary condition (dirichlet | robin)");
    cmd->add_option("--output-dir",
                    [&](const CLI::results_t& r) { ov.output_dir = r[0]; return true; },
                    "output directory");
    cmd->add_option("--seed",
                    [&](const CLI::results_t& r) { ov.seed = std::stoull(r[0]); return true; },
                    "random seed");
  };

  auto* mesh = app.add_subcommand("mesh", "generate the reference geometry");
  add_common(mesh);
  mesh->add_option("--out", [&](const CLI::results_t& r) { ov.mesh_out = r[0]; return true; },
                   "mesh output path");

  add_common(app.add_subcommand("assemble", "emit the energy Gram and generator blocks"));
  add_common(app.add_subcommand("nullspace", "construct the zero eigenvector"));

  auto* spectrum = app.add_subcommand("spectrum", "compute eigenvalues and resolvent scans");
  add_common(spectrum);
  spectrum->add_option("--n-eigs",
                       [&](const CLI::results_t& r) { ov.n_eigs = std::stoll(r[0]); return true; },
                       "number of eigenvalues (shift-invert mode)");
  spectrum->add_option("--shift",
                       [&](const CLI::results_t& r) { ov.shift_re = std::stod(r[0]); return true; },
                       "real shift for shift-invert");
  spectrum->add_option("--shift-im",
                       [&](const CLI::results_t& r) { ov.shift_im = std::stod(r[0]); return true; },
                       "imaginary shift for shift-invert");
  spectrum->add_flag("--dense", ov.dense, "dense full eigendecomposition");
  spectrum->add_option("--scan", [&](const CLI::results_t& r) { ov.scan = r[0]; return true; },
                       "imaginary-axis scan min:max:steps");

  auto* assume = app.add_subcommand("check-assumption", "clamped-Lame traction defects");
  add_common(assume);
  assume->add_option("--modes",
                     [&](const CLI::results_t& r) { ov.modes = std::stoll(r[0]); return true; },
                     "number of clamped modes");
  assume->add_option("--tol", [&](const CLI::results_t& r) { ov.tol = std::stod(r[0]); return true; },
                     "assumption tolerance");

  auto* resolvent = app.add_subcommand("resolvent", "solve A Phi = Phi* on N-perp");
  add_common(resolvent);
  resolvent->add_option("--in", [&](const CLI::results_t& r) { ov.in_state = r[0]; return true; },
                        "input state file");

  auto* evolve = app.add_subcommand("evolve", "time-integrate dPhi/dt = A Phi");
  add_common(evolve);
  evolve->add_option("--T", [&](const CLI::results_t& r) { ov.T = std::stod(r[0]); return true; },
                     "final time");
  evolve->add_option("--dt", [&](const CLI::results_t& r) { ov.dt = std::stod(r[0]); return true; },
                     "time step");
  evolve->add_option("--scheme", [&](const CLI::results_t& r) { ov.scheme = r[0]; return true; },
                     "midpoint | backward_euler");
  evolve->add_option("--init", [&](const CLI::results_t& r) { ov.init = r[0]; return true; },
                     "initial data: random | pluck | file");
  evolve->add_option("--in", [&](const CLI::results_t& r) { ov.in_state = r[0]; return true; },
                     "state file for --init file");
  evolve->add_flag("--project-initial", ov.project_initial, "project initial data to N-perp");
  evolve->add_option("--snapshot-every",
                     [&](const CLI::results_t& r) { ov.snapshot_every = std::stoll(r[0]); return true; },
                     "write a state snapshot every k steps");

  add_common(app.add_subcommand("verify", "run the full verification checklist"));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    fsis::Config cfg;
    if (!config_path.empty()) cfg = fsis::load_config(config_path);
    cfg = fsis::apply_overrides(cfg, ov);
    std::string command = app.get_subcommands().front()->get_name();
    return fsis::run_command(cfg, command, ov);
  } catch (const fsis::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
