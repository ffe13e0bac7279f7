#pragma once

#include <optional>

#include "fsis/config.hpp"
#include "fsis/reports.hpp"
#include "fsis/resolvent.hpp"

namespace fsis {

/// Command-line overrides; set fields take precedence over the config file.
struct CommandOverrides {
  std::optional<std::string> kind;
  std::optional<int> resolution;
  std::optional<double> lambda, mu;
  std::optional<std::string> pressure_bc;
  std::optional<std::string> output_dir;
  std::optional<std::uint64_t> seed;
  // spectrum
  std::optional<Index> n_eigs;
  std::optional<double> shift_re, shift_im;
  bool dense = false;
  std::optional<std::string> scan;  // "min:max:steps"
  // check-assumption
  std::optional<Index> modes;
  std::optional<double> tol;
  // resolvent / evolve
  std::optional<std::string> in_state;
  std::optional<double> T, dt;
  std::optional<std::string> scheme, init;
  bool project_initial = false;
  std::optional<Index> snapshot_every;
  // mesh
  std::optional<std::string> mesh_out;
};

Config apply_overrides(Config cfg, const CommandOverrides& ov);

struct CheckResult {
  std::string name;
  bool pass = false;
  Json measured;
  Json tolerance;
  std::string invariant;  // module invariant the check traces back to
};

struct VerificationSuite {
  std::vector<CheckResult> checks;
  bool pass = true;
  Json to_json() const;
};

/// The ordered verification checklist (nullspace-dim, nperp-characterization,
/// dissipativity, spectrum-axis, assumption, resolvent-roundtrip, decay,
/// adjoint-null). Deterministic given the config seed.
VerificationSuite run_verification(const Config& cfg);

/// Dispatch one CLI command. Returns the process exit code:
/// 0 = pass, 1 = check failure, 2 = usage/config error.
int run_command(const Config& cfg, const std::string& command, const CommandOverrides& ov);

/// Operator norm of the inverse of the generator restricted to N-perp
/// (the discrete bounded-inverse constant).
double nperp_inverse_norm(const GeneratorBundle& bundle, const NullspaceData& nd);

}  // namespace fsis
