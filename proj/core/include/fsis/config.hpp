#pragma once

#include <cstdint>
#include <map>
#include <string>

#include "fsis/types.hpp"

namespace fsis {

/// Run configuration. File format: TOML with flat tables per section;
/// command-line flags override file values. Seeds are mandatory for any
/// sampled initial data (a default is part of the reference config).
struct Config {
  struct Geometry {
    std::string kind = "annulus_disc";
    int resolution = 8;
  } geometry;
  struct Material {
    double lambda = 1.0;
    double mu = 1.0;
  } material;
  std::string pressure_bc = "dirichlet";
  struct Solver {
    double linear_tol = 1e-10;
    double null_tol = 1e-8;
    double gap_tol = 1e-6;
    double assumption_tol = 1e-3;
  } solver;
  struct Evolution {
    double T = 200.0;
    double dt = 0.05;
    std::string scheme = "midpoint";
  } evolution;
  struct Output {
    std::string directory = "out";
    std::string formats = "json,csv";
  } output;
  struct Random {
    std::uint64_t seed = 20240801;
  } random;

  /// Throws ConfigError listing every violated field.
  void validate() const;
  /// Stable canonical serialization (drives the config hash).
  std::string canonical() const;
  std::uint64_t hash() const;
};

Config load_config(const std::string& path);
void save_config(const Config& cfg, const std::string& path);

/// Minimal TOML-subset reader: [section] headers, key = value with integers,
/// floats, booleans and double-quoted strings, # comments.
std::map<std::string, std::map<std::string, std::string>> parse_toml(const std::string& text,
                                                                     const std::string& origin);

std::uint64_t fnv1a(const std::string& bytes);

}  // namespace fsis
