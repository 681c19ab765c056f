#pragma once

#include <cstdint>
#include <string>

#include "stratwave/background.hpp"
#include "stratwave/continuation.hpp"
#include "stratwave/reduced_model.hpp"

namespace stratwave {

struct ProfileSpec {
  std::string lower, upper;            // expressions in y (dimensional)
  std::string lower_file, upper_file;  // two-column tables, used when set
};

struct NumericsConfig {
  int nq = 161;
  int np_minus = 65;
  int np_plus = 65;
  double L = 0.0;             // 0 selects the default from the decay rate
  double length_factor = 60.0;
  double epsilon = 0.05;
  double F = 0.0;             // if > 0, overrides epsilon for `solve`
  double tol = 1e-10;
  int max_iter = 50;
  SeedSign seed_sign = SeedSign::elevation;
  int height_intervals = 1024;
  double ds0 = 2e-3, ds_min = 1e-7, ds_max = 5e-2;
  double stop_min_hp = 0.05;
  double stop_max_hp = 20.0;
  int max_points = 400;
  bool regrid = true;
  int spectrum_count = 5;
  unsigned long seed = 12345;  // for randomized utilities
};

struct RunConfig {
  FluidParameters fluid;
  double P_atm = 0.0;
  ProfileSpec density, shear;
  NumericsConfig numerics;
  std::string source;  // path the config was read from
};

RunConfig load_config(const std::string& path);
RunConfig parse_config(const std::string& text, const std::string& base_dir = ".");
void validate(const RunConfig& cfg);

// Effective configuration with every default materialized, INI syntax.
std::string echo_config(const RunConfig& cfg);
// FNV-1a of the background sections of the effective configuration (file contents included).
std::uint64_t background_hash(const RunConfig& cfg);
std::string hash_string(std::uint64_t h);

StratifiedBackground build_background(const RunConfig& cfg);
BranchOptions branch_options(const RunConfig& cfg);

}  // namespace stratwave
