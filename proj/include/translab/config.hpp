#pragma once

// Flat key=value experiment configuration with a typed schema.  Unknown keys
// are errors; values carry documented units.  Round-trips byte-identically.

#include <cstdint>
#include <map>
#include <string>

namespace translab {

struct ExperimentConfig {
  std::string experiment = "default";
  std::uint64_t seed = 1;
  std::string out_dir = "out";

  // grid parameters
  double disk_radius = 20.0;  // [length]
  double grid_h = 0.05;       // [length]

  // barrier/norm constants
  double theta = 0.1;   // [1]
  double ell = 1.0;     // [1]
  double h0 = 20.0;     // [height]
  double tau0 = -3.0;   // [1]
  int k = 4;            // [1]
  double alpha = 0.5;   // [1]
  double mu = 1.0;      // [1]
  double delta = 0.1;   // [1] cutoff exponent for tau-scaled truncation
  double cutoff_radius = 4.25;  // [1] fixed truncation radius for the flow

  // solver tolerances
  double newton_tol = 1e-10;     // [1]
  double ode_step = 1e-3;        // [1] relative RK4 step for the a2 ODE
  int galerkin_K = 6;            // [1]
  int galerkin_steps = 300;      // [1]

  // anisotropic boundary data a x1^2 + b r^2
  double aniso_a = 0.2;  // [1/length]
  double aniso_b = 0.5;  // [1/length]

  bool csv_only = false;
  bool dry_run = false;

  std::string serialize() const;
  static ExperimentConfig parse_file(const std::string& path);
  static ExperimentConfig parse_text(const std::string& text);
  void validate() const;
  std::uint64_t hash() const;  // FNV-1a of the canonical serialization
};

}  // namespace translab
