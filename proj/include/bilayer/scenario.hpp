#pragma once

#include <string>
#include <utility>
#include <vector>

#include "bilayer/grid.hpp"
#include "bilayer/rheology.hpp"
#include "bilayer/stepper.hpp"

namespace bilayer {

enum class RunMode { simulate, stability, sweep };

/// One batch job parsed from a config file. Initial data are per-field
/// constants plus cosine perturbations amp * cos(n pi x / L).
struct Scenario {
  double length = 1.0;
  int nodes = 0;

  FluidParams params;

  double f_const = 0.0, g_const = 0.0;
  std::vector<std::pair<int, double>> f_modes, g_modes;

  StepConfig step;
  double t_end = 0.0;

  RunMode mode = RunMode::simulate;
  std::string output_dir;
  int diagnostics_stride = 1;  ///< diagnostics row every k accepted steps
  int profile_stride = 0;      ///< 0: initial and final profiles only
  int stability_modes = 8;

  std::string sweep_parameter;        ///< one of the FluidParams keys
  std::vector<double> sweep_values;
};

/// Parses and fully validates the line-oriented "key = value" format with
/// [grid], [params], [initial], [stepping], [output] sections and '#'
/// comments. Unknown or duplicate keys are errors; messages carry
/// "path:line:". Throws std::runtime_error.
Scenario parse_scenario(const std::string& path);

/// Builds the initial State on the scenario grid. Throws std::runtime_error
/// if any initial height is not strictly positive.
State initial_state(const Scenario& scenario);

Grid scenario_grid(const Scenario& scenario);

/// Executes the scenario, writing CSV outputs into output_dir.
/// Returns the process exit code: 0 ok, 2 rupture, 3 blowup, 4 step failure
/// (config errors throw before this point and map to 1 in the CLI).
int run(const Scenario& scenario);

}  // namespace bilayer
