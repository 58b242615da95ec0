#pragma once

#include "mgmc/scenario.hpp"
#include "mgmc/solver.hpp"

#include <map>
#include <string>
#include <vector>

namespace mgmc {

/// System size, transmit power and propagation setup of one experiment.
struct ScenarioConfig {
  int num_tx_antennas = 4;
  int num_tiles = 100;
  std::vector<int> group_sizes = {2, 2};
  double pt_dbm = 30.0;
  GeometryConfig geometry;
  LinkBudget budget;

  double pt_watts() const { return std::pow(10.0, (pt_dbm - 30.0) / 10.0); }
  void validate() const;
};

/// Scenario + solver settings plus the sweep grids, with every default
/// matching the baked-in simulation setup. Parsed from a flat key=value
/// file; later --set overrides win.
struct ExperimentConfig {
  ScenarioConfig scenario;
  SolverOptions solver;
  std::vector<double> sweep_pt_dbm = {10.0, 15.0, 20.0, 25.0, 30.0};
  std::vector<int> sweep_m = {25, 100, 225, 400};

  /// Canonical flat key=value rendering, used for CSV metadata; two equal
  /// configs render to identical strings.
  std::string echo() const;
};

/// Flat "key = value" lines; '#' starts a comment; unknown keys are errors.
std::map<std::string, std::string> parse_config_text(const std::string& text);
std::map<std::string, std::string> parse_config_file(const std::string& path);

/// "key=value" strings from the command line, applied over the file values.
void apply_override(std::map<std::string, std::string>& values, const std::string& assignment);

ExperimentConfig build_experiment_config(const std::map<std::string, std::string>& values);

}  // namespace mgmc
