#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "ftmp/sim.hpp"
#include "ftmp/world.hpp"

namespace ftmp::app {

/// Everything needed to reproduce one run. Serialized as an INI file with
/// sections [scenario], [world], [barrier], [control], [sim], [output].
struct RunSettings {
  std::string label = "example1";
  int agents = 4;  ///< only used by the "random" scenario
  std::uint64_t seed = 1;

  std::optional<double> arena_radius;
  std::optional<double> agent_radius;
  std::optional<double> clearance;
  std::optional<double> epsilon;
  std::optional<double> k1;
  std::optional<double> alpha;
  std::optional<double> dot_guard_tol;
  std::optional<double> grad_zero_tol;
  std::optional<double> correction_cap;

  std::optional<double> dt;  ///< defaults to the scenario's step
  double t_max = 50.0;
  double conv_tol = 1e-2;
  bool abort_on_collision = false;

  int sample_every = 10;
  std::vector<double> snapshots{0.0, 0.2, 0.8, 1.0};  ///< fractions of the final time
};

/// Reads key=value pairs; unknown keys are rejected. Throws ftmp::Error
/// (InvalidArgument) on malformed content and std::runtime_error on I/O failure.
RunSettings load_settings(const std::filesystem::path& path, RunSettings base = {});
void save_settings(const RunSettings& settings, const std::filesystem::path& path);

/// Builds the scenario and applies parameter overrides, re-validating the result.
Scenario build_scenario(const RunSettings& settings);
SimConfig sim_config(const RunSettings& settings, const Scenario& scenario);

std::vector<double> parse_fraction_list(const std::string& text);

}  // namespace ftmp::app
