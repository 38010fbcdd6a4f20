#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ftmp/model.hpp"

namespace ftmp {

struct Scenario {
  WorldConfig config;
  std::string label;
  double default_dt = 1e-3;  ///< integration step associated with the scenario (s)
};

/// M = ceil(2 pi R / d_c) static agents evenly spaced on the circle of radius
/// R in the first two coordinates, ids first_id .. first_id + M - 1.
/// Throws InvalidGeometry unless R > r > 0 and d_c > 2r.
std::vector<AgentState> build_boundary_ring(double arena_radius, double agent_radius,
                                            double clearance, int first_id, int dim = 2);

/// Index into roster of the agent closest to self, skipping self's own id.
/// Ties go to the lowest id. Throws EmptyRoster if no other agent exists.
std::size_t nearest_neighbor_index(const AgentState& self, std::span<const AgentState> roster);
const AgentState& nearest_neighbor(const AgentState& self, std::span<const AgentState> roster);

/// Scenarios of the two published experiments: "example1" (4 agents,
/// dt = 1e-3) and "example2" (20 agents, dt = 2e-3). Placement is seeded:
/// starts on a circle of 0.6 R, goals antipodal on 0.3 R.
Scenario preset(std::string_view label, std::uint64_t seed = 1);

/// Preset geometry with an arbitrary agent count.
Scenario crossing_scenario(int kinetic_count, std::uint64_t seed, double dt,
                           std::string label = "crossing");

struct RandomScenarioOptions {
  double arena_radius = 98.0;
  double agent_radius = 0.99;
  BarrierParams barrier;
  ControlParams control{.k1 = 20.0};
  int dim = 2;
  double dt = 1e-3;
  int attempts_per_agent = 2000;
};

/// Rejection-samples starts and goals inside radius R - r - d_c with pairwise
/// separation above 2 d_c. Throws PlacementFailure when the disk cannot hold
/// that many points or sampling gives up.
Scenario random_scenario(int kinetic_count, std::uint64_t seed,
                         const RandomScenarioOptions& options = {});

/// Applies x -> Q x to every position, goal and velocity.
Scenario transform_scenario(const Scenario& scenario, const Eigen::MatrixXd& rotation);

/// Names accepted by preset().
const std::vector<std::string>& preset_labels();

}  // namespace ftmp
