#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "ftmp/controller.hpp"
#include "ftmp/model.hpp"
#include "ftmp/world.hpp"

namespace ftmp {

struct SimConfig {
  double dt = 1e-3;
  double t_max = 50.0;
  double conv_tol = 1e-2;
  bool abort_on_collision = false;
};

struct StepResult {
  std::vector<AgentState> roster;
  /// One entry per roster slot; static agents get a zero command and Guard::None.
  std::vector<ControlDecision> decisions;
  std::vector<int> neighbor_ids;  ///< -1 for static agents
};

/// Explicit Euler step x <- x + dt v with every command computed from the same
/// pre-step snapshot (neighbour velocities are the previous commands).
StepResult step(std::span<const AgentState> roster, const BarrierParams& barrier,
                const ControlParams& control, double dt);

enum class EventKind { Collision, Converged, Guard, NeighborSwitch, ContainmentBreach };

std::string_view to_string(EventKind kind);

struct Event {
  double time = 0.0;
  std::size_t step = 0;
  EventKind kind = EventKind::Converged;
  int agent_id = -1;
  std::string detail;
};

/// Controller state of one kinetic agent at one sample.
struct AgentSample {
  int neighbor_id = -1;
  Guard guard = Guard::None;
  double lyapunov_value = 0.0;
  double grad_norm = 0.0;
};

struct TrajectoryRecord {
  double dt = 0.0;
  BarrierParams barrier;
  ControlParams control;
  double arena_radius = 0.0;
  std::vector<double> times;
  /// Kinetic agents only, in roster order; static agents never move and are
  /// kept once in static_agents.
  std::vector<std::vector<AgentState>> states;
  std::vector<AgentState> static_agents;
  std::vector<std::vector<AgentSample>> samples;  ///< decision taken at each sample
  std::vector<double> pairwise_min_distance;      ///< over kinetic pairs (inf if N < 2)
  std::vector<double> min_clearance;              ///< kinetic agent vs any other agent
  std::vector<Event> events;
  std::vector<std::optional<double>> convergence_time;  ///< per kinetic agent
  bool aborted = false;
  /// id -> slot: k >= 0 indexes the kinetic list, k < 0 is static slot -1-k.
  std::unordered_map<int, long> slot_of;

  std::size_t size() const { return times.size(); }
  std::size_t kinetic_count() const { return states.empty() ? 0 : states.front().size(); }
  bool all_converged() const;
  /// Full roster (kinetic then static) at sample k.
  std::vector<AgentState> roster_at(std::size_t k) const;
  /// Position of any agent id at sample k.
  const RealVec& position_of(int id, std::size_t k) const;
};

/// Integrates until every kinetic agent is within conv_tol of its goal or
/// t_max is reached. Collisions and containment breaches are recorded as
/// events; with abort_on_collision the run stops at the first collision.
TrajectoryRecord run(const Scenario& scenario, const SimConfig& config);

}  // namespace ftmp
