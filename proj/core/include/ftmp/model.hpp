#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace ftmp {

/// Position, velocity or goal of one agent. All vectors in one scenario share
/// the same dimension (2 for the planar presets).
using RealVec = Eigen::VectorXd;

enum class AgentKind { Kinetic, Static };

std::string_view to_string(AgentKind kind);

struct AgentState {
  int id = 0;
  RealVec position;
  RealVec velocity;  ///< last commanded velocity (m/s); always zero for static agents
  RealVec goal;      ///< equals position for static agents
  AgentKind kind = AgentKind::Kinetic;

  bool is_static() const { return kind == AgentKind::Static; }
};

AgentState make_kinetic(int id, RealVec position, RealVec goal);
AgentState make_static(int id, RealVec position);

/// Parameters of the goal/clearance barrier.
struct BarrierParams {
  double clearance = 2.0;   ///< d_c, minimum center distance (m)
  double epsilon = 1.0e4;   ///< 1/epsilon is the denominator value at contact
  double x0_floor = 1e-12;  ///< smallest admissible denominator before evaluation faults
};

/// Parameters of the finite-time feedback law.
struct ControlParams {
  double k1 = 1.0;
  double alpha = 1.0 / 3.0;     ///< in (0, 1)
  double dot_guard_tol = 1e-6;  ///< relative threshold on |g . v_j| / (|g| |v_j|)
  double grad_zero_tol = 1e-9;
  double correction_cap = 0.5;  ///< bound on |coefficient| of the neighbor-velocity term
};

struct WorldConfig {
  double arena_radius = 98.0;  ///< R
  double agent_radius = 0.99;  ///< r
  int boundary_count = 0;      ///< M static agents on the arena circle
  int kinetic_count = 0;       ///< N
  std::vector<AgentState> agents;
  BarrierParams barrier;
  ControlParams control;
  std::uint64_t seed = 0;

  int dim() const { return agents.empty() ? 2 : static_cast<int>(agents.front().position.size()); }
};

struct Violation {
  std::string invariant;
  std::vector<int> agent_ids;
  std::string detail;

  bool operator==(const Violation&) const = default;
};

/// Checks every precondition the controller and simulator rely on. Returns an
/// empty list when the configuration is admissible. Pairwise clearance is only
/// required for pairs involving a kinetic agent: neighbouring boundary agents
/// sit closer than d_c by construction.
std::vector<Violation> validate_config(const WorldConfig& config);

}  // namespace ftmp
