#include "ftmp/model.hpp"

#include <algorithm>
#include <set>
#include <sstream>
#include <utility>

namespace ftmp {

std::string_view to_string(AgentKind kind) {
  return kind == AgentKind::Kinetic ? "kinetic" : "static";
}

AgentState make_kinetic(int id, RealVec position, RealVec goal) {
  AgentState a;
  a.id = id;
  a.velocity = RealVec::Zero(position.size());
  a.position = std::move(position);
  a.goal = std::move(goal);
  a.kind = AgentKind::Kinetic;
  return a;
}

AgentState make_static(int id, RealVec position) {
  AgentState a;
  a.id = id;
  a.velocity = RealVec::Zero(position.size());
  a.goal = position;
  a.position = std::move(position);
  a.kind = AgentKind::Static;
  return a;
}

namespace {

bool finite(const RealVec& v) { return v.allFinite(); }

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(9);
  os << x;
  return os.str();
}

}  // namespace

std::vector<Violation> validate_config(const WorldConfig& config) {
  std::vector<Violation> out;
  auto add = [&out](std::string invariant, std::vector<int> ids, std::string detail) {
    out.push_back({std::move(invariant), std::move(ids), std::move(detail)});
  };

  const BarrierParams& bp = config.barrier;
  const ControlParams& cp = config.control;
  const double r = config.agent_radius;
  const double R = config.arena_radius;

  if (!(R > 0.0) || !(r > 0.0)) {
    add("positive_radii", {}, "R=" + fmt(R) + " r=" + fmt(r));
  }
  if (!(bp.clearance > 2.0 * r)) {
    add("clearance_exceeds_diameter", {}, "d_c=" + fmt(bp.clearance) + " 2r=" + fmt(2.0 * r));
  }
  if (!(bp.epsilon >= 1.0) || !(1.0 / bp.epsilon < bp.clearance)) {
    add("epsilon_range", {}, "epsilon=" + fmt(bp.epsilon));
  }
  if (!(bp.x0_floor > 0.0)) {
    add("x0_floor_positive", {}, "x0_floor=" + fmt(bp.x0_floor));
  }
  if (!(cp.k1 > 0.0) || !(cp.alpha > 0.0 && cp.alpha < 1.0)) {
    add("control_gains", {}, "k1=" + fmt(cp.k1) + " alpha=" + fmt(cp.alpha));
  }
  if (!(cp.dot_guard_tol > 0.0) || !(cp.grad_zero_tol > 0.0) || !(cp.correction_cap > 0.0)) {
    add("guard_tolerances", {}, "guard tolerances must be positive");
  }

  const int dim = config.dim();
  std::vector<const AgentState*> kinetic;
  int n_static = 0;
  std::set<int> ids;
  for (const AgentState& a : config.agents) {
    if (!ids.insert(a.id).second) add("unique_ids", {a.id}, "duplicate id");
    if (a.position.size() != dim || a.velocity.size() != dim || a.goal.size() != dim) {
      add("dimension", {a.id}, "expected dim " + std::to_string(dim));
      continue;
    }
    if (!finite(a.position) || !finite(a.velocity) || !finite(a.goal)) {
      add("finite_components", {a.id}, "non-finite component");
      continue;
    }
    if (a.is_static()) {
      ++n_static;
      if (!a.velocity.isZero(0.0)) add("static_at_rest", {a.id}, "static agent has velocity");
      if (a.goal != a.position) add("static_goal", {a.id}, "static goal differs from position");
    } else {
      kinetic.push_back(&a);
      if (!(a.position.norm() < R - r)) {
        add("containment", {a.id}, "|x|=" + fmt(a.position.norm()) + " >= R-r=" + fmt(R - r));
      }
    }
  }

  if (static_cast<int>(kinetic.size()) != config.kinetic_count) {
    add("kinetic_count", {},
        "N=" + std::to_string(config.kinetic_count) + " roster has " + std::to_string(kinetic.size()));
  }
  if (n_static != config.boundary_count) {
    add("boundary_count", {},
        "M=" + std::to_string(config.boundary_count) + " roster has " + std::to_string(n_static));
  }

  const auto valid = [dim](const AgentState& a) {
    return a.position.size() == dim && a.goal.size() == dim && finite(a.position) && finite(a.goal);
  };
  for (std::size_t i = 0; i < config.agents.size(); ++i) {
    const AgentState& a = config.agents[i];
    if (!valid(a)) continue;
    for (std::size_t j = i + 1; j < config.agents.size(); ++j) {
      const AgentState& b = config.agents[j];
      if (!valid(b) || (a.is_static() && b.is_static())) continue;
      const double d = (a.position - b.position).norm();
      if (!(d > bp.clearance)) {
        add("pairwise_distance", {a.id, b.id}, "distance " + fmt(d) + " <= d_c");
      }
      if (!a.is_static() && !b.is_static()) {
        const double g = (a.goal - b.goal).norm();
        if (!(g > bp.clearance)) add("goal_distance", {a.id, b.id}, "goal distance " + fmt(g) + " <= d_c");
      }
    }
  }
  return out;
}

}  // namespace ftmp
