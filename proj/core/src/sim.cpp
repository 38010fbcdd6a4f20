#include "ftmp/sim.hpp"

#include <cmath>
#include <limits>
#include <set>
#include <string>
#include <utility>

#include "ftmp/error.hpp"

namespace ftmp {

std::string_view to_string(EventKind kind) {
  switch (kind) {
    case EventKind::Collision: return "collision";
    case EventKind::Converged: return "converged";
    case EventKind::Guard: return "guard";
    case EventKind::NeighborSwitch: return "neighbor_switch";
    case EventKind::ContainmentBreach: return "containment_breach";
  }
  return "unknown";
}

StepResult step(std::span<const AgentState> roster, const BarrierParams& barrier,
                const ControlParams& control, double dt) {
  if (!(dt > 0.0)) throw Error(ErrorCode::InvalidArgument, "dt must be positive");

  StepResult out;
  out.roster.assign(roster.begin(), roster.end());
  out.decisions.resize(roster.size());
  out.neighbor_ids.assign(roster.size(), -1);

  for (std::size_t i = 0; i < roster.size(); ++i) {
    const AgentState& self = roster[i];
    if (self.is_static()) {
      out.decisions[i].velocity = RealVec::Zero(self.position.size());
      continue;
    }
    const std::size_t j = nearest_neighbor_index(self, roster);
    ControlDecision decision;
    try {
      decision = control_law(self, roster[j], barrier, control);
    } catch (const Error& e) {
      throw Error(e.code(), e.detail(), self.id);
    }
    AgentState& next = out.roster[i];
    next.position = self.position + dt * decision.velocity;
    next.velocity = decision.velocity;
    out.neighbor_ids[i] = roster[j].id;
    out.decisions[i] = std::move(decision);
  }
  return out;
}

bool TrajectoryRecord::all_converged() const {
  for (const auto& t : convergence_time) {
    if (!t) return false;
  }
  return true;
}

std::vector<AgentState> TrajectoryRecord::roster_at(std::size_t k) const {
  std::vector<AgentState> out = states.at(k);
  out.insert(out.end(), static_agents.begin(), static_agents.end());
  return out;
}

const RealVec& TrajectoryRecord::position_of(int id, std::size_t k) const {
  const auto it = slot_of.find(id);
  if (it == slot_of.end()) throw Error(ErrorCode::InvalidArgument, "unknown agent id " + std::to_string(id));
  if (it->second >= 0) return states.at(k)[static_cast<std::size_t>(it->second)].position;
  return static_agents.at(static_cast<std::size_t>(-1 - it->second)).position;
}

namespace {

bool exceptional(Guard g) {
  return g == Guard::DotProductSmall || g == Guard::CorrectionSaturated || g == Guard::GradSpuriousZero;
}

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", x);
  return buf;
}

}  // namespace

TrajectoryRecord run(const Scenario& scenario, const SimConfig& config) {
  if (!(config.dt > 0.0) || !(config.t_max > 0.0) || config.dt > config.t_max || !(config.conv_tol > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "SimConfig needs 0 < dt <= t_max and conv_tol > 0");
  }
  const WorldConfig& world = scenario.config;
  const BarrierParams& bp = world.barrier;
  const ControlParams& cp = world.control;

  std::vector<AgentState> roster;
  std::vector<std::size_t> kinetic;
  TrajectoryRecord rec;
  rec.dt = config.dt;
  rec.barrier = bp;
  rec.control = cp;
  rec.arena_radius = world.arena_radius;
  for (const AgentState& a : world.agents) {
    AgentState copy = a;
    copy.velocity = RealVec::Zero(a.position.size());
    if (a.is_static()) {
      rec.slot_of[a.id] = -1 - static_cast<long>(rec.static_agents.size());
      rec.static_agents.push_back(copy);
    } else {
      rec.slot_of[a.id] = static_cast<long>(kinetic.size());
      kinetic.push_back(roster.size());
    }
    roster.push_back(std::move(copy));
  }
  const std::size_t n = kinetic.size();
  rec.convergence_time.assign(n, std::nullopt);

  const auto max_steps = static_cast<std::size_t>(std::llround(config.t_max / config.dt));
  std::vector<int> prev_neighbor(n, -1);
  std::vector<Guard> prev_guard(n, Guard::None);
  std::vector<bool> breached(n, false);
  std::set<std::pair<int, int>> colliding;

  for (std::size_t k = 0;; ++k) {
    const double t = static_cast<double>(k) * config.dt;
    rec.times.push_back(t);

    std::vector<AgentState> snapshot;
    snapshot.reserve(n);
    for (std::size_t i : kinetic) snapshot.push_back(roster[i]);
    rec.states.push_back(std::move(snapshot));

    // Distances, collisions and containment at this sample.
    double pair_min = std::numeric_limits<double>::infinity();
    double clearance_min = std::numeric_limits<double>::infinity();
    std::set<std::pair<int, int>> now_colliding;
    bool collided = false;
    for (std::size_t a = 0; a < n; ++a) {
      const AgentState& self = roster[kinetic[a]];
      for (std::size_t b = 0; b < roster.size(); ++b) {
        const AgentState& other = roster[b];
        if (other.id == self.id) continue;
        const bool other_kinetic = !other.is_static();
        if (other_kinetic && other.id < self.id) continue;  // each kinetic pair once
        const double d = (self.position - other.position).norm();
        clearance_min = std::min(clearance_min, d);
        if (other_kinetic) pair_min = std::min(pair_min, d);
        if (d <= bp.clearance) {
          collided = true;
          const auto key = std::minmax(self.id, other.id);
          now_colliding.insert(key);
          if (!colliding.count(key)) {
            rec.events.push_back({t, k, EventKind::Collision, self.id,
                                  "with " + std::to_string(other.id) + " distance=" + num(d)});
          }
        }
      }
      const double radius = self.position.norm();
      const bool outside = radius > world.arena_radius;
      if (outside && !breached[a]) {
        rec.events.push_back({t, k, EventKind::ContainmentBreach, self.id, "radius=" + num(radius)});
      }
      breached[a] = outside;
    }
    colliding = std::move(now_colliding);
    rec.pairwise_min_distance.push_back(pair_min);
    rec.min_clearance.push_back(clearance_min);

    bool all_within = true;
    for (std::size_t a = 0; a < n; ++a) {
      const AgentState& self = roster[kinetic[a]];
      const double dist = (self.position - self.goal).norm();
      if (dist <= config.conv_tol) {
        if (!rec.convergence_time[a]) {
          rec.convergence_time[a] = t;
          rec.events.push_back({t, k, EventKind::Converged, self.id, "distance=" + num(dist)});
        }
      } else {
        all_within = false;
      }
    }

    StepResult next = step(roster, bp, cp, config.dt);
    std::vector<AgentSample> samples(n);
    for (std::size_t a = 0; a < n; ++a) {
      const std::size_t slot = kinetic[a];
      const ControlDecision& d = next.decisions[slot];
      const int id = roster[slot].id;
      samples[a] = {next.neighbor_ids[slot], d.guard, d.lyapunov_value, d.grad_norm};
      if (exceptional(d.guard) && d.guard != prev_guard[a]) {
        rec.events.push_back({t, k, EventKind::Guard, id, std::string(to_string(d.guard))});
      }
      if (k > 0 && next.neighbor_ids[slot] != prev_neighbor[a]) {
        rec.events.push_back({t, k, EventKind::NeighborSwitch, id,
                              std::to_string(prev_neighbor[a]) + "->" + std::to_string(next.neighbor_ids[slot])});
      }
      prev_guard[a] = d.guard;
      prev_neighbor[a] = next.neighbor_ids[slot];
    }
    rec.samples.push_back(std::move(samples));

    if (all_within || k >= max_steps) break;
    if (collided && config.abort_on_collision) {
      rec.aborted = true;
      break;
    }
    roster = std::move(next.roster);
  }
  return rec;
}

}  // namespace ftmp
