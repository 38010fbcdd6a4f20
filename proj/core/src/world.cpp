#include "ftmp/world.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "ftmp/error.hpp"
#include "ftmp/random.hpp"

namespace ftmp {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Presets: starts on 0.6 R, goals antipodal on 0.3 R, angular jitter +-0.05 rad.
constexpr double kStartRadiusFraction = 0.6;
constexpr double kGoalRadiusFraction = 0.3;
constexpr double kAngularJitter = 0.05;
constexpr double kPresetGain = 20.0;

RealVec planar(double radius, double angle, int dim) {
  RealVec v = RealVec::Zero(dim);
  v(0) = radius * std::cos(angle);
  v(1) = radius * std::sin(angle);
  return v;
}

void require_valid(const Scenario& s) {
  const auto violations = validate_config(s.config);
  if (!violations.empty()) {
    const Violation& v = violations.front();
    throw Error(ErrorCode::InvalidGeometry,
                "scenario '" + s.label + "' violates " + v.invariant + ": " + v.detail);
  }
}

void attach_ring(WorldConfig& cfg, int dim) {
  auto ring = build_boundary_ring(cfg.arena_radius, cfg.agent_radius, cfg.barrier.clearance,
                                  cfg.kinetic_count, dim);
  cfg.boundary_count = static_cast<int>(ring.size());
  for (auto& a : ring) cfg.agents.push_back(std::move(a));
}

}  // namespace

std::vector<AgentState> build_boundary_ring(double arena_radius, double agent_radius,
                                            double clearance, int first_id, int dim) {
  if (!(agent_radius > 0.0) || !(arena_radius > agent_radius) || !(clearance > 2.0 * agent_radius)) {
    throw Error(ErrorCode::InvalidGeometry, "boundary ring needs R > r > 0 and d_c > 2r");
  }
  if (dim < 2) throw Error(ErrorCode::InvalidGeometry, "boundary ring needs dim >= 2");

  const int count = static_cast<int>(std::ceil(kTwoPi * arena_radius / clearance));
  std::vector<AgentState> ring;
  ring.reserve(count);
  for (int k = 0; k < count; ++k) {
    ring.push_back(make_static(first_id + k, planar(arena_radius, kTwoPi * k / count, dim)));
  }
  return ring;
}

std::size_t nearest_neighbor_index(const AgentState& self, std::span<const AgentState> roster) {
  std::size_t best = roster.size();
  double best_sq = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < roster.size(); ++k) {
    const AgentState& other = roster[k];
    if (other.id == self.id) continue;
    const double sq = (other.position - self.position).squaredNorm();
    if (best == roster.size() || sq < best_sq || (sq == best_sq && other.id < roster[best].id)) {
      best = k;
      best_sq = sq;
    }
  }
  if (best == roster.size()) {
    throw Error(ErrorCode::EmptyRoster, "no other agent to act as neighbour", self.id);
  }
  return best;
}

const AgentState& nearest_neighbor(const AgentState& self, std::span<const AgentState> roster) {
  return roster[nearest_neighbor_index(self, roster)];
}

const std::vector<std::string>& preset_labels() {
  static const std::vector<std::string> labels{"example1", "example2"};
  return labels;
}

Scenario crossing_scenario(int kinetic_count, std::uint64_t seed, double dt, std::string label) {
  if (kinetic_count < 1) throw Error(ErrorCode::InvalidArgument, "need at least one kinetic agent");

  Scenario s;
  s.label = std::move(label);
  s.default_dt = dt;
  WorldConfig& cfg = s.config;
  cfg.arena_radius = 98.0;
  cfg.agent_radius = 0.99;
  cfg.barrier = BarrierParams{.clearance = 2.0, .epsilon = 1.0e4};
  cfg.control = ControlParams{.k1 = kPresetGain, .alpha = 1.0 / 3.0};
  cfg.kinetic_count = kinetic_count;
  cfg.seed = seed;

  const int dim = 2;
  Rng rng(seed);
  const double phase = rng.uniform(0.0, kTwoPi);
  std::vector<double> start_angle(kinetic_count);
  for (int k = 0; k < kinetic_count; ++k) {
    start_angle[k] = phase + kTwoPi * k / kinetic_count + rng.uniform(-kAngularJitter, kAngularJitter);
  }
  for (int k = 0; k < kinetic_count; ++k) {
    const double goal_angle = start_angle[k] + std::numbers::pi + rng.uniform(-kAngularJitter, kAngularJitter);
    cfg.agents.push_back(make_kinetic(k, planar(kStartRadiusFraction * cfg.arena_radius, start_angle[k], dim),
                                      planar(kGoalRadiusFraction * cfg.arena_radius, goal_angle, dim)));
  }
  attach_ring(cfg, dim);
  require_valid(s);
  return s;
}

Scenario preset(std::string_view label, std::uint64_t seed) {
  if (label == "example1") return crossing_scenario(4, seed, 1e-3, "example1");
  if (label == "example2") return crossing_scenario(20, seed, 2e-3, "example2");
  throw Error(ErrorCode::UnknownLabel, "unknown preset '" + std::string(label) + "'");
}

Scenario random_scenario(int kinetic_count, std::uint64_t seed, const RandomScenarioOptions& options) {
  if (kinetic_count < 1) throw Error(ErrorCode::InvalidArgument, "need at least one kinetic agent");
  if (options.dim < 2) throw Error(ErrorCode::InvalidArgument, "dim must be at least 2");

  const double clearance = options.barrier.clearance;
  const double radius = options.arena_radius - options.agent_radius - clearance;
  const double separation = 2.0 * clearance;
  if (!(radius > 0.0)) throw Error(ErrorCode::PlacementFailure, "no room inside the boundary ring");

  // Disks of radius d_c around points 2 d_c apart are disjoint and lie within
  // radius + d_c, so the count is bounded by the area ratio (volume in dim > 2).
  const double capacity = std::pow((radius + clearance) / clearance, options.dim);
  if (kinetic_count > capacity) {
    throw Error(ErrorCode::PlacementFailure,
                std::to_string(kinetic_count) + " agents exceed packing capacity " + std::to_string(capacity));
  }

  Rng rng(seed);
  auto sample_set = [&](const char* what) {
    std::vector<RealVec> points;
    points.reserve(kinetic_count);
    const long budget = static_cast<long>(options.attempts_per_agent) * kinetic_count;
    long attempts = 0;
    while (static_cast<int>(points.size()) < kinetic_count) {
      if (++attempts > budget) {
        throw Error(ErrorCode::PlacementFailure,
                    std::string("could not place ") + what + " after " + std::to_string(budget) + " draws");
      }
      RealVec p(options.dim);
      for (int c = 0; c < options.dim; ++c) p(c) = rng.uniform(-radius, radius);
      if (!(p.norm() < radius)) continue;
      bool clear = true;
      for (const RealVec& q : points) {
        if (!((p - q).norm() > separation)) {
          clear = false;
          break;
        }
      }
      if (clear) points.push_back(std::move(p));
    }
    return points;
  };
  const auto starts = sample_set("starts");
  const auto goals = sample_set("goals");

  Scenario s;
  s.label = "random";
  s.default_dt = options.dt;
  WorldConfig& cfg = s.config;
  cfg.arena_radius = options.arena_radius;
  cfg.agent_radius = options.agent_radius;
  cfg.barrier = options.barrier;
  cfg.control = options.control;
  cfg.kinetic_count = kinetic_count;
  cfg.seed = seed;
  for (int k = 0; k < kinetic_count; ++k) cfg.agents.push_back(make_kinetic(k, starts[k], goals[k]));
  attach_ring(cfg, options.dim);
  require_valid(s);
  return s;
}

Scenario transform_scenario(const Scenario& scenario, const Eigen::MatrixXd& rotation) {
  Scenario out = scenario;
  for (AgentState& a : out.config.agents) {
    a.position = rotation * a.position;
    a.goal = rotation * a.goal;
    a.velocity = rotation * a.velocity;
  }
  return out;
}

}  // namespace ftmp
