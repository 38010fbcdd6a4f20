// Seeded property battery over the barrier and the control law.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <string>

#include "ftmp/analysis.hpp"
#include "ftmp/controller.hpp"
#include "ftmp/random.hpp"

namespace ftmp {

namespace {

struct RandomState {
  RealVec position;
  RealVec goal;
  RealVec neighbor;
};

RealVec random_point(Rng& rng, double half_width) {
  RealVec p(2);
  p << rng.uniform(-half_width, half_width), rng.uniform(-half_width, half_width);
  return p;
}

// Agent at least `margin` outside the neighbour's clearance disk.
RandomState random_safe_state(Rng& rng, const BarrierParams& bp, double margin) {
  RandomState s;
  s.neighbor = random_point(rng, 10.0);
  s.goal = random_point(rng, 10.0);
  do {
    s.position = random_point(rng, 10.0);
  } while ((s.position - s.neighbor).norm() <= bp.clearance + margin);
  return s;
}

Eigen::Matrix2d rotation(double angle) {
  Eigen::Matrix2d q;
  q << std::cos(angle), -std::sin(angle), std::sin(angle), std::cos(angle);
  return q;
}

std::string where(const RealVec& x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "(%.6g,%.6g)", x(0), x(1));
  return buf;
}

double relative(const RealVec& a, const RealVec& b) { return (a - b).norm() / (1.0 + b.norm()); }

AgentState agent(int id, const RealVec& position, const RealVec& goal, const RealVec& velocity) {
  AgentState a = make_kinetic(id, position, goal);
  a.velocity = velocity;
  return a;
}

// Grid aligned so that the goal and the stationary points fall on nodes.
struct GridInstance {
  RealVec goal;
  RealVec neighbor;
  Box box;
};

GridInstance aligned_instance(double d, double spacing, int below, int resolution) {
  GridInstance g;
  g.goal = RealVec::Zero(2);
  g.neighbor = RealVec(2);
  g.neighbor << d, 0.0;
  g.box.lower = RealVec(2);
  g.box.upper = RealVec(2);
  g.box.lower << -below * spacing, -(resolution / 2) * spacing;
  g.box.upper << (resolution - 1 - below) * spacing, (resolution - 1 - resolution / 2) * spacing;
  return g;
}

}  // namespace

std::vector<Finding> verify_lemmas(std::uint64_t seed) {
  const BarrierParams bp;
  const ControlParams cp{.k1 = 1.0, .alpha = 1.0 / 3.0};
  Rng rng(seed);
  std::vector<Finding> out;

  // Analytic gradients against central differences.
  {
    double worst_self = 0.0, worst_neighbor = 0.0;
    std::string at_self, at_neighbor;
    for (int n = 0; n < 1000; ++n) {
      const RandomState s = random_safe_state(rng, bp, 0.05);
      const auto ev = evaluate_barrier(s.position, s.goal, s.neighbor, bp);
      const RealVec fd_self = finite_difference_gradient(
          [&](const RealVec& x) { return evaluate_barrier(x, s.goal, s.neighbor, bp).value; }, s.position, 1e-6);
      const RealVec fd_neighbor = finite_difference_gradient(
          [&](const RealVec& x) { return evaluate_barrier(s.position, s.goal, x, bp).value; }, s.neighbor, 1e-6);
      const double e1 = relative(fd_self, ev.grad_self);
      const double e2 = relative(fd_neighbor, ev.grad_neighbor);
      if (e1 > worst_self) {
        worst_self = e1;
        at_self = where(s.position);
      }
      if (e2 > worst_neighbor) {
        worst_neighbor = e2;
        at_neighbor = where(s.position);
      }
    }
    out.push_back({"gradient_oracle_self", worst_self <= 1e-5, worst_self, at_self});
    out.push_back({"gradient_oracle_neighbor", worst_neighbor <= 1e-5, worst_neighbor, at_neighbor});
  }

  // Rotation and translation invariance.
  {
    double worst_rot = 0.0, worst_shift = 0.0;
    for (int n = 0; n < 200; ++n) {
      const RandomState s = random_safe_state(rng, bp, 0.05);
      const auto ev = evaluate_barrier(s.position, s.goal, s.neighbor, bp);
      const Eigen::Matrix2d q = rotation(rng.uniform(0.0, 2.0 * std::numbers::pi));
      const auto rot = evaluate_barrier(q * s.position, q * s.goal, q * s.neighbor, bp);
      worst_rot = std::max({worst_rot, std::abs(rot.value - ev.value) / (1.0 + ev.value),
                            relative(rot.grad_self, RealVec(q * ev.grad_self)),
                            relative(rot.grad_neighbor, RealVec(q * ev.grad_neighbor))});
      const RealVec shift = random_point(rng, 10.0);
      const auto moved = evaluate_barrier(s.position + shift, s.goal + shift, s.neighbor + shift, bp);
      worst_shift = std::max({worst_shift, std::abs(moved.value - ev.value) / (1.0 + ev.value),
                              relative(moved.grad_self, ev.grad_self),
                              relative(moved.grad_neighbor, ev.grad_neighbor)});
    }
    out.push_back({"rotation_equivariance", worst_rot <= 1e-12, worst_rot, "200 states"});
    out.push_back({"translation_invariance", worst_shift <= 1e-12, worst_shift, "200 states"});
  }

  // Zero set and the quadratic upper bound.
  {
    bool ok = true;
    double worst_ratio = 0.0;
    std::string at;
    for (int n = 0; n < 500; ++n) {
      const RandomState s = random_safe_state(rng, bp, 0.0);
      const auto at_goal = [&] {
        RealVec nb = s.neighbor;
        if ((s.goal - nb).norm() <= bp.clearance) nb = s.goal + RealVec::Constant(2, 3.0);
        return evaluate_barrier(s.goal, s.goal, nb, bp);
      }();
      const auto ev = evaluate_barrier(s.position, s.goal, s.neighbor, bp);
      if (at_goal.value != 0.0 || !at_goal.grad_self.isZero(0.0) || !(ev.value > 0.0)) {
        ok = false;
        at = where(s.position);
      }
      if (!quadratic_bound_holds(s.position, s.goal, s.neighbor, bp)) {
        ok = false;
        at = where(s.position);
      }
      worst_ratio = std::max(worst_ratio, ev.value / (bp.epsilon * (s.position - s.goal).squaredNorm()));
    }
    out.push_back({"zero_set", ok, 0.0, at});
    out.push_back({"quadratic_bound", ok && worst_ratio <= 1.0, worst_ratio, at});
  }

  // Stationary points: residuals on random instances, grid oracle on aligned ones.
  {
    double worst = 0.0;
    bool far_found = true;
    for (int n = 0; n < 200; ++n) {
      const RealVec goal = random_point(rng, 10.0);
      const RealVec neighbor = random_point(rng, 10.0);
      const auto pts = stationary_points(goal, neighbor, bp);
      if (pts.empty()) far_found = false;
      for (const auto& p : pts) worst = std::max(worst, p.residual / (1.0 + (p.location - goal).norm()));
    }
    out.push_back({"stationary_residual", far_found && worst <= 1e-8, worst, "200 instances"});

    // d = 4: only the far root; d = 0.99995: a safe near-side root as well.
    const double inv_eps = 1.0 / bp.epsilon;
    const GridInstance instances[] = {
        aligned_instance(4.0, 2.0 * (4.0 + bp.clearance - inv_eps) / 240.0, 120, 400),
        aligned_instance(0.99995, 2.0 * (bp.clearance - 0.99995 - inv_eps) / 60.0, 200, 400),
    };
    bool ok = true;
    double worst_miss = 0.0;
    std::string at;
    for (const GridInstance& g : instances) {
      const auto grid = grid_gradient_minima(g.goal, g.neighbor, bp, g.box, 400, 1e-3);
      const auto roots = stationary_points(g.goal, g.neighbor, bp);
      auto near_known = [&](const RealVec& x) {
        double best = (x - g.goal).norm();
        for (const auto& p : roots) best = std::min(best, (x - p.location).norm());
        return best;
      };
      for (const RealVec& m : grid.minima) {
        const double miss = near_known(m) / grid.cell;
        worst_miss = std::max(worst_miss, miss);
        if (miss > 1.0) {
          ok = false;
          at = where(m);
        }
      }
      // Completeness: every known zero shows up as a grid minimum.
      // The goal counts only when it lies outside the neighbor's clearance disc.
      std::vector<RealVec> known;
      if ((g.goal - g.neighbor).norm() > bp.clearance) known.push_back(g.goal);
      for (const auto& p : roots) known.push_back(p.location);
      for (const RealVec& z : known) {
        const bool seen = std::any_of(grid.minima.begin(), grid.minima.end(),
                                      [&](const RealVec& m) { return (m - z).norm() <= grid.cell; });
        if (!seen) {
          ok = false;
          at = "missing " + where(z);
        }
      }
    }
    out.push_back({"stationary_grid_oracle", ok, worst_miss, at});

    RealVec goal = RealVec::Zero(2), neighbor(2);
    neighbor << 4.0, 0.0;
    const RealVec printed = printed_second_root(goal, neighbor, bp);
    const double g = evaluate_barrier(printed, goal, neighbor, bp).grad_self.norm();
    out.push_back({"printed_second_root_nonzero", g > 0.5, g, where(printed)});
  }

  // Control law: exact cancellation, descent, homogeneity, continuity at the goal.
  {
    double worst_cancel = 0.0, worst_rate = -std::numeric_limits<double>::infinity();
    std::size_t cancelled = 0;
    for (int n = 0; n < 1000; ++n) {
      const RandomState s = random_safe_state(rng, bp, 0.05);
      const RealVec vj = n % 5 == 0 ? RealVec(RealVec::Zero(2)) : random_point(rng, 5.0);
      const AgentState self = agent(0, s.position, s.goal, RealVec::Zero(2));
      const AgentState other = agent(1, s.neighbor, s.neighbor, vj);
      const ControlDecision d = control_law(self, other, bp, cp);
      const auto ev = evaluate_barrier(s.position, s.goal, s.neighbor, bp);
      const double rate = lyapunov_rate(self, other, bp, cp);
      const double target = -cp.k1 * std::pow(ev.grad_self.norm(), cp.alpha + 1.0);
      const double scale = std::abs(ev.grad_self.dot(d.velocity)) + std::abs(ev.grad_neighbor.dot(vj)) + std::abs(target);
      if (d.guard == Guard::None || d.guard == Guard::NeighborStatic) {
        ++cancelled;
        worst_cancel = std::max(worst_cancel, std::abs(rate - target) / scale);
        worst_rate = std::max(worst_rate, rate / scale);
      }
    }
    out.push_back({"exact_cancellation", cancelled > 0 && worst_cancel <= 1e-9, worst_cancel,
                   std::to_string(cancelled) + " unguarded states"});
    out.push_back({"descent", worst_rate <= 1e-12, worst_rate, "guard none/neighbor_static"});

    double worst_h = 0.0;
    for (int n = 0; n < 200; ++n) {
      const RealVec g = random_point(rng, 10.0);
      const double lambda = std::exp(rng.uniform(-5.0, 5.0));
      const RealVec scaled = finite_time_damping(lambda * g, cp);
      const RealVec expected = std::pow(lambda, cp.alpha) * finite_time_damping(g, cp);
      worst_h = std::max(worst_h, (scaled - expected).norm() / (1.0 + expected.norm()));
    }
    out.push_back({"damping_homogeneity", worst_h <= 1e-12, worst_h, "200 gradients"});

    bool monotone = true;
    double last_norm = 0.0;
    std::string at;
    for (int n = 0; n < 50; ++n) {
      RealVec goal = random_point(rng, 5.0);
      RealVec neighbor;
      do {
        neighbor = random_point(rng, 10.0);
      } while ((neighbor - goal).norm() <= bp.clearance + 1.0);
      const double angle = rng.uniform(0.0, 2.0 * std::numbers::pi);
      RealVec dir(2);
      dir << std::cos(angle), std::sin(angle);
      const RealVec vj = random_point(rng, 5.0);
      double prev = std::numeric_limits<double>::infinity();
      for (int e = 2; e <= 12; e += 2) {
        const AgentState self = agent(0, goal + std::pow(10.0, -e) * dir, goal, RealVec::Zero(2));
        const AgentState other = agent(1, neighbor, neighbor, vj);
        const ControlDecision d = control_law(self, other, bp, cp);
        if (d.guard != Guard::None) continue;
        const double v = d.velocity.norm();
        if (!(v < prev)) {
          monotone = false;
          at = where(goal);
        }
        prev = v;
        last_norm = std::max(last_norm, e == 12 ? v : 0.0);
      }
    }
    out.push_back({"continuity_at_goal", monotone && last_norm < 1e-3, last_norm, at.empty() ? "50 rays" : at});
  }
  return out;
}

}  // namespace ftmp
