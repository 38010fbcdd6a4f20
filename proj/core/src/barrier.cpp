#include "ftmp/barrier.hpp"

#include <cmath>
#include <string>

#include "ftmp/error.hpp"

namespace ftmp {

namespace {

void require_same_dim(const RealVec& a, const RealVec& b, const RealVec& c) {
  if (a.size() != b.size() || a.size() != c.size() || a.size() == 0) {
    throw Error(ErrorCode::InvalidArgument, "barrier inputs must share a non-zero dimension");
  }
}

}  // namespace

BarrierEvaluation evaluate_barrier(const RealVec& position, const RealVec& goal,
                                   const RealVec& neighbor, const BarrierParams& params) {
  require_same_dim(position, goal, neighbor);
  const RealVec offset = position - neighbor;
  const double dist = offset.norm();
  if (dist == 0.0) {
    throw Error(ErrorCode::CoincidentAgents, "agent and neighbour share a position");
  }
  const double x0 = dist - params.clearance + 1.0 / params.epsilon;
  if (!(x0 >= params.x0_floor)) {
    throw Error(ErrorCode::DenominatorUnderflow,
                "denominator " + std::to_string(x0) + " below floor at distance " + std::to_string(dist));
  }

  const RealVec to_goal = position - goal;
  const double sq = to_goal.squaredNorm();
  const double weight = sq / (x0 * x0);

  BarrierEvaluation out;
  out.value = sq / x0;
  out.denominator = x0;
  out.in_safe_region = dist > params.clearance;
  out.grad_neighbor = (weight / dist) * offset;
  out.grad_self = (2.0 / x0) * to_goal - out.grad_neighbor;
  return out;
}

bool quadratic_bound_holds(const RealVec& position, const RealVec& goal, const RealVec& neighbor,
                           const BarrierParams& params) {
  require_same_dim(position, goal, neighbor);
  const double dist = (position - neighbor).norm();
  if (dist < params.clearance) {
    throw Error(ErrorCode::DomainViolation,
                "distance " + std::to_string(dist) + " inside the clearance disk");
  }
  const BarrierEvaluation ev = evaluate_barrier(position, goal, neighbor, params);
  const double bound = params.epsilon * (position - goal).squaredNorm();
  return ev.value <= bound + 1e-9 * params.epsilon;
}

std::vector<StationaryPoint> stationary_points(const RealVec& goal, const RealVec& neighbor,
                                               const BarrierParams& params) {
  if (goal.size() != neighbor.size() || goal.size() == 0) {
    throw Error(ErrorCode::InvalidArgument, "goal and neighbour dimensions differ");
  }
  const RealVec axis = neighbor - goal;
  const double d = axis.norm();
  if (d == 0.0) {
    throw Error(ErrorCode::DegenerateGeometry, "goal coincides with the neighbour");
  }
  const RealVec unit = axis / d;
  const double inv_eps = 1.0 / params.epsilon;

  // Along x = goal + p*unit the gradient vanishes iff 2 x0 p = p^2 sign(p - d),
  // i.e. p = 2 x0 on the far side of the neighbour (p > d) or p = -2 x0 on
  // the near side (p < d), where x0 = |p - d| - d_c + 1/eps.
  struct Candidate {
    double p;
    bool branch_ok;
  };
  const double far = 2.0 * (d + params.clearance - inv_eps);
  const double near = 2.0 * (d - params.clearance + inv_eps);
  const Candidate candidates[] = {
      {far, far > d},
      {near, near < d && near != 0.0 && (d - near) - params.clearance + inv_eps >= params.x0_floor},
  };

  std::vector<StationaryPoint> out;
  for (const Candidate& c : candidates) {
    if (!c.branch_ok) continue;
    RealVec x = goal + c.p * unit;
    BarrierEvaluation ev;
    try {
      ev = evaluate_barrier(x, goal, neighbor, params);
    } catch (const Error&) {
      continue;
    }
    const double residual = ev.grad_self.norm();
    if (residual > 1e-8 * (1.0 + std::abs(c.p))) continue;
    out.push_back({std::move(x), ev.in_safe_region, residual});
  }
  return out;
}

}  // namespace ftmp
