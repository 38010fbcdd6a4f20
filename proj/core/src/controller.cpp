#include "ftmp/controller.hpp"

#include <cmath>
#include <limits>

#include "ftmp/barrier.hpp"
#include "ftmp/error.hpp"

namespace ftmp {

std::string_view to_string(Guard guard) {
  switch (guard) {
    case Guard::None: return "none";
    case Guard::AtGoal: return "at_goal";
    case Guard::NeighborStatic: return "neighbor_static";
    case Guard::DotProductSmall: return "dot_product_small";
    case Guard::CorrectionSaturated: return "correction_saturated";
    case Guard::GradSpuriousZero: return "grad_spurious_zero";
  }
  return "unknown";
}

namespace {

// Unit vector perpendicular to `away` in the plane of the first two axes.
RealVec tangent(const RealVec& away, int id) {
  RealVec t = RealVec::Zero(away.size());
  if (away.size() >= 2) {
    t(0) = -away(1);
    t(1) = away(0);
  }
  const double n = t.norm();
  if (n == 0.0) {
    t.setZero();
    t(0) = 1.0;
  } else {
    t /= n;
  }
  return (id % 2 == 0) ? t : RealVec(-t);
}

}  // namespace

RealVec finite_time_damping(const RealVec& grad, const ControlParams& control) {
  const double n = grad.norm();
  if (n == 0.0) return RealVec::Zero(grad.size());
  return (-control.k1 * std::pow(n, control.alpha) / n) * grad;
}

ControlDecision control_law(const AgentState& self, const AgentState& neighbor,
                            const BarrierParams& barrier, const ControlParams& control) {
  const int dim = static_cast<int>(self.position.size());
  const RealVec to_goal = self.position - self.goal;
  const double goal_dist = to_goal.norm();

  ControlDecision out;
  if (goal_dist <= std::numeric_limits<double>::min()) {
    out.velocity = RealVec::Zero(dim);
    out.guard = Guard::AtGoal;
    return out;
  }

  const BarrierEvaluation ev = evaluate_barrier(self.position, self.goal, neighbor.position, barrier);
  const RealVec& g = ev.grad_self;
  const double g_norm = g.norm();
  out.lyapunov_value = ev.value;
  out.grad_norm = g_norm;
  out.velocity = finite_time_damping(g, control);

  if (g_norm < control.grad_zero_tol && goal_dist > 1e3 * control.grad_zero_tol) {
    out.velocity += control.grad_zero_tol * tangent(self.position - neighbor.position, self.id);
    out.guard = Guard::GradSpuriousZero;
    return out;
  }

  const RealVec& vj = neighbor.velocity;
  const double vj_norm = vj.norm();
  if (vj_norm == 0.0) {
    out.guard = Guard::NeighborStatic;
    return out;
  }
  const double g_dot = g.dot(vj);
  if (!(std::abs(g_dot) >= control.dot_guard_tol * g_norm * vj_norm) || g_norm == 0.0) {
    out.guard = Guard::DotProductSmall;
    return out;
  }

  double coef = 1.0 - 2.0 * to_goal.dot(vj) / (ev.denominator * g_dot);
  if (std::abs(coef) > control.correction_cap) {
    coef = std::copysign(control.correction_cap, coef);
    out.guard = Guard::CorrectionSaturated;
  } else {
    out.guard = Guard::None;
  }
  out.velocity += coef * vj;
  return out;
}

double lyapunov_rate(const AgentState& self, const AgentState& neighbor,
                     const BarrierParams& barrier, const ControlParams& control) {
  const ControlDecision decision = control_law(self, neighbor, barrier, control);
  if (decision.guard == Guard::AtGoal) return 0.0;
  const BarrierEvaluation ev = evaluate_barrier(self.position, self.goal, neighbor.position, barrier);
  return ev.grad_self.dot(decision.velocity) + ev.grad_neighbor.dot(neighbor.velocity);
}

FtsEstimate fts_estimate(double initial_value, const ControlParams& control,
                         const BarrierParams& barrier, double c0) {
  if (!(c0 > 0.0)) throw Error(ErrorCode::InvalidConstant, "c0 must be positive");
  if (!(initial_value >= 0.0)) throw Error(ErrorCode::InvalidConstant, "V0 must be non-negative");

  FtsEstimate out;
  out.c0 = c0;
  out.beta = (control.alpha + 1.0) / 2.0;
  out.decay = control.k1 * std::pow(c0, control.alpha + 1.0) / std::pow(barrier.epsilon, out.beta);
  out.settling_time_bound =
      initial_value == 0.0 ? 0.0
                           : std::pow(initial_value, 1.0 - out.beta) / (out.decay * (1.0 - out.beta));
  return out;
}

}  // namespace ftmp
