#pragma once

#include <string_view>

#include "ftmp/model.hpp"

namespace ftmp {

enum class Guard {
  None,
  AtGoal,
  NeighborStatic,
  DotProductSmall,
  CorrectionSaturated,
  GradSpuriousZero,
};

std::string_view to_string(Guard guard);

struct ControlDecision {
  RealVec velocity;
  Guard guard = Guard::None;
  double lyapunov_value = 0.0;
  double grad_norm = 0.0;
};

/// -k1 |g|^(alpha-1) g, defined as zero at g = 0. Homogeneous of degree alpha in g.
RealVec finite_time_damping(const RealVec& grad, const ControlParams& control);

/// Finite-time feedback law
///
///   v = -k1 |g|^(alpha-1) g + (1 - 2 (x - goal).v_j / (x0 g.v_j)) v_j,   g = dB/dx_i
///
/// and v = 0 at the goal. The neighbour-velocity term is dropped when the
/// neighbour is at rest or g.v_j is ill-conditioned, and its coefficient is
/// clamped to +-correction_cap otherwise. A spurious zero of g away from the
/// goal gets a deterministic tangential nudge.
ControlDecision control_law(const AgentState& self, const AgentState& neighbor,
                            const BarrierParams& barrier, const ControlParams& control);

/// dB/dt = g.v_i + (dB/dx_j).v_j under control_law. Equals -k1 |g|^(alpha+1)
/// when the returned guard is None or NeighborStatic.
double lyapunov_rate(const AgentState& self, const AgentState& neighbor,
                     const BarrierParams& barrier, const ControlParams& control);

struct FtsEstimate {
  double beta = 0.0;                 ///< (alpha + 1) / 2
  double decay = 0.0;                ///< c in dV/dt <= -c V^beta
  double settling_time_bound = 0.0;  ///< V0^(1-beta) / (c (1-beta))
  double c0 = 0.0;                   ///< gradient lower-bound constant used
};

/// Throws InvalidConstant when c0 <= 0 or initial_value < 0.
FtsEstimate fts_estimate(double initial_value, const ControlParams& control,
                         const BarrierParams& barrier, double c0);

}  // namespace ftmp
