#pragma once

#include <vector>

#include "ftmp/model.hpp"

namespace ftmp {

/// Barrier B = |x - goal|^2 / (|x - x_j| - d_c + 1/epsilon) together with its
/// gradients with respect to the agent and to its neighbour.
struct BarrierEvaluation {
  double value = 0.0;
  RealVec grad_self;      ///< dB/dx_i
  RealVec grad_neighbor;  ///< dB/dx_j
  double denominator = 0.0;
  bool in_safe_region = false;  ///< |x_i - x_j| > d_c
};

/// Throws CoincidentAgents when position == neighbor and DenominatorUnderflow
/// when the denominator falls below params.x0_floor.
BarrierEvaluation evaluate_barrier(const RealVec& position, const RealVec& goal,
                                   const RealVec& neighbor, const BarrierParams& params);

/// Runtime audit of B <= epsilon |x - goal|^2 on the closed safe domain.
/// Throws DomainViolation when |x - x_j| < d_c.
bool quadratic_bound_holds(const RealVec& position, const RealVec& goal, const RealVec& neighbor,
                           const BarrierParams& params);

struct StationaryPoint {
  RealVec location;
  bool in_safe_region = false;
  double residual = 0.0;  ///< |dB/dx_i| at location
};

/// Non-goal zeros of dB/dx_i for a fixed neighbour. All such points are
/// collinear with goal and neighbour; candidates come from the closed-form
/// roots of the scalar equation along that line and are kept only when the
/// gradient evaluated there is numerically zero.
std::vector<StationaryPoint> stationary_points(const RealVec& goal, const RealVec& neighbor,
                                               const BarrierParams& params);

}  // namespace ftmp
