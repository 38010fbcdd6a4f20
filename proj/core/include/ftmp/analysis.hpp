#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "ftmp/barrier.hpp"
#include "ftmp/sim.hpp"

namespace ftmp {

using ScalarField = std::function<double(const RealVec&)>;

/// Central differences, one component at a time. A barrier precondition
/// failure at a stencil point is rethrown as StencilOutOfDomain.
RealVec finite_difference_gradient(const ScalarField& field, const RealVec& x, double h);

struct StepResidual {
  int agent_id = -1;
  std::size_t step = 0;
  double residual = 0.0;  ///< |(B(t+dt) - B(t)) / dt + k1 |g|^(alpha+1)|
};

struct DescentResidualScan {
  std::vector<StepResidual> residuals;
  double max = 0.0;
  double mean = 0.0;
  double dt_coefficient = 0.0;  ///< max / dt
  std::size_t excluded_switch = 0;
  std::size_t excluded_guard = 0;
};

/// Compares the discrete change of each agent's barrier with the predicted
/// rate -k1 |g|^(alpha+1). Steps with a neighbour switch, or with a guard
/// other than None / NeighborStatic, are excluded and counted.
DescentResidualScan descent_residual_scan(const TrajectoryRecord& record,
                                          const BarrierParams& barrier,
                                          const ControlParams& control);

struct BoundAudit {
  std::size_t checked = 0;
  std::size_t violations = 0;
  double worst_ratio = 0.0;  ///< max B / (epsilon |x - goal|^2)
  int worst_agent = -1;
  std::size_t worst_step = 0;
};

/// Checks B <= epsilon |x - goal|^2 at every sample of every kinetic agent
/// against its recorded neighbour.
BoundAudit quadratic_bound_audit(const TrajectoryRecord& record, const BarrierParams& barrier);

struct Box {
  RealVec lower;
  RealVec upper;
};

/// min |dB/dx| / |x - goal| over low-discrepancy (Halton) samples of the box,
/// excluding balls of exclusion_radius around the stationary points and the
/// closed disk |x - x_j| <= d_c. Throws DegenerateDomain if nothing remains.
double estimate_c0(const RealVec& goal, const RealVec& neighbor, const BarrierParams& barrier,
                   const Box& domain, double exclusion_radius, std::size_t samples);

/// Least-squares slope of log(-dV/dt) against log V over the strictly
/// decreasing part of the series with V > floor. Throws InsufficientData with
/// fewer than 50 usable samples.
double fit_decay_exponent(std::span<const double> values, double dt, double floor);

/// fit_decay_exponent over one agent's barrier series in a record, skipping
/// neighbour switches. Throws InsufficientData if the agent never converged.
double fts_order_fit(const TrajectoryRecord& record, int agent_id, double floor);

struct Finding {
  std::string check;
  bool passed = false;
  double worst = 0.0;
  std::string location;
};

/// "check_id PASS|FAIL worst=<value> at=<location>"
std::string format_finding(const Finding& finding);
std::string format_report(std::span<const Finding> findings);
bool all_passed(std::span<const Finding> findings);

/// Safety, containment, convergence, bound and descent audits of one run.
std::vector<Finding> audit_record(const TrajectoryRecord& record);

/// Value of the second stationary-point formula as printed in the original
/// derivation, kept to demonstrate that it is not a zero of the gradient.
RealVec printed_second_root(const RealVec& goal, const RealVec& neighbor,
                            const BarrierParams& barrier);

struct GridSearchResult {
  std::vector<RealVec> minima;  ///< local minima of |dB/dx| below the threshold
  double cell = 0.0;            ///< larger grid spacing
};

/// Exhaustive search of a resolution x resolution grid for local minima of the
/// gradient norm below threshold. Cells outside the barrier's domain are skipped.
GridSearchResult grid_gradient_minima(const RealVec& goal, const RealVec& neighbor,
                                      const BarrierParams& barrier, const Box& box,
                                      int resolution, double threshold);

/// Standalone property battery over seeded random states; no simulation.
std::vector<Finding> verify_lemmas(std::uint64_t seed);

}  // namespace ftmp
