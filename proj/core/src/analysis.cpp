#include "ftmp/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>
#include <utility>

#include "ftmp/error.hpp"

namespace ftmp {

RealVec finite_difference_gradient(const ScalarField& field, const RealVec& x, double h) {
  if (!(h > 0.0)) throw Error(ErrorCode::InvalidArgument, "step must be positive");
  RealVec grad(x.size());
  RealVec probe = x;
  for (Eigen::Index c = 0; c < x.size(); ++c) {
    try {
      probe(c) = x(c) + h;
      const double up = field(probe);
      probe(c) = x(c) - h;
      const double down = field(probe);
      grad(c) = (up - down) / (2.0 * h);
    } catch (const Error& e) {
      throw Error(ErrorCode::StencilOutOfDomain, "stencil point left the domain: " + e.detail());
    }
    probe(c) = x(c);
  }
  return grad;
}

namespace {

bool descent_guard(Guard g) {
  return g == Guard::None || g == Guard::NeighborStatic || g == Guard::AtGoal;
}

long kinetic_slot(const TrajectoryRecord& record, int agent_id) {
  const auto it = record.slot_of.find(agent_id);
  if (it == record.slot_of.end() || it->second < 0) {
    throw Error(ErrorCode::InvalidArgument, "agent " + std::to_string(agent_id) + " is not kinetic");
  }
  return it->second;
}

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

}  // namespace

DescentResidualScan descent_residual_scan(const TrajectoryRecord& record, const BarrierParams& barrier,
                                          const ControlParams& control) {
  DescentResidualScan scan;
  const std::size_t n = record.kinetic_count();
  if (record.size() < 2) return scan;

  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t k = 0; k + 1 < record.size(); ++k) {
      const AgentSample& now = record.samples[k][a];
      const AgentSample& next = record.samples[k + 1][a];
      if (!descent_guard(now.guard)) {
        ++scan.excluded_guard;
        continue;
      }
      if (now.neighbor_id != next.neighbor_id) {
        ++scan.excluded_switch;
        continue;
      }
      const AgentState& s0 = record.states[k][a];
      const AgentState& s1 = record.states[k + 1][a];
      double residual = 0.0;
      if (now.guard != Guard::AtGoal) {
        try {
          const auto b0 = evaluate_barrier(s0.position, s0.goal, record.position_of(now.neighbor_id, k), barrier);
          const auto b1 = evaluate_barrier(s1.position, s1.goal, record.position_of(now.neighbor_id, k + 1), barrier);
          const double predicted = -control.k1 * std::pow(b0.grad_self.norm(), control.alpha + 1.0);
          residual = std::abs((b1.value - b0.value) / record.dt - predicted);
        } catch (const Error&) {
          ++scan.excluded_guard;
          continue;
        }
      } else if (s1.position != s1.goal) {
        ++scan.excluded_guard;
        continue;
      }
      scan.residuals.push_back({s0.id, k, residual});
    }
  }
  double sum = 0.0;
  for (const StepResidual& r : scan.residuals) {
    scan.max = std::max(scan.max, r.residual);
    sum += r.residual;
  }
  if (!scan.residuals.empty()) scan.mean = sum / static_cast<double>(scan.residuals.size());
  scan.dt_coefficient = scan.max / record.dt;
  return scan;
}

BoundAudit quadratic_bound_audit(const TrajectoryRecord& record, const BarrierParams& barrier) {
  BoundAudit audit;
  for (std::size_t k = 0; k < record.size(); ++k) {
    for (std::size_t a = 0; a < record.kinetic_count(); ++a) {
      const AgentState& s = record.states[k][a];
      const RealVec& neighbor = record.position_of(record.samples[k][a].neighbor_id, k);
      ++audit.checked;
      double ratio = std::numeric_limits<double>::infinity();
      bool ok = false;
      if ((s.position - neighbor).norm() >= barrier.clearance) {
        ok = quadratic_bound_holds(s.position, s.goal, neighbor, barrier);
        const double sq = (s.position - s.goal).squaredNorm();
        ratio = sq == 0.0 ? 0.0 : evaluate_barrier(s.position, s.goal, neighbor, barrier).value / (barrier.epsilon * sq);
      }
      if (!ok) ++audit.violations;
      if (ratio > audit.worst_ratio || !ok) {
        audit.worst_ratio = std::max(audit.worst_ratio, ratio);
        audit.worst_agent = s.id;
        audit.worst_step = k;
      }
    }
  }
  return audit;
}

namespace {

double radical_inverse(std::uint64_t index, unsigned base) {
  double result = 0.0;
  double f = 1.0 / base;
  while (index > 0) {
    result += f * static_cast<double>(index % base);
    index /= base;
    f /= base;
  }
  return result;
}

constexpr unsigned kPrimes[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};

}  // namespace

double estimate_c0(const RealVec& goal, const RealVec& neighbor, const BarrierParams& barrier,
                   const Box& domain, double exclusion_radius, std::size_t samples) {
  const auto dim = goal.size();
  if (domain.lower.size() != dim || domain.upper.size() != dim || neighbor.size() != dim) {
    throw Error(ErrorCode::InvalidArgument, "domain dimension mismatch");
  }
  if (dim > static_cast<Eigen::Index>(std::size(kPrimes))) {
    throw Error(ErrorCode::InvalidArgument, "dimension too large for the Halton sequence");
  }
  if ((goal.array() < domain.lower.array()).any() || (goal.array() > domain.upper.array()).any()) {
    throw Error(ErrorCode::InvalidArgument, "domain must contain the goal");
  }
  if (!(exclusion_radius > 0.0)) throw Error(ErrorCode::InvalidArgument, "exclusion radius must be positive");
  if (samples < 10000) throw Error(ErrorCode::InvalidArgument, "at least 1e4 samples required");

  const auto stationary = stationary_points(goal, neighbor, barrier);
  const RealVec extent = domain.upper - domain.lower;
  double best = std::numeric_limits<double>::infinity();
  RealVec x(dim);
  for (std::size_t i = 1; i <= samples; ++i) {
    for (Eigen::Index c = 0; c < dim; ++c) {
      x(c) = domain.lower(c) + extent(c) * radical_inverse(i, kPrimes[c]);
    }
    if ((x - neighbor).norm() <= barrier.clearance) continue;
    const double to_goal = (x - goal).norm();
    if (to_goal == 0.0) continue;
    bool excluded = false;
    for (const StationaryPoint& p : stationary) {
      if ((x - p.location).norm() < exclusion_radius) {
        excluded = true;
        break;
      }
    }
    if (excluded) continue;
    const auto ev = evaluate_barrier(x, goal, neighbor, barrier);
    best = std::min(best, ev.grad_self.norm() / to_goal);
  }
  if (!std::isfinite(best)) throw Error(ErrorCode::DegenerateDomain, "every sample was excluded");
  return best;
}

namespace {

// Least-squares slope of log(rate) on log(value).
double fit_log_slope(const std::vector<std::pair<double, double>>& pairs) {
  if (pairs.size() < 50) {
    throw Error(ErrorCode::InsufficientData,
                "only " + std::to_string(pairs.size()) + " usable descent samples (need 50)");
  }
  double mx = 0.0, my = 0.0;
  for (const auto& [x, y] : pairs) {
    mx += x;
    my += y;
  }
  mx /= static_cast<double>(pairs.size());
  my /= static_cast<double>(pairs.size());
  double sxx = 0.0, sxy = 0.0;
  for (const auto& [x, y] : pairs) {
    sxx += (x - mx) * (x - mx);
    sxy += (x - mx) * (y - my);
  }
  if (sxx == 0.0) throw Error(ErrorCode::InsufficientData, "barrier values do not vary");
  return sxy / sxx;
}

void push_pair(std::vector<std::pair<double, double>>& pairs, double v0, double v1, double dt, double floor) {
  if (!(v0 > floor) || !(v1 > 0.0) || !(v1 < v0)) return;
  pairs.emplace_back(std::log(0.5 * (v0 + v1)), std::log((v0 - v1) / dt));
}

}  // namespace

double fit_decay_exponent(std::span<const double> values, double dt, double floor) {
  if (!(dt > 0.0)) throw Error(ErrorCode::InvalidArgument, "dt must be positive");
  std::vector<std::pair<double, double>> pairs;
  for (std::size_t k = 0; k + 1 < values.size(); ++k) push_pair(pairs, values[k], values[k + 1], dt, floor);
  return fit_log_slope(pairs);
}

double fts_order_fit(const TrajectoryRecord& record, int agent_id, double floor) {
  const auto a = static_cast<std::size_t>(kinetic_slot(record, agent_id));
  if (!record.convergence_time[a]) {
    throw Error(ErrorCode::InsufficientData, "agent " + std::to_string(agent_id) + " did not converge");
  }
  std::vector<std::pair<double, double>> pairs;
  for (std::size_t k = 0; k + 1 < record.size(); ++k) {
    const AgentSample& now = record.samples[k][a];
    const AgentSample& next = record.samples[k + 1][a];
    if (now.neighbor_id != next.neighbor_id) continue;
    if (now.guard != Guard::None && now.guard != Guard::NeighborStatic) continue;
    push_pair(pairs, now.lyapunov_value, next.lyapunov_value, record.dt, floor);
  }
  return fit_log_slope(pairs);
}

std::string format_finding(const Finding& f) {
  std::ostringstream os;
  os << f.check << ' ' << (f.passed ? "PASS" : "FAIL") << " worst=" << num(f.worst)
     << " at=" << (f.location.empty() ? "-" : f.location);
  return os.str();
}

std::string format_report(std::span<const Finding> findings) {
  std::string out;
  for (const Finding& f : findings) {
    out += format_finding(f);
    out += '\n';
  }
  return out;
}

bool all_passed(std::span<const Finding> findings) {
  return std::all_of(findings.begin(), findings.end(), [](const Finding& f) { return f.passed; });
}

std::vector<Finding> audit_record(const TrajectoryRecord& record) {
  std::vector<Finding> out;
  const BarrierParams& bp = record.barrier;

  {
    double worst = std::numeric_limits<double>::infinity();
    std::size_t at = 0;
    for (std::size_t k = 0; k < record.min_clearance.size(); ++k) {
      if (record.min_clearance[k] < worst) {
        worst = record.min_clearance[k];
        at = k;
      }
    }
    out.push_back({"safety_clearance", worst > bp.clearance && !record.aborted, worst,
                   "t=" + num(record.times.empty() ? 0.0 : record.times[at])});
  }
  {
    double worst = 0.0;
    std::string where;
    for (std::size_t k = 0; k < record.size(); ++k) {
      for (const AgentState& s : record.states[k]) {
        const double r = s.position.norm();
        if (r > worst) {
          worst = r;
          where = "agent=" + std::to_string(s.id) + " t=" + num(record.times[k]);
        }
      }
    }
    out.push_back({"containment", worst < record.arena_radius, worst, where});
  }
  {
    std::string missing;
    double count = 0;
    double latest = 0.0;
    for (std::size_t a = 0; a < record.kinetic_count(); ++a) {
      if (!record.convergence_time[a]) {
        ++count;
        missing += (missing.empty() ? "agents=" : ",") + std::to_string(record.states[0][a].id);
      } else {
        latest = std::max(latest, *record.convergence_time[a]);
      }
    }
    out.push_back({"convergence", count == 0, count == 0 ? latest : count,
                   count == 0 ? "t=" + num(latest) : missing});
  }
  {
    const BoundAudit audit = quadratic_bound_audit(record, bp);
    out.push_back({"quadratic_bound", audit.violations == 0, audit.worst_ratio,
                   "agent=" + std::to_string(audit.worst_agent) + " step=" + std::to_string(audit.worst_step)});
  }
  {
    const DescentResidualScan scan = descent_residual_scan(record, bp, record.control);
    std::string where = "-";
    for (const StepResidual& r : scan.residuals) {
      if (r.residual == scan.max) {
        where = "agent=" + std::to_string(r.agent_id) + " step=" + std::to_string(r.step);
        break;
      }
    }
    out.push_back({"descent_residual", std::isfinite(scan.dt_coefficient), scan.dt_coefficient, where});
  }
  return out;
}

RealVec printed_second_root(const RealVec& goal, const RealVec& neighbor, const BarrierParams& barrier) {
  const RealVec axis = goal - neighbor;
  const double d = axis.norm();
  if (d == 0.0) throw Error(ErrorCode::DegenerateGeometry, "goal coincides with the neighbour");
  return neighbor + (2.0 * (d + barrier.clearance - 1.0 / barrier.epsilon) / d) * axis;
}

GridSearchResult grid_gradient_minima(const RealVec& goal, const RealVec& neighbor, const BarrierParams& barrier,
                                      const Box& box, int resolution, double threshold) {
  if (goal.size() != 2 || neighbor.size() != 2 || box.lower.size() != 2 || box.upper.size() != 2) {
    throw Error(ErrorCode::InvalidArgument, "grid search is planar");
  }
  if (resolution < 3) throw Error(ErrorCode::InvalidArgument, "resolution must be at least 3");

  const double hx = (box.upper(0) - box.lower(0)) / (resolution - 1);
  const double hy = (box.upper(1) - box.lower(1)) / (resolution - 1);
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> norm(static_cast<std::size_t>(resolution) * resolution, inf);
  auto at = [resolution](int i, int j) { return static_cast<std::size_t>(i) * resolution + j; };
  auto node = [&](int i, int j) {
    RealVec x(2);
    x << box.lower(0) + i * hx, box.lower(1) + j * hy;
    return x;
  };

  for (int i = 0; i < resolution; ++i) {
    for (int j = 0; j < resolution; ++j) {
      const RealVec x = node(i, j);
      if ((x - neighbor).norm() <= barrier.clearance) continue;
      norm[at(i, j)] = evaluate_barrier(x, goal, neighbor, barrier).grad_self.norm();
    }
  }

  GridSearchResult out;
  out.cell = std::max(hx, hy);
  for (int i = 0; i < resolution; ++i) {
    for (int j = 0; j < resolution; ++j) {
      const double v = norm[at(i, j)];
      if (!(v < threshold)) continue;
      bool minimum = true;
      for (int di = -1; di <= 1 && minimum; ++di) {
        for (int dj = -1; dj <= 1; ++dj) {
          if (di == 0 && dj == 0) continue;
          const int ni = i + di, nj = j + dj;
          if (ni < 0 || nj < 0 || ni >= resolution || nj >= resolution) continue;
          if (norm[at(ni, nj)] < v) {
            minimum = false;
            break;
          }
        }
      }
      if (minimum) out.minima.push_back(node(i, j));
    }
  }
  return out;
}

}  // namespace ftmp
