// Acceptance checks for the simulator. Prints one PASS/FAIL line per
// criterion and exits non-zero if any fails. An optional first argument is the
// path of the ftmp executable; without it the CLI runs in-process.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "../unit/oracles.hpp"
#include "ftmp/analysis.hpp"
#include "ftmp/app.hpp"
#include "ftmp/controller.hpp"
#include "ftmp/random.hpp"

using namespace ftmp;
namespace fs = std::filesystem;

namespace {

RealVec v2(double x, double y) { return RealVec{{x, y}}; }

struct Outcome {
  bool passed = false;
  std::string detail;
};

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// Single agent, one static neighbour: the setting of the descent and FTS checks.
Scenario single_agent() {
  Scenario s;
  s.label = "single";
  s.config.kinetic_count = 1;
  s.config.boundary_count = 1;
  s.config.agents = {make_kinetic(0, v2(10, 0), v2(0, 0)), make_static(1, v2(0, 30))};
  return s;
}

// Runs shared between criteria.
struct Runs {
  std::vector<TrajectoryRecord> single;  // dt = 1e-3, 5e-4, 2.5e-4
  TrajectoryRecord example1, example2;
  double example1_seconds = 0.0, example2_seconds = 0.0, single_seconds = 0.0;
};

Outcome gradient_oracle() {
  const auto t0 = std::chrono::steady_clock::now();
  const BarrierParams bp;
  Rng rng(2024);
  double worst = 0.0;
  int states = 0;
  while (states < 1000) {
    const oracle::P x{rng.uniform(-10, 10), rng.uniform(-10, 10)};
    const oracle::P goal{rng.uniform(-10, 10), rng.uniform(-10, 10)};
    const oracle::P nb{rng.uniform(-10, 10), rng.uniform(-10, 10)};
    if (std::hypot(x.x - nb.x, x.y - nb.y) <= bp.clearance + 0.05) continue;
    ++states;
    const auto ev = evaluate_barrier(v2(x.x, x.y), v2(goal.x, goal.y), v2(nb.x, nb.y), bp);
    const auto gs = oracle::fd_grad_self(x, goal, nb, bp.clearance, bp.epsilon, 1e-6);
    const auto gn = oracle::fd_grad_neighbor(x, goal, nb, bp.clearance, bp.epsilon, 1e-6);
    worst = std::max(worst, std::hypot(ev.grad_self(0) - gs.x, ev.grad_self(1) - gs.y) / (1 + ev.grad_self.norm()));
    worst = std::max(worst, std::hypot(ev.grad_neighbor(0) - gn.x, ev.grad_neighbor(1) - gn.y) /
                                (1 + ev.grad_neighbor.norm()));
  }
  const double secs = seconds_since(t0);
  return {worst <= 1e-5 && secs < 5.0, fmt("worst relative error %.3g", worst) + fmt(" over 1000 states, %.2f s", secs)};
}

Outcome descent_halving(const Runs& runs) {
  std::vector<double> maxima;
  for (const auto& rec : runs.single) {
    const Scenario s = single_agent();
    maxima.push_back(descent_residual_scan(rec, s.config.barrier, s.config.control).max);
  }
  const double r1 = maxima[0] / maxima[1], r2 = maxima[1] / maxima[2];
  const bool ok = r1 >= 1.7 && r1 <= 2.3 && r2 >= 1.7 && r2 <= 2.3 && runs.single_seconds < 30.0;
  return {ok, fmt("max residual %.4g", maxima[0]) + fmt(" -> %.4g", maxima[1]) + fmt(" -> %.4g", maxima[2]) +
                  fmt(", ratios %.3f", r1) + fmt(" %.3f", r2) + fmt(", %.2f s", runs.single_seconds)};
}

Outcome quadratic_bound(const Runs& runs) {
  std::size_t checked = 0, violations = 0;
  double worst = 0.0;
  auto add = [&](const TrajectoryRecord& rec) {
    const auto a = quadratic_bound_audit(rec, rec.barrier);
    checked += a.checked;
    violations += a.violations;
    worst = std::max(worst, a.worst_ratio);
  };
  for (const auto& rec : runs.single) add(rec);
  add(runs.example1);
  add(runs.example2);
  return {violations == 0 && checked > 0, std::to_string(violations) + " violations in " + std::to_string(checked) +
                                              " states" + fmt(", worst ratio %.3g", worst)};
}

Outcome stationary_grid() {
  const auto t0 = std::chrono::steady_clock::now();
  const BarrierParams bp;
  const RealVec goal = v2(0, 0), nb = v2(4, 0), root = v2(oracle::frozen::kFarRoot, 0);
  // Node grid with spacing chosen so the goal and the far root both fall on nodes.
  const double h = oracle::frozen::kFarRoot / 240.0;
  const Box box{v2(-120 * h, -200 * h), v2(279 * h, 199 * h)};
  const auto grid = grid_gradient_minima(goal, nb, bp, box, 400, 1e-3);
  bool sound = true, near_goal = false, near_root = false;
  for (const RealVec& m : grid.minima) {
    const bool g = (m - goal).norm() <= grid.cell, r = (m - root).norm() <= grid.cell;
    near_goal |= g;
    near_root |= r;
    sound &= g || r;
  }
  const RealVec printed = printed_second_root(goal, nb, bp);
  const double printed_grad = evaluate_barrier(printed, goal, nb, bp).grad_self.norm();
  const double secs = seconds_since(t0);
  const bool ok = sound && near_goal && near_root && printed_grad > 0.5 && secs < 10.0;
  return {ok, std::to_string(grid.minima.size()) + " minima, all near goal or (11.9998,0): " +
                  (sound ? "yes" : "no") + ", both present: " + (near_goal && near_root ? "yes" : "no") +
                  fmt(", |grad B| at printed root %.4g", printed_grad) + fmt(", %.2f s", secs)};
}

Outcome preset_reproduction(const TrajectoryRecord& rec, double seconds, double limit) {
  double min_pair = std::numeric_limits<double>::infinity(), max_radius = 0.0;
  for (std::size_t k = 0; k < rec.size(); ++k) {
    min_pair = std::min(min_pair, rec.pairwise_min_distance[k]);
    for (const AgentState& a : rec.states[k]) max_radius = std::max(max_radius, a.position.norm());
  }
  double final_dist = 0.0;
  for (const AgentState& a : rec.states.back()) final_dist = std::max(final_dist, (a.position - a.goal).norm());
  const double t_end = rec.times.back();
  const bool ok = rec.all_converged() && final_dist <= 1e-2 && t_end < 50.0 && min_pair > 2.0 && max_radius < 98.0 &&
                  seconds < limit;
  return {ok, std::to_string(rec.kinetic_count()) + " agents" + fmt(", converged by t=%.3f s", t_end) +
                  fmt(", max final error %.3g", final_dist) + fmt(", min pairwise %.4f", min_pair) +
                  fmt(", max radius %.3f", max_radius) + fmt(", %.2f s", seconds)};
}

Outcome fts_regime(const Runs& runs) {
  const double c = 0.5, v0 = 8.0, dt = 1e-3;
  std::vector<double> synthetic;
  for (int k = 0;; ++k) {
    const double base = std::cbrt(v0) - c * k * dt / 3.0;
    if (base <= 0) break;
    synthetic.push_back(base * base * base);
  }
  const double beta_synthetic = fit_decay_exponent(synthetic, dt, 1e-9);

  const TrajectoryRecord& rec = runs.single.front();
  const double beta_run = fts_order_fit(rec, 0, 1e-12);
  const Scenario s = single_agent();
  const double c0 = estimate_c0(v2(0, 0), v2(0, 30), s.config.barrier, Box{v2(-12, -12), v2(12, 12)}, 0.5, 100000);
  const auto fts = fts_estimate(rec.samples.front()[0].lyapunov_value, s.config.control, s.config.barrier, c0);
  const double t_conv = rec.convergence_time[0].value_or(std::numeric_limits<double>::infinity());
  const bool ok = std::abs(beta_synthetic - 2.0 / 3.0) <= 1e-2 && beta_run >= 0.5 && beta_run <= 0.85 &&
                  t_conv <= fts.settling_time_bound;
  return {ok, fmt("synthetic beta %.5f", beta_synthetic) + fmt(", run beta %.4f", beta_run) +
                  fmt(", t_conv %.3f s", t_conv) + fmt(" <= bound %.4g s", fts.settling_time_bound) +
                  fmt(" (c0 %.4g)", c0)};
}

int invoke(const std::string& exe, const std::vector<std::string>& args) {
  if (exe.empty()) {
    std::ostringstream sink;
    return app::main_entry(args, sink, sink);
  }
  std::string cmd = "\"" + exe + "\"";
  for (const auto& a : args) cmd += " \"" + a + "\"";
  cmd += " > /dev/null";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Outcome determinism(const std::string& exe) {
  const fs::path root = fs::temp_directory_path() / ("ftmp_acceptance_" + std::to_string(::getpid()));
  fs::remove_all(root);
  const fs::path a = root / "a", b = root / "b";
  const int ca = invoke(exe, {"run", "--scenario", "example1", "--seed", "1", "--out", a.string()});
  const int cb = invoke(exe, {"run", "--scenario", "example1", "--seed", "1", "--out", b.string()});
  Outcome out;
  if (ca != 0 || cb != 0) {
    out.detail = "run exited with " + std::to_string(ca) + "/" + std::to_string(cb);
  } else {
    const std::string ta = slurp(a / "trajectories.csv"), tb = slurp(b / "trajectories.csv");
    const auto da = nlohmann::json::parse(slurp(a / "manifest.json")).value("digest", std::string());
    const auto db = nlohmann::json::parse(slurp(b / "manifest.json")).value("digest", std::string());
    out.passed = !ta.empty() && ta == tb && !da.empty() && da == db;
    out.detail = std::string("trajectories.csv ") + (ta == tb ? "identical" : "differ") + " (" +
                 std::to_string(ta.size()) + " bytes), digests " + (da == db ? "identical " : "differ ") + da;
  }
  fs::remove_all(root);
  return out;
}

Outcome equivariance(const Runs& runs) {
  Eigen::MatrixXd q(2, 2);
  q << 0.0, -1.0, 1.0, 0.0;
  const Scenario base = preset("example1", 1);
  const TrajectoryRecord& a = runs.example1;
  const TrajectoryRecord b = run(transform_scenario(base, q), SimConfig{.dt = base.default_dt});
  bool same_neighbors = a.size() == b.size();
  double worst = 0.0;
  for (std::size_t k = 0; same_neighbors && k < a.size(); ++k) {
    for (std::size_t i = 0; i < a.kinetic_count(); ++i) {
      same_neighbors &= a.samples[k][i].neighbor_id == b.samples[k][i].neighbor_id;
      worst = std::max(worst, (q.transpose() * b.states[k][i].position - a.states[k][i].position).norm());
    }
  }
  if (!same_neighbors) return {false, "neighbour choices differ between the runs (tie-break exercised)"};
  return {worst <= 1e-9, fmt("max deviation after inverse rotation %.3g", worst) + " over " +
                             std::to_string(a.size()) + " samples"};
}

}  // namespace

int main(int argc, char** argv) {
  const std::string exe = argc > 1 ? argv[1] : "";

  Runs runs;
  {
    const auto t0 = std::chrono::steady_clock::now();
    for (double dt : {1e-3, 5e-4, 2.5e-4}) runs.single.push_back(run(single_agent(), SimConfig{.dt = dt, .t_max = 60}));
    runs.single_seconds = seconds_since(t0);
  }
  {
    const auto t0 = std::chrono::steady_clock::now();
    const Scenario s = preset("example1", 1);
    runs.example1 = run(s, SimConfig{.dt = s.default_dt, .t_max = 50});
    runs.example1_seconds = seconds_since(t0);
  }
  {
    const auto t0 = std::chrono::steady_clock::now();
    const Scenario s = preset("example2", 1);
    runs.example2 = run(s, SimConfig{.dt = s.default_dt, .t_max = 50});
    runs.example2_seconds = seconds_since(t0);
  }

  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"gradient oracle", gradient_oracle},
      {"descent residual halving", [&] { return descent_halving(runs); }},
      {"quadratic upper bound", [&] { return quadratic_bound(runs); }},
      {"stationary point grid oracle", stationary_grid},
      {"example1 reproduction", [&] { return preset_reproduction(runs.example1, runs.example1_seconds, 120.0); }},
      {"example2 reproduction", [&] { return preset_reproduction(runs.example2, runs.example2_seconds, 300.0); }},
      {"finite-time regime", [&] { return fts_regime(runs); }},
      {"determinism", [&] { return determinism(exe); }},
      {"rotation equivariance", [&] { return equivariance(runs); }},
  };

  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failures += !o.passed;
    std::cout << "criterion " << i + 1 << " " << (o.passed ? "PASS" : "FAIL") << " " << criteria[i].first << ": "
              << o.detail << std::endl;
  }
  std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed") << std::endl;
  return failures == 0 ? 0 : 1;
}
