#include "ftmp/app.hpp"

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <functional>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include <CLI11.hpp>
#include <json.hpp>

#include "ftmp/error.hpp"
#include "ftmp/output.hpp"

#ifndef FTMP_VERSION
#define FTMP_VERSION "0.0.0"
#endif

namespace ftmp::app {

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

std::string utc_timestamp(std::chrono::system_clock::time_point tp) {
  const std::time_t t = std::chrono::system_clock::to_time_t(tp);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void write_file(const fs::path& path, const std::function<void(std::ostream&)>& body) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  body(out);
  out.flush();
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json parameters_json(const Scenario& scenario, const SimConfig& sim, const RunSettings& s) {
  const WorldConfig& c = scenario.config;
  return json{
      {"kinetic_agents", c.kinetic_count},
      {"boundary_agents", c.boundary_count},
      {"dim", c.dim()},
      {"arena_radius", c.arena_radius},
      {"agent_radius", c.agent_radius},
      {"clearance", c.barrier.clearance},
      {"epsilon", c.barrier.epsilon},
      {"x0_floor", c.barrier.x0_floor},
      {"k1", c.control.k1},
      {"alpha", c.control.alpha},
      {"dot_guard_tol", c.control.dot_guard_tol},
      {"grad_zero_tol", c.control.grad_zero_tol},
      {"correction_cap", c.control.correction_cap},
      {"dt", sim.dt},
      {"t_max", sim.t_max},
      {"conv_tol", sim.conv_tol},
      {"abort_on_collision", sim.abort_on_collision},
      {"sample_every", s.sample_every},
      {"snapshots", s.snapshots},
  };
}

json summary_json(const TrajectoryRecord& r) {
  double min_pair = std::numeric_limits<double>::infinity();
  double min_clear = std::numeric_limits<double>::infinity();
  for (double d : r.pairwise_min_distance) min_pair = std::min(min_pair, d);
  for (double d : r.min_clearance) min_clear = std::min(min_clear, d);
  std::size_t converged = 0, collisions = 0;
  for (const auto& c : r.convergence_time) converged += c.has_value();
  for (const Event& e : r.events) collisions += e.kind == EventKind::Collision;
  json j{{"samples", r.size()},
         {"final_time", r.times.empty() ? 0.0 : r.times.back()},
         {"converged_agents", converged},
         {"all_converged", r.all_converged()},
         {"collision_events", collisions},
         {"aborted", r.aborted}};
  j["min_pairwise_distance"] = std::isfinite(min_pair) ? json(min_pair) : json(nullptr);
  j["min_clearance"] = std::isfinite(min_clear) ? json(min_clear) : json(nullptr);
  return j;
}

std::string run_dir_name(const RunSettings& s) {
  std::string name = s.label;
  if (s.label == "random") name += "_n" + std::to_string(s.agents);
  return name + "_seed" + std::to_string(s.seed);
}

}  // namespace

fs::path default_run_dir(const RunSettings& settings) {
  const char* root = std::getenv("FTMP_OUT_DIR");
  const fs::path base = (root != nullptr && *root != '\0') ? fs::path(root) : fs::path("ftmp_runs");
  return base / run_dir_name(settings);
}

RunOutcome execute_run(const RunSettings& settings, const fs::path& dir) {
  const Scenario scenario = build_scenario(settings);
  const SimConfig sim = sim_config(settings, scenario);

  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw std::runtime_error("cannot create " + dir.string() + ": " + ec.message());

  const auto start_wall = std::chrono::system_clock::now();
  RunOutcome outcome;
  outcome.record = run(scenario, sim);
  outcome.digest = record_digest(outcome.record);
  const TrajectoryRecord& r = outcome.record;

  write_file(dir / "trajectories.csv", [&](std::ostream& o) { write_trajectories_csv(o, r, settings.sample_every); });
  write_file(dir / "distances.csv", [&](std::ostream& o) { write_distances_csv(o, r, settings.sample_every); });
  write_file(dir / "events.csv", [&](std::ostream& o) { write_events_csv(o, r); });
  write_file(dir / "distances.svg", [&](std::ostream& o) { write_distances_svg(o, r, settings.sample_every); });
  write_file(dir / "snapshots.svg", [&](std::ostream& o) { write_snapshots_svg(o, r, settings.snapshots); });
  save_settings(settings, dir / "scenario.ini");
  outcome.outputs = {"trajectories.csv", "distances.csv", "events.csv", "distances.svg",
                     "snapshots.svg",    "scenario.ini",  "manifest.json"};

  const auto end_wall = std::chrono::system_clock::now();
  json manifest{
      {"tool", "ftmp"},
      {"version", FTMP_VERSION},
      {"scenario", scenario.label},
      {"seed", settings.seed},
      {"parameters", parameters_json(scenario, sim, settings)},
      {"start_time", utc_timestamp(start_wall)},
      {"end_time", utc_timestamp(end_wall)},
      {"wall_seconds", std::chrono::duration<double>(end_wall - start_wall).count()},
      {"outputs", outcome.outputs},
      {"digest", "sha256:" + outcome.digest},
      {"summary", summary_json(r)},
  };
  write_file(dir / "manifest.json", [&](std::ostream& o) { o << manifest.dump(2) << '\n'; });
  return outcome;
}

std::vector<Finding> audit_run_dir(const fs::path& dir) {
  const RunSettings settings = load_settings(dir / "scenario.ini");
  json manifest;
  try {
    manifest = json::parse(read_file(dir / "manifest.json"));
  } catch (const json::exception& e) {
    throw std::runtime_error("manifest.json: " + std::string(e.what()));
  }
  std::ifstream csv(dir / "trajectories.csv", std::ios::binary);
  if (!csv) throw std::runtime_error("cannot open " + (dir / "trajectories.csv").string());
  const auto rows = read_trajectories_csv(csv);

  const Scenario scenario = build_scenario(settings);
  const TrajectoryRecord record = run(scenario, sim_config(settings, scenario));
  std::vector<Finding> findings;

  const std::string digest = "sha256:" + record_digest(record);
  const std::string recorded = manifest.value("digest", std::string());
  findings.push_back({"digest_reproduced", digest == recorded, digest == recorded ? 0.0 : 1.0,
                      digest == recorded ? "-" : "manifest " + recorded});

  // Every emitted row must equal the re-simulated state bit for bit.
  std::vector<const AgentState*> expected;
  std::vector<double> expected_t;
  bool first = true;
  for (std::size_t k : sample_indices(record, settings.sample_every)) {
    for (const AgentState& a : record.states[k]) {
      expected.push_back(&a);
      expected_t.push_back(record.times[k]);
    }
    if (first) {
      for (const AgentState& a : record.static_agents) {
        expected.push_back(&a);
        expected_t.push_back(record.times[k]);
      }
      first = false;
    }
  }
  bool csv_ok = rows.size() == expected.size();
  double worst = csv_ok ? 0.0 : std::numeric_limits<double>::infinity();
  std::string where = csv_ok ? "-" : "row count " + std::to_string(rows.size()) + " vs " +
                                         std::to_string(expected.size());
  for (std::size_t i = 0; csv_ok && i < rows.size(); ++i) {
    const TrajectoryRow& row = rows[i];
    const AgentState& a = *expected[i];
    bool same = row.t == expected_t[i] && row.agent_id == a.id && row.kind == to_string(a.kind) &&
                row.position.size() == static_cast<std::size_t>(a.position.size());
    for (std::size_t c = 0; same && c < row.position.size(); ++c) {
      const auto ci = static_cast<Eigen::Index>(c);
      worst = std::max({worst, std::abs(row.position[c] - a.position(ci)), std::abs(row.velocity[c] - a.velocity(ci))});
      same = row.position[c] == a.position(ci) && row.velocity[c] == a.velocity(ci);
    }
    if (!same) {
      csv_ok = false;
      where = "line " + std::to_string(i + 2);
    }
  }
  findings.push_back({"csv_round_trip", csv_ok, worst, where});

  const auto analysis = audit_record(record);
  findings.insert(findings.end(), analysis.begin(), analysis.end());
  return findings;
}

namespace {

int command_run(const RunSettings& settings, const std::string& out_dir, std::ostream& out, std::ostream& err) {
  const fs::path dir = out_dir.empty() ? default_run_dir(settings) : fs::path(out_dir);
  RunOutcome outcome;
  try {
    build_scenario(settings);
  } catch (const Error& e) {
    err << "ftmp run: " << e.what() << '\n';
    return kBadArguments;
  }
  try {
    outcome = execute_run(settings, dir);
  } catch (const Error& e) {
    err << "ftmp run: " << e.what() << '\n';
    return kFailure;
  } catch (const std::exception& e) {
    err << "ftmp run: " << e.what() << '\n';
    return kIoFailure;
  }
  const TrajectoryRecord& r = outcome.record;
  std::size_t converged = 0;
  for (const auto& c : r.convergence_time) converged += c.has_value();
  out << "wrote " << dir.string() << '\n'
      << "samples " << r.size() << ", final t " << format_real(r.times.empty() ? 0.0 : r.times.back())
      << ", converged " << converged << '/' << r.kinetic_count() << '\n'
      << "digest sha256:" << outcome.digest << '\n';
  return kOk;
}

int command_audit(const std::string& dir, std::ostream& out, std::ostream& err) {
  std::vector<Finding> findings;
  try {
    findings = audit_run_dir(dir);
  } catch (const Error& e) {
    err << "ftmp audit: " << e.what() << '\n';
    return e.code() == ErrorCode::InvalidArgument ? kBadArguments : kFailure;
  } catch (const std::exception& e) {
    err << "ftmp audit: " << e.what() << '\n';
    return kIoFailure;
  }
  const std::string report = format_report(findings);
  try {
    write_file(fs::path(dir) / "audit.txt", [&](std::ostream& o) { o << report; });
  } catch (const std::exception& e) {
    err << "ftmp audit: " << e.what() << '\n';
    return kIoFailure;
  }
  out << report;
  return all_passed(findings) ? kOk : kFailure;
}

int command_verify(std::uint64_t seed, const std::string& report_path, std::ostream& out, std::ostream& err) {
  const auto findings = verify_lemmas(seed);
  const std::string report = format_report(findings);
  out << report;
  if (!report_path.empty()) {
    try {
      write_file(report_path, [&](std::ostream& o) { o << report; });
    } catch (const std::exception& e) {
      err << "ftmp verify-lemmas: " << e.what() << '\n';
      return kIoFailure;
    }
  }
  return all_passed(findings) ? kOk : kFailure;
}

}  // namespace

int main_entry(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Finite-time multi-agent motion planning simulator", "ftmp"};
  app.require_subcommand(1);
  app.set_version_flag("--version", FTMP_VERSION);

  RunSettings flags;
  std::string config_path, out_dir, snapshots;
  auto* run_cmd = app.add_subcommand("run", "Simulate a scenario and write its outputs");
  auto* o_scenario = run_cmd->add_option("--scenario", flags.label, "example1, example2 or random")
                         ->check(CLI::IsMember({"example1", "example2", "random"}));
  auto* o_n = run_cmd->add_option("--n", flags.agents, "Kinetic agents (random scenario)")->check(CLI::PositiveNumber);
  auto* o_seed = run_cmd->add_option("--seed", flags.seed, "Scenario seed");
  auto* o_dt = run_cmd->add_option("--dt", flags.dt, "Integration step (s)")->check(CLI::PositiveNumber);
  auto* o_tmax = run_cmd->add_option("--t-max", flags.t_max, "Simulated time limit (s)")->check(CLI::PositiveNumber);
  auto* o_k1 = run_cmd->add_option("--k1", flags.k1, "Controller gain")->check(CLI::PositiveNumber);
  auto* o_alpha = run_cmd->add_option("--alpha", flags.alpha, "Controller exponent in (0,1)");
  auto* o_every = run_cmd->add_option("--sample-every", flags.sample_every, "CSV row stride in samples")
                      ->check(CLI::PositiveNumber);
  auto* o_snap = run_cmd->add_option("--snapshots", snapshots, "Snapshot times as fractions, e.g. 0,0.5,1");
  auto* o_abort = run_cmd->add_flag("--abort-on-collision", flags.abort_on_collision, "Stop at the first collision");
  run_cmd->add_option("--config", config_path, "INI settings file; flags override it");
  run_cmd->add_option("--out", out_dir, "Output directory");

  std::string audit_dir;
  auto* audit_cmd = app.add_subcommand("audit", "Re-simulate a run directory and audit it");
  audit_cmd->add_option("--out", audit_dir, "Run directory")->required();

  std::uint64_t verify_seed = 1;
  std::string verify_report;
  auto* verify_cmd = app.add_subcommand("verify-lemmas", "Run the analytic property battery");
  verify_cmd->add_option("--seed", verify_seed, "Sampling seed");
  verify_cmd->add_option("--report", verify_report, "Also write the report to this file");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kBadArguments;
  }

  if (run_cmd->parsed()) {
    RunSettings settings;
    try {
      if (!config_path.empty()) settings = load_settings(config_path);
      if (*o_scenario) settings.label = flags.label;
      if (*o_n) settings.agents = flags.agents;
      if (*o_seed) settings.seed = flags.seed;
      if (*o_dt) settings.dt = flags.dt;
      if (*o_tmax) settings.t_max = flags.t_max;
      if (*o_k1) settings.k1 = flags.k1;
      if (*o_alpha) settings.alpha = flags.alpha;
      if (*o_every) settings.sample_every = flags.sample_every;
      if (*o_snap) settings.snapshots = parse_fraction_list(snapshots);
      if (*o_abort) settings.abort_on_collision = flags.abort_on_collision;
    } catch (const Error& e) {
      err << "ftmp run: " << e.what() << '\n';
      return kBadArguments;
    } catch (const std::exception& e) {
      err << "ftmp run: " << e.what() << '\n';
      return kIoFailure;
    }
    if (*o_n && settings.label != "random") {
      err << "ftmp run: --n applies to the random scenario only\n";
      return kBadArguments;
    }
    return command_run(settings, out_dir, out, err);
  }
  if (audit_cmd->parsed()) return command_audit(audit_dir, out, err);
  if (verify_cmd->parsed()) return command_verify(verify_seed, verify_report, out, err);
  return kBadArguments;
}

int main_entry(int argc, char** argv, std::ostream& out, std::ostream& err) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return main_entry(args, out, err);
}

}  // namespace ftmp::app
