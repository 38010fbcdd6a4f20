#include "ftmp/settings.hpp"

#include <charconv>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "ftmp/error.hpp"

namespace ftmp::app {

namespace pt = boost::property_tree;

namespace {

std::string shortest(double x) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

double to_double(const std::string& key, const std::string& text) {
  double v = 0.0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size()) {
    throw Error(ErrorCode::InvalidArgument, "bad number for " + key + ": '" + text + "'");
  }
  return v;
}

template <class Int>
Int to_int(const std::string& key, const std::string& text) {
  Int v = 0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size()) {
    throw Error(ErrorCode::InvalidArgument, "bad integer for " + key + ": '" + text + "'");
  }
  return v;
}

bool to_bool(const std::string& key, const std::string& text) {
  if (text == "true" || text == "1") return true;
  if (text == "false" || text == "0") return false;
  throw Error(ErrorCode::InvalidArgument, "bad boolean for " + key + ": '" + text + "'");
}

void put_optional(pt::ptree& tree, const std::string& key, const std::optional<double>& v) {
  if (v) tree.put(key, shortest(*v));
}

}  // namespace

std::vector<double> parse_fraction_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const double v = to_double("snapshots", item);
    if (v < 0.0 || v > 1.0) throw Error(ErrorCode::InvalidArgument, "snapshot fractions must lie in [0, 1]");
    out.push_back(v);
  }
  if (out.empty()) throw Error(ErrorCode::InvalidArgument, "empty snapshot list");
  return out;
}

RunSettings load_settings(const std::filesystem::path& path, RunSettings s) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  pt::ptree tree;
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw Error(ErrorCode::InvalidArgument, e.what());
  }

  for (const auto& [section, body] : tree) {
    for (const auto& [name, node] : body) {
      const std::string key = section + "." + name;
      const std::string v = node.get_value<std::string>();
      if (key == "scenario.label") s.label = v;
      else if (key == "scenario.agents") s.agents = to_int<int>(key, v);
      else if (key == "scenario.seed") s.seed = to_int<std::uint64_t>(key, v);
      else if (key == "world.arena_radius") s.arena_radius = to_double(key, v);
      else if (key == "world.agent_radius") s.agent_radius = to_double(key, v);
      else if (key == "barrier.clearance") s.clearance = to_double(key, v);
      else if (key == "barrier.epsilon") s.epsilon = to_double(key, v);
      else if (key == "control.k1") s.k1 = to_double(key, v);
      else if (key == "control.alpha") s.alpha = to_double(key, v);
      else if (key == "control.dot_guard_tol") s.dot_guard_tol = to_double(key, v);
      else if (key == "control.grad_zero_tol") s.grad_zero_tol = to_double(key, v);
      else if (key == "control.correction_cap") s.correction_cap = to_double(key, v);
      else if (key == "sim.dt") s.dt = to_double(key, v);
      else if (key == "sim.t_max") s.t_max = to_double(key, v);
      else if (key == "sim.conv_tol") s.conv_tol = to_double(key, v);
      else if (key == "sim.abort_on_collision") s.abort_on_collision = to_bool(key, v);
      else if (key == "output.sample_every") s.sample_every = to_int<int>(key, v);
      else if (key == "output.snapshots") s.snapshots = parse_fraction_list(v);
      else throw Error(ErrorCode::InvalidArgument, "unknown setting '" + key + "'");
    }
  }
  return s;
}

void save_settings(const RunSettings& s, const std::filesystem::path& path) {
  pt::ptree tree;
  tree.put("scenario.label", s.label);
  tree.put("scenario.agents", s.agents);
  tree.put("scenario.seed", s.seed);
  put_optional(tree, "world.arena_radius", s.arena_radius);
  put_optional(tree, "world.agent_radius", s.agent_radius);
  put_optional(tree, "barrier.clearance", s.clearance);
  put_optional(tree, "barrier.epsilon", s.epsilon);
  put_optional(tree, "control.k1", s.k1);
  put_optional(tree, "control.alpha", s.alpha);
  put_optional(tree, "control.dot_guard_tol", s.dot_guard_tol);
  put_optional(tree, "control.grad_zero_tol", s.grad_zero_tol);
  put_optional(tree, "control.correction_cap", s.correction_cap);
  put_optional(tree, "sim.dt", s.dt);
  tree.put("sim.t_max", shortest(s.t_max));
  tree.put("sim.conv_tol", shortest(s.conv_tol));
  tree.put("sim.abort_on_collision", s.abort_on_collision ? "true" : "false");
  tree.put("output.sample_every", s.sample_every);
  std::string snaps;
  for (double f : s.snapshots) snaps += (snaps.empty() ? "" : ",") + shortest(f);
  tree.put("output.snapshots", snaps);

  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  pt::write_ini(out, tree);
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

Scenario build_scenario(const RunSettings& s) {
  Scenario scenario;
  if (s.label == "random") {
    RandomScenarioOptions opt;
    if (s.arena_radius) opt.arena_radius = *s.arena_radius;
    if (s.agent_radius) opt.agent_radius = *s.agent_radius;
    if (s.clearance) opt.barrier.clearance = *s.clearance;
    if (s.epsilon) opt.barrier.epsilon = *s.epsilon;
    scenario = random_scenario(s.agents, s.seed, opt);
  } else {
    if (s.arena_radius || s.agent_radius || s.clearance) {
      throw Error(ErrorCode::InvalidArgument, "world geometry overrides apply to the random scenario only");
    }
    scenario = preset(s.label, s.seed);
    if (s.epsilon) scenario.config.barrier.epsilon = *s.epsilon;
  }
  ControlParams& cp = scenario.config.control;
  if (s.k1) cp.k1 = *s.k1;
  if (s.alpha) cp.alpha = *s.alpha;
  if (s.dot_guard_tol) cp.dot_guard_tol = *s.dot_guard_tol;
  if (s.grad_zero_tol) cp.grad_zero_tol = *s.grad_zero_tol;
  if (s.correction_cap) cp.correction_cap = *s.correction_cap;

  const auto violations = validate_config(scenario.config);
  if (!violations.empty()) {
    throw Error(ErrorCode::InvalidArgument,
                "configuration violates " + violations.front().invariant + ": " + violations.front().detail);
  }
  return scenario;
}

SimConfig sim_config(const RunSettings& s, const Scenario& scenario) {
  SimConfig sc;
  sc.dt = s.dt.value_or(scenario.default_dt);
  sc.t_max = s.t_max;
  sc.conv_tol = s.conv_tol;
  sc.abort_on_collision = s.abort_on_collision;
  return sc;
}

}  // namespace ftmp::app
