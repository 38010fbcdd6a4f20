#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include "ftmp/app.hpp"
#include "ftmp/output.hpp"

namespace fs = std::filesystem;
using namespace ftmp::app;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("ftmp_test_" + std::to_string(::getpid()) + "_" +
                                        std::to_string(reinterpret_cast<std::uintptr_t>(this)));
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

int cli(const std::vector<std::string>& args, std::string* out_text = nullptr) {
  std::ostringstream out, err;
  const int code = main_entry(args, out, err);
  if (out_text) *out_text = out.str() + err.str();
  return code;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST(Cli, BadArguments) {
  EXPECT_EQ(cli({}), kBadArguments);
  EXPECT_EQ(cli({"fly"}), kBadArguments);
  EXPECT_EQ(cli({"run", "--scenario", "example9"}), kBadArguments);
  EXPECT_EQ(cli({"run", "--dt", "-1"}), kBadArguments);
  EXPECT_EQ(cli({"run", "--scenario", "example1", "--n", "3"}), kBadArguments);
  EXPECT_EQ(cli({"audit"}), kBadArguments);
  EXPECT_EQ(cli({"--help"}), kOk);
}

TEST(Cli, MissingRunDirectoryIsIoFailure) {
  TempDir tmp;
  EXPECT_EQ(cli({"audit", "--out", (tmp.path / "nothing").string()}), kIoFailure);
  EXPECT_EQ(cli({"run", "--config", (tmp.path / "missing.ini").string()}), kIoFailure);
}

TEST(Cli, RunAuditRoundTrip) {
  TempDir tmp;
  const fs::path dir = tmp.path / "run";
  ASSERT_EQ(cli({"run", "--scenario", "random", "--n", "3", "--seed", "4", "--t-max", "2", "--out", dir.string()}),
            kOk);
  for (const char* f : {"trajectories.csv", "distances.csv", "events.csv", "manifest.json", "scenario.ini",
                        "distances.svg", "snapshots.svg"}) {
    EXPECT_TRUE(fs::exists(dir / f)) << f;
  }
  std::string report;
  // A 2 s horizon does not converge, so the audit fails but the digest and CSV checks pass.
  EXPECT_EQ(cli({"audit", "--out", dir.string()}, &report), kFailure);
  EXPECT_NE(report.find("digest_reproduced PASS"), std::string::npos) << report;
  EXPECT_NE(report.find("csv_round_trip PASS"), std::string::npos) << report;
  EXPECT_NE(report.find("convergence FAIL"), std::string::npos) << report;
  EXPECT_TRUE(fs::exists(dir / "audit.txt"));
}

TEST(Cli, AuditDetectsTampering) {
  TempDir tmp;
  const fs::path dir = tmp.path / "run";
  ASSERT_EQ(cli({"run", "--scenario", "example1", "--t-max", "50", "--out", dir.string()}), kOk);
  EXPECT_EQ(cli({"audit", "--out", dir.string()}), kOk);
  std::string csv = slurp(dir / "trajectories.csv");
  const auto pos = csv.find('\n', csv.find('\n') + 1) + 3;
  csv[pos] = csv[pos] == '1' ? '2' : '1';
  std::ofstream(dir / "trajectories.csv", std::ios::binary) << csv;
  std::string report;
  EXPECT_EQ(cli({"audit", "--out", dir.string()}, &report), kFailure);
  EXPECT_NE(report.find("csv_round_trip FAIL"), std::string::npos) << report;
}

TEST(Cli, ConfigFileAndFlagOverride) {
  TempDir tmp;
  const fs::path ini = tmp.path / "s.ini";
  std::ofstream(ini) << "[scenario]\nlabel=random\nagents=2\nseed=3\n[sim]\nt_max=0.5\n[output]\nsample_every=5\n";
  const fs::path dir = tmp.path / "run";
  ASSERT_EQ(cli({"run", "--config", ini.string(), "--seed", "9", "--out", dir.string()}), kOk);
  const auto settings = load_settings(dir / "scenario.ini");
  EXPECT_EQ(settings.label, "random");
  EXPECT_EQ(settings.agents, 2);
  EXPECT_EQ(settings.seed, 9u);
  EXPECT_EQ(settings.t_max, 0.5);
  EXPECT_EQ(settings.sample_every, 5);

  std::ofstream(ini) << "[scenario]\ncolour=blue\n";
  EXPECT_EQ(cli({"run", "--config", ini.string(), "--out", dir.string()}), kBadArguments);
}

TEST(Cli, DefaultOutputRootFromEnvironment) {
  TempDir tmp;
  ::setenv("FTMP_OUT_DIR", tmp.path.c_str(), 1);
  RunSettings s;
  s.t_max = 0.1;
  EXPECT_EQ(default_run_dir(s), tmp.path / "example1_seed1");
  ASSERT_EQ(cli({"run", "--t-max", "0.1"}), kOk);
  EXPECT_TRUE(fs::exists(tmp.path / "example1_seed1" / "manifest.json"));
  ::unsetenv("FTMP_OUT_DIR");
  EXPECT_EQ(default_run_dir(s), fs::path("ftmp_runs") / "example1_seed1");
}

TEST(Cli, VerifyLemmasDeterministic) {
  std::string a, b;
  EXPECT_EQ(cli({"verify-lemmas", "--seed", "7"}, &a), kOk);
  EXPECT_EQ(cli({"verify-lemmas", "--seed", "7"}, &b), kOk);
  EXPECT_EQ(a, b);
}

TEST(Output, RealFormattingRoundTrips) {
  for (double x : {0.1, 1.0 / 3.0, -2.5e-300, 98.0, 1e22}) {
    EXPECT_EQ(std::stod(format_real(x)), x);
  }
}

TEST(Output, CsvReaderRejectsMalformedInput) {
  std::istringstream bad("t,agent_id,kind,x0,x1,v0,v1,dist_to_goal\n0,1,kinetic,abc,0,0,0,0\n");
  EXPECT_THROW(read_trajectories_csv(bad), std::runtime_error);
  std::istringstream header("a,b\n");
  EXPECT_THROW(read_trajectories_csv(header), std::runtime_error);
}

TEST(Cli, Example2RecordsEveryConvergence) {
  TempDir tmp;
  const fs::path dir = tmp.path / "run";
  ASSERT_EQ(cli({"run", "--scenario", "example2", "--dt", "2e-3", "--out", dir.string()}), kOk);
  std::istringstream events(slurp(dir / "events.csv"));
  std::string line;
  std::set<std::string> converged;
  while (std::getline(events, line)) {
    std::stringstream row(line);
    std::string t, kind, id;
    std::getline(row, t, ',');
    std::getline(row, kind, ',');
    std::getline(row, id, ',');
    if (kind == "converged") converged.insert(id);
  }
  EXPECT_EQ(converged.size(), 20u);

  // Minimum over all rows of the per-row minimum exceeds the clearance.
  std::istringstream dist(slurp(dir / "distances.csv"));
  std::getline(dist, line);
  double lowest = std::numeric_limits<double>::infinity();
  while (std::getline(dist, line)) lowest = std::min(lowest, std::stod(line.substr(line.rfind(',') + 1)));
  EXPECT_GT(lowest, 2.0);
}
