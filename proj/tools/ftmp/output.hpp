#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "ftmp/sim.hpp"

namespace ftmp::app {

/// Shortest decimal text that round-trips to the same double.
std::string format_real(double x);

/// Sample indices written to the CSV files: every `stride`-th sample plus the last one.
std::vector<std::size_t> sample_indices(const TrajectoryRecord& record, int stride);

/// t,agent_id,kind,x0..,v0..,dist_to_goal. Static agents appear only in the first block.
void write_trajectories_csv(std::ostream& out, const TrajectoryRecord& record, int stride);
/// t,id_a,id_b,distance,min_distance over kinetic pairs.
void write_distances_csv(std::ostream& out, const TrajectoryRecord& record, int stride);
/// t,kind,agent_id,detail.
void write_events_csv(std::ostream& out, const TrajectoryRecord& record);

void write_distances_svg(std::ostream& out, const TrajectoryRecord& record, int stride);
void write_snapshots_svg(std::ostream& out, const TrajectoryRecord& record,
                         const std::vector<double>& fractions);

/// Hex SHA-256 over a canonical binary serialization of the full record.
std::string record_digest(const TrajectoryRecord& record);

/// A parsed trajectories.csv row.
struct TrajectoryRow {
  double t = 0.0;
  int agent_id = -1;
  std::string kind;
  std::vector<double> position;
  std::vector<double> velocity;
  double dist_to_goal = 0.0;
};

/// Throws std::runtime_error on malformed input.
std::vector<TrajectoryRow> read_trajectories_csv(std::istream& in);

}  // namespace ftmp::app
