#include "ftmp/output.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include <openssl/evp.h>

namespace ftmp::app {

std::string format_real(double x) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

std::vector<std::size_t> sample_indices(const TrajectoryRecord& record, int stride) {
  std::vector<std::size_t> out;
  const std::size_t n = record.size();
  if (n == 0) return out;
  const std::size_t s = static_cast<std::size_t>(std::max(stride, 1));
  for (std::size_t k = 0; k < n; k += s) out.push_back(k);
  if (out.back() != n - 1) out.push_back(n - 1);
  return out;
}

namespace {

void write_agent_row(std::ostream& out, double t, const AgentState& a) {
  out << format_real(t) << ',' << a.id << ',' << to_string(a.kind);
  for (Eigen::Index c = 0; c < a.position.size(); ++c) out << ',' << format_real(a.position(c));
  for (Eigen::Index c = 0; c < a.velocity.size(); ++c) out << ',' << format_real(a.velocity(c));
  out << ',' << format_real((a.position - a.goal).norm()) << '\n';
}

int record_dim(const TrajectoryRecord& record) {
  if (!record.states.empty() && !record.states.front().empty()) {
    return static_cast<int>(record.states.front().front().position.size());
  }
  if (!record.static_agents.empty()) return static_cast<int>(record.static_agents.front().position.size());
  return 2;
}

}  // namespace

void write_trajectories_csv(std::ostream& out, const TrajectoryRecord& record, int stride) {
  const int dim = record_dim(record);
  out << "t,agent_id,kind";
  for (int c = 0; c < dim; ++c) out << ",x" << c;
  for (int c = 0; c < dim; ++c) out << ",v" << c;
  out << ",dist_to_goal\n";
  bool first = true;
  for (std::size_t k : sample_indices(record, stride)) {
    for (const AgentState& a : record.states[k]) write_agent_row(out, record.times[k], a);
    if (first) {
      for (const AgentState& a : record.static_agents) write_agent_row(out, record.times[k], a);
      first = false;
    }
  }
}

void write_distances_csv(std::ostream& out, const TrajectoryRecord& record, int stride) {
  out << "t,id_a,id_b,distance,min_distance\n";
  for (std::size_t k : sample_indices(record, stride)) {
    const auto& agents = record.states[k];
    const std::string t = format_real(record.times[k]);
    const std::string dmin = format_real(record.pairwise_min_distance[k]);
    for (std::size_t a = 0; a < agents.size(); ++a) {
      for (std::size_t b = a + 1; b < agents.size(); ++b) {
        out << t << ',' << agents[a].id << ',' << agents[b].id << ','
            << format_real((agents[a].position - agents[b].position).norm()) << ',' << dmin << '\n';
      }
    }
  }
}

void write_events_csv(std::ostream& out, const TrajectoryRecord& record) {
  out << "t,kind,agent_id,detail\n";
  for (const Event& e : record.events) {
    std::string detail = e.detail;
    std::replace(detail.begin(), detail.end(), ',', ';');
    out << format_real(e.time) << ',' << to_string(e.kind) << ',' << e.agent_id << ','
        << detail << '\n';
  }
}

namespace {

constexpr const char* kPalette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
                                    "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};

std::string colour(std::size_t i) { return kPalette[i % (sizeof kPalette / sizeof *kPalette)]; }

std::string fixed(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", x);
  return buf;
}

}  // namespace

void write_distances_svg(std::ostream& out, const TrajectoryRecord& record, int stride) {
  const double W = 800, H = 500, L = 60, B = 40, T = 20, Rm = 20;
  const auto idx = sample_indices(record, stride);
  const double t_end = record.times.empty() ? 1.0 : std::max(record.times.back(), 1e-12);
  double d_max = record.barrier.clearance * 1.5;
  for (std::size_t k : idx) {
    const auto& a = record.states[k];
    for (std::size_t i = 0; i < a.size(); ++i)
      for (std::size_t j = i + 1; j < a.size(); ++j) d_max = std::max(d_max, (a[i].position - a[j].position).norm());
  }
  auto px = [&](double t) { return L + (W - L - Rm) * t / t_end; };
  auto py = [&](double d) { return H - B - (H - B - T) * d / d_max; };

  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
      << "<line x1=\"" << L << "\" y1=\"" << H - B << "\" x2=\"" << W - Rm << "\" y2=\"" << H - B
      << "\" stroke=\"black\"/>\n"
      << "<line x1=\"" << L << "\" y1=\"" << T << "\" x2=\"" << L << "\" y2=\"" << H - B << "\" stroke=\"black\"/>\n"
      << "<text x=\"" << W / 2 << "\" y=\"" << H - 8 << "\" text-anchor=\"middle\">t (s), end "
      << fixed(t_end) << "</text>\n"
      << "<text x=\"14\" y=\"" << H / 2 << "\" transform=\"rotate(-90 14 " << H / 2
      << ")\" text-anchor=\"middle\">pairwise distance</text>\n"
      << "<text x=\"" << L - 6 << "\" y=\"" << T + 4 << "\" text-anchor=\"end\">" << fixed(d_max) << "</text>\n";

  const std::size_t n = record.kinetic_count();
  std::size_t pair = 0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j, ++pair) {
      out << "<polyline fill=\"none\" stroke-width=\"0.8\" stroke=\"" << colour(pair) << "\" points=\"";
      for (std::size_t k : idx) {
        const double d = (record.states[k][i].position - record.states[k][j].position).norm();
        out << fixed(px(record.times[k])) << ',' << fixed(py(d)) << ' ';
      }
      out << "\"/>\n";
    }
  }
  const double yc = py(record.barrier.clearance);
  out << "<line x1=\"" << L << "\" y1=\"" << fixed(yc) << "\" x2=\"" << W - Rm << "\" y2=\"" << fixed(yc)
      << "\" stroke=\"red\" stroke-dasharray=\"6 4\"/>\n"
      << "<text x=\"" << W - Rm << "\" y=\"" << fixed(yc - 4) << "\" text-anchor=\"end\" fill=\"red\">d_c</text>\n"
      << "</svg>\n";
}

void write_snapshots_svg(std::ostream& out, const TrajectoryRecord& record, const std::vector<double>& fractions) {
  const double panel = 300, gap = 10;
  const std::size_t n = std::max<std::size_t>(fractions.size(), 1);
  const double W = n * panel + (n + 1) * gap, H = panel + 2 * gap + 20;
  const double R = record.arena_radius > 0 ? record.arena_radius : 1.0;
  const double scale = (panel / 2 - 4) / (R * 1.05);

  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  if (record.size() == 0) {
    out << "</svg>\n";
    return;
  }
  const double t_end = record.times.back();
  for (std::size_t p = 0; p < fractions.size(); ++p) {
    const double t = fractions[p] * t_end;
    const auto it = std::lower_bound(record.times.begin(), record.times.end(), t - 1e-12);
    const std::size_t k = std::min<std::size_t>(it - record.times.begin(), record.size() - 1);
    const double cx = gap + p * (panel + gap) + panel / 2, cy = gap + panel / 2;
    auto X = [&](const RealVec& v) { return fixed(cx + scale * v(0)); };
    auto Y = [&](const RealVec& v) { return fixed(cy - scale * v(1)); };
    out << "<g>\n<circle cx=\"" << cx << "\" cy=\"" << cy << "\" r=\"" << fixed(R * scale)
        << "\" fill=\"none\" stroke=\"#999\"/>\n";
    for (const AgentState& s : record.static_agents) {
      out << "<circle cx=\"" << X(s.position) << "\" cy=\"" << Y(s.position) << "\" r=\"1\" fill=\"#555\"/>\n";
    }
    for (std::size_t i = 0; i < record.kinetic_count(); ++i) {
      const AgentState& a = record.states[k][i];
      out << "<polyline fill=\"none\" stroke-width=\"0.6\" stroke=\"" << colour(i) << "\" points=\"";
      const std::size_t step = std::max<std::size_t>(k / 200, 1);
      for (std::size_t q = 0; q <= k; q += step) out << X(record.states[q][i].position) << ',' << Y(record.states[q][i].position) << ' ';
      out << X(a.position) << ',' << Y(a.position) << "\"/>\n"
          << "<circle cx=\"" << X(a.goal) << "\" cy=\"" << Y(a.goal) << "\" r=\"2\" fill=\"none\" stroke=\""
          << colour(i) << "\"/>\n"
          << "<circle cx=\"" << X(a.position) << "\" cy=\"" << Y(a.position) << "\" r=\"3\" fill=\"" << colour(i)
          << "\"/>\n";
    }
    out << "<text x=\"" << cx << "\" y=\"" << H - 8 << "\" text-anchor=\"middle\">t = "
        << fixed(record.times[k]) << " s</text>\n</g>\n";
  }
  out << "</svg>\n";
}

namespace {

class Sha256 {
 public:
  Sha256() : ctx_(EVP_MD_CTX_new()) {
    if (ctx_ == nullptr || EVP_DigestInit_ex(ctx_, EVP_sha256(), nullptr) != 1) {
      throw std::runtime_error("sha256 init failed");
    }
  }
  ~Sha256() { EVP_MD_CTX_free(ctx_); }
  Sha256(const Sha256&) = delete;
  Sha256& operator=(const Sha256&) = delete;

  void bytes(const void* data, std::size_t n) { EVP_DigestUpdate(ctx_, data, n); }
  void u64(std::uint64_t v) {
    unsigned char b[8];
    for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
    bytes(b, 8);
  }
  void i64(std::int64_t v) { u64(static_cast<std::uint64_t>(v)); }
  void real(double x) {
    std::uint64_t bits;
    std::memcpy(&bits, &x, sizeof bits);
    u64(bits);
  }
  void vec(const RealVec& v) {
    u64(static_cast<std::uint64_t>(v.size()));
    for (Eigen::Index i = 0; i < v.size(); ++i) real(v(i));
  }
  void text(std::string_view s) {
    u64(s.size());
    bytes(s.data(), s.size());
  }
  std::string hex() {
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    EVP_DigestFinal_ex(ctx_, md, &len);
    static const char* digits = "0123456789abcdef";
    std::string out;
    for (unsigned int i = 0; i < len; ++i) {
      out += digits[md[i] >> 4];
      out += digits[md[i] & 0xF];
    }
    return out;
  }

 private:
  EVP_MD_CTX* ctx_;
};

void hash_agent(Sha256& h, const AgentState& a) {
  h.i64(a.id);
  h.text(to_string(a.kind));
  h.vec(a.position);
  h.vec(a.velocity);
  h.vec(a.goal);
}

}  // namespace

std::string record_digest(const TrajectoryRecord& r) {
  Sha256 h;
  h.text("ftmp-record-v1");
  h.real(r.dt);
  h.real(r.arena_radius);
  h.real(r.barrier.clearance);
  h.real(r.barrier.epsilon);
  h.real(r.barrier.x0_floor);
  h.real(r.control.k1);
  h.real(r.control.alpha);
  h.real(r.control.dot_guard_tol);
  h.real(r.control.grad_zero_tol);
  h.real(r.control.correction_cap);
  h.u64(r.static_agents.size());
  for (const AgentState& a : r.static_agents) hash_agent(h, a);
  h.u64(r.size());
  for (std::size_t k = 0; k < r.size(); ++k) {
    h.real(r.times[k]);
    for (const AgentState& a : r.states[k]) hash_agent(h, a);
    for (const AgentSample& s : r.samples[k]) {
      h.i64(s.neighbor_id);
      h.text(to_string(s.guard));
      h.real(s.lyapunov_value);
      h.real(s.grad_norm);
    }
    h.real(r.pairwise_min_distance[k]);
    h.real(r.min_clearance[k]);
  }
  h.u64(r.events.size());
  for (const Event& e : r.events) {
    h.real(e.time);
    h.u64(e.step);
    h.text(to_string(e.kind));
    h.i64(e.agent_id);
    h.text(e.detail);
  }
  for (const auto& c : r.convergence_time) {
    h.u64(c.has_value());
    h.real(c.value_or(0.0));
  }
  h.u64(r.aborted);
  return h.hex();
}

std::vector<TrajectoryRow> read_trajectories_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("trajectories.csv: missing header");
  std::vector<std::string> header;
  {
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) header.push_back(cell);
  }
  if (header.size() < 6 || header[0] != "t" || header[1] != "agent_id" || header[2] != "kind" ||
      header.back() != "dist_to_goal" || (header.size() - 4) % 2 != 0) {
    throw std::runtime_error("trajectories.csv: unexpected header");
  }
  const std::size_t dim = (header.size() - 4) / 2;

  auto number = [](const std::string& s, std::size_t line_no) {
    double v = 0.0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
      throw std::runtime_error("trajectories.csv: bad number '" + s + "' on line " + std::to_string(line_no));
    }
    return v;
  };

  std::vector<TrajectoryRow> rows;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (cells.size() != header.size()) {
      throw std::runtime_error("trajectories.csv: wrong column count on line " + std::to_string(line_no));
    }
    TrajectoryRow row;
    row.t = number(cells[0], line_no);
    row.agent_id = static_cast<int>(number(cells[1], line_no));
    row.kind = cells[2];
    for (std::size_t c = 0; c < dim; ++c) row.position.push_back(number(cells[3 + c], line_no));
    for (std::size_t c = 0; c < dim; ++c) row.velocity.push_back(number(cells[3 + dim + c], line_no));
    row.dist_to_goal = number(cells.back(), line_no);
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace ftmp::app
