#include "coda/csv.hpp"

#include <charconv>
#include <istream>
#include <ostream>

#include "coda/errors.hpp"

namespace coda::csv {

void append_double(std::string& out, double value) {
  char buf[64];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::general, 17);
  out.append(buf, end);
}

std::string format_double(double value) {
  std::string s;
  append_double(s, value);
  return s;
}

double parse_double(std::string_view text) {
  while (!text.empty() && (text.front() == ' ' || text.front() == '\t')) text.remove_prefix(1);
  while (!text.empty() && (text.back() == ' ' || text.back() == '\t' || text.back() == '\r')) {
    text.remove_suffix(1);
  }
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty()) {
    throw ConfigError("not a number: '" + std::string(text) + "'");
  }
  return value;
}

namespace {

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    fields.push_back(line.substr(start, comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return fields;
}

Action parse_action(std::string_view text) {
  if (text == "1") return Action::positive;
  if (text == "-1") return Action::negative;
  throw ConfigError("not an action: '" + std::string(text) + "'");
}

void append_action(std::string& out, Action a) { out += a == Action::positive ? "1" : "-1"; }

}  // namespace

void write_trajectory(std::ostream& out, const Trajectory& trajectory) {
  const std::size_t n = trajectory.snapshots.empty() ? 0 : trajectory.snapshots.front().size();
  std::string line = "tick,p,q_p";
  for (std::size_t i = 0; i < n; ++i) line += ",theta_" + std::to_string(i);
  for (std::size_t i = 0; i < n; ++i) line += ",q_" + std::to_string(i);
  line += '\n';
  out << line;
  for (const auto& s : trajectory.snapshots) {
    line.clear();
    line += std::to_string(s.tick);
    line += ',';
    append_double(line, s.pollution);
    line += ',';
    append_action(line, s.q_p);
    for (double theta : s.opinions) {
      line += ',';
      append_double(line, theta);
    }
    for (Action a : s.actions) {
      line += ',';
      append_action(line, a);
    }
    line += '\n';
    out << line;
  }
}

std::vector<SimState> read_trajectory(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw ConfigError("trajectory CSV is empty");
  const auto header = split(line);
  if (header.size() < 3 || header[0] != "tick" || header[1] != "p" || header[2] != "q_p" ||
      (header.size() - 3) % 2 != 0) {
    throw ConfigError("trajectory CSV header must start with 'tick,p,q_p' followed by theta/q columns");
  }
  const std::size_t n = (header.size() - 3) / 2;
  for (std::size_t i = 0; i < n; ++i) {
    if (header[3 + i] != "theta_" + std::to_string(i) ||
        header[3 + n + i] != "q_" + std::to_string(i)) {
      throw ConfigError("unexpected trajectory CSV column names");
    }
  }

  std::vector<SimState> states;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto fields = split(line);
    if (fields.size() != header.size()) {
      throw ConfigError("trajectory CSV line " + std::to_string(line_no) + " has " +
                        std::to_string(fields.size()) + " fields, expected " +
                        std::to_string(header.size()));
    }
    SimState s;
    const auto tick = fields[0];
    if (std::from_chars(tick.data(), tick.data() + tick.size(), s.tick).ptr !=
        tick.data() + tick.size()) {
      throw ConfigError("bad tick on trajectory CSV line " + std::to_string(line_no));
    }
    s.pollution = parse_double(fields[1]);
    s.q_p = parse_action(fields[2]);
    s.opinions.reserve(n);
    s.actions.reserve(n);
    for (std::size_t i = 0; i < n; ++i) s.opinions.push_back(parse_double(fields[3 + i]));
    for (std::size_t i = 0; i < n; ++i) s.actions.push_back(parse_action(fields[3 + n + i]));
    states.push_back(std::move(s));
  }
  return states;
}

void write_clusters(std::ostream& out, std::span<const ClusterReport> clusters) {
  std::string line = "cluster_id,size,action,weak,strong,worst_slack\n";
  for (std::size_t id = 0; id < clusters.size(); ++id) {
    const auto& c = clusters[id];
    line += std::to_string(id);
    line += ',';
    line += std::to_string(c.members.size());
    line += ',';
    if (c.action) {
      append_action(line, *c.action);
    } else {
      line += "mixed";
    }
    line += c.weakly_robust ? ",1" : ",0";
    line += c.strongly_robust ? ",1," : ",0,";
    append_double(line, c.worst_strong_slack);
    line += '\n';
  }
  out << line;
}

void write_lattice_grid(std::ostream& out, const SimState& final_state, std::size_t side,
                        std::span<const ClusterReport> clusters) {
  if (side * side != final_state.size()) {
    throw ConfigError("grid export needs a side*side lattice state");
  }
  std::vector<bool> strong(final_state.size(), false);
  for (const auto& c : clusters) {
    if (!c.strongly_robust) continue;
    for (AgentId i : c.members) strong[i] = true;
  }
  std::string line = "row,col,theta_final,action_final,in_strong_cluster\n";
  for (std::size_t r = 0; r < side; ++r) {
    for (std::size_t c = 0; c < side; ++c) {
      const std::size_t i = r * side + c;
      line += std::to_string(r);
      line += ',';
      line += std::to_string(c);
      line += ',';
      append_double(line, final_state.opinions[i]);
      line += ',';
      append_action(line, final_state.actions[i]);
      line += strong[i] ? ",1\n" : ",0\n";
    }
  }
  out << line;
}

void write_bifurcation(std::ostream& out, std::span<const SweepRow> rows) {
  out << "param_value,class,period,sample_index,theta_sample,p_sample\n";
  std::string line;
  for (const auto& row : rows) {
    std::string prefix;
    append_double(prefix, row.param_value);
    prefix += ',';
    prefix += class_name(row.attractor);
    prefix += ',';
    if (std::holds_alternative<LimitCycle>(row.attractor)) {
      prefix += std::to_string(period_of(row.attractor));
    }
    prefix += ',';
    line.clear();
    for (std::size_t k = 0; k < row.theta_samples.size(); ++k) {
      line += prefix;
      line += std::to_string(k);
      line += ',';
      append_double(line, row.theta_samples[k]);
      line += ',';
      append_double(line, row.p_samples[k]);
      line += '\n';
    }
    out << line;
  }
}

void write_gallery(std::ostream& out, std::span<const GalleryEntry> entries, bool fs) {
  out << "beta,tick,theta,p,class\n";
  std::string line;
  for (const auto& e : entries) {
    std::string beta;
    append_double(beta, e.beta);
    const std::string_view cls = class_name(e.attractor);
    line.clear();
    for (const auto& s : e.trajectory.snapshots) {
      double theta = s.opinions.front();
      if (!fs) {
        double sum = 0.0;
        for (double x : s.opinions) sum += x;
        theta = sum / static_cast<double>(s.size());
      }
      line += beta;
      line += ',';
      line += std::to_string(s.tick);
      line += ',';
      append_double(line, theta);
      line += ',';
      append_double(line, s.pollution);
      line += ',';
      line += cls;
      line += '\n';
    }
    out << line;
  }
}

}  // namespace coda::csv
