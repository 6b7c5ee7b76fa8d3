#include "coda/graph.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "coda/errors.hpp"
#include "coda/rng.hpp"

namespace coda {

Graph::Graph(std::vector<std::vector<AgentId>> neighbors, bool directed,
             std::string label)
    : directed_(directed), label_(std::move(label)) {
  const std::size_t n = neighbors.size();
  if (n == 0) throw ConfigError("graph must have at least one agent");

  offsets_.reserve(n + 1);
  offsets_.push_back(0);
  for (std::size_t i = 0; i < n; ++i) {
    auto& row = neighbors[i];
    std::sort(row.begin(), row.end());
    row.erase(std::unique(row.begin(), row.end()), row.end());
    if (row.empty()) {
      throw ConfigError("agent " + std::to_string(i) +
                        " has no neighbor; every agent needs n_i >= 1");
    }
    if (row.back() >= n) {
      throw ConfigError("agent " + std::to_string(i) + " lists neighbor " +
                        std::to_string(row.back()) + " outside [0, " +
                        std::to_string(n) + ")");
    }
    if (std::binary_search(row.begin(), row.end(), static_cast<AgentId>(i))) {
      throw ConfigError("self-loop at agent " + std::to_string(i));
    }
    adjacency_.insert(adjacency_.end(), row.begin(), row.end());
    offsets_.push_back(adjacency_.size());
  }

  if (!directed_) {
    for (std::size_t i = 0; i < n; ++i) {
      for (AgentId j : this->neighbors(static_cast<AgentId>(i))) {
        if (!has_arc(static_cast<AgentId>(i), j)) {
          throw ConfigError("undirected graph is not symmetric: " +
                            std::to_string(j) + " in N_" + std::to_string(i) +
                            " but not the reverse");
        }
      }
    }
  }
}

bool Graph::has_arc(AgentId from, AgentId to) const noexcept {
  if (to >= size()) return false;
  auto row = neighbors(to);
  return std::binary_search(row.begin(), row.end(), from);
}

Graph complete_graph(std::size_t n) {
  if (n < 2) throw ConfigError("complete graph needs n >= 2, got " + std::to_string(n));
  std::vector<std::vector<AgentId>> rows(n);
  for (std::size_t i = 0; i < n; ++i) {
    rows[i].reserve(n - 1);
    for (std::size_t j = 0; j < n; ++j) {
      if (j != i) rows[i].push_back(static_cast<AgentId>(j));
    }
  }
  return Graph(std::move(rows), false, "complete:" + std::to_string(n));
}

Graph square_lattice(std::size_t side) {
  if (side < 2) throw ConfigError("square lattice needs side >= 2, got " + std::to_string(side));
  const std::size_t n = side * side;
  std::vector<std::vector<AgentId>> rows(n);
  for (std::size_t r = 0; r < side; ++r) {
    for (std::size_t c = 0; c < side; ++c) {
      auto& row = rows[r * side + c];
      if (r > 0) row.push_back(static_cast<AgentId>((r - 1) * side + c));
      if (c > 0) row.push_back(static_cast<AgentId>(r * side + c - 1));
      if (c + 1 < side) row.push_back(static_cast<AgentId>(r * side + c + 1));
      if (r + 1 < side) row.push_back(static_cast<AgentId>((r + 1) * side + c));
    }
  }
  return Graph(std::move(rows), false, "lattice:" + std::to_string(side));
}

Graph random_graph(std::size_t n, double edge_prob, std::uint64_t seed) {
  if (n < 2) throw ConfigError("random graph needs n >= 2, got " + std::to_string(n));
  if (!(edge_prob > 0.0 && edge_prob <= 1.0)) {
    throw ConfigError("edge_prob must lie in (0,1]");
  }
  std::vector<std::vector<AgentId>> rows(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const auto bits = rng::draw(seed, rng::Stream::graph_edges, i * n + j);
      if (rng::to_unit(bits) < edge_prob) {
        rows[i].push_back(static_cast<AgentId>(j));
        rows[j].push_back(static_cast<AgentId>(i));
      }
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (!rows[i].empty()) continue;
    const auto r = rng::to_below(rng::draw(seed, rng::Stream::graph_repair, i), n - 1);
    const std::size_t j = r < i ? r : r + 1;
    rows[i].push_back(static_cast<AgentId>(j));
    rows[j].push_back(static_cast<AgentId>(i));
  }
  std::ostringstream label;
  label << "random:" << n << ':' << edge_prob << ':' << seed;
  return Graph(std::move(rows), false, label.str());
}

namespace {

std::string strip_comment(const std::string& line) {
  const auto hash = line.find('#');
  return hash == std::string::npos ? line : line.substr(0, hash);
}

bool is_blank(const std::string& s) {
  return std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c); });
}

}  // namespace

Graph read_edge_list(std::istream& in, std::string label) {
  std::string line;
  std::size_t line_no = 0;
  auto fail = [&](const std::string& what) -> ConfigError {
    return ConfigError("edge list line " + std::to_string(line_no) + ": " + what);
  };

  std::size_t n = 0;
  bool directed = false;
  bool have_header = false;
  std::vector<std::vector<AgentId>> rows;

  while (std::getline(in, line)) {
    ++line_no;
    const std::string body = strip_comment(line);
    if (is_blank(body)) continue;
    std::istringstream fields(body);
    if (!have_header) {
      std::string tag, flag;
      long long count = 0;
      if (!(fields >> tag >> count >> flag) || tag != "N" || count < 1) {
        throw fail("expected header 'N <n> directed=<0|1>'");
      }
      if (flag == "directed=0") {
        directed = false;
      } else if (flag == "directed=1") {
        directed = true;
      } else {
        throw fail("bad directed flag '" + flag + "'");
      }
      n = static_cast<std::size_t>(count);
      rows.resize(n);
      have_header = true;
      continue;
    }
    long long src = -1, dst = -1;
    std::string extra;
    if (!(fields >> src >> dst) || (fields >> extra)) throw fail("expected '<src> <dst>'");
    if (src < 0 || dst < 0 || static_cast<std::size_t>(src) >= n ||
        static_cast<std::size_t>(dst) >= n) {
      throw fail("agent id out of range [0, " + std::to_string(n) + ")");
    }
    if (src == dst) throw fail("self-loop at agent " + std::to_string(src));
    rows[dst].push_back(static_cast<AgentId>(src));
    if (!directed) rows[src].push_back(static_cast<AgentId>(dst));
  }
  if (!have_header) throw ConfigError("edge list is missing its 'N <n> directed=<0|1>' header");
  return Graph(std::move(rows), directed, std::move(label));
}

Graph read_edge_list_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open edge list '" + path.string() + "'");
  return read_edge_list(in, "file:" + path.filename().string());
}

void write_edge_list(std::ostream& out, const Graph& graph) {
  out << "N " << graph.size() << " directed=" << (graph.directed() ? 1 : 0) << '\n';
  for (AgentId dst = 0; dst < graph.size(); ++dst) {
    for (AgentId src : graph.neighbors(dst)) {
      if (!graph.directed() && src > dst) continue;
      out << src << ' ' << dst << '\n';
    }
  }
}

Graph build_graph(const GraphSpec& spec) {
  switch (spec.kind) {
    case GraphSpec::Kind::complete:
      return complete_graph(spec.size);
    case GraphSpec::Kind::lattice:
      return square_lattice(spec.size);
    case GraphSpec::Kind::random:
      return random_graph(spec.size, spec.edge_prob, spec.seed);
    case GraphSpec::Kind::edge_list:
      return read_edge_list_file(spec.path);
  }
  throw ConfigError("unknown graph kind");
}

}  // namespace coda
