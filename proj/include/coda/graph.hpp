#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace coda {

using AgentId = std::uint32_t;

// Fixed interaction structure. neighbors(i) is the in-neighborhood N_i: the
// agents whose actions agent i observes. Stored in compressed sparse rows,
// each row sorted ascending. Immutable once built.
class Graph {
 public:
  // Validates and normalizes (sort + dedupe) the neighbor lists. Throws
  // ConfigError on out-of-range ids, self-loops, isolated agents, or an
  // asymmetric relation when directed == false.
  Graph(std::vector<std::vector<AgentId>> neighbors, bool directed,
        std::string label = {});

  std::size_t size() const noexcept { return offsets_.size() - 1; }
  bool directed() const noexcept { return directed_; }
  const std::string& label() const noexcept { return label_; }

  std::span<const AgentId> neighbors(AgentId i) const noexcept {
    return {adjacency_.data() + offsets_[i], adjacency_.data() + offsets_[i + 1]};
  }
  std::size_t degree(AgentId i) const noexcept {
    return offsets_[i + 1] - offsets_[i];
  }

  // Sum of all n_i; twice the edge count for undirected graphs.
  std::size_t arc_count() const noexcept { return adjacency_.size(); }

  // True iff `from` belongs to N_to.
  bool has_arc(AgentId from, AgentId to) const noexcept;

  // Structural equality; labels are ignored.
  friend bool operator==(const Graph& a, const Graph& b) noexcept {
    return a.directed_ == b.directed_ && a.offsets_ == b.offsets_ &&
           a.adjacency_ == b.adjacency_;
  }

 private:
  std::vector<std::size_t> offsets_;
  std::vector<AgentId> adjacency_;
  bool directed_;
  std::string label_;
};

Graph complete_graph(std::size_t n);

// side x side grid with 4-neighborhoods, no wraparound. Agent id is
// row * side + col.
Graph square_lattice(std::size_t side);

// Undirected G(n, p). Each unordered pair gets an independent counter-based
// draw; afterwards every isolated agent is attached to one uniformly chosen
// other agent.
Graph random_graph(std::size_t n, double edge_prob, std::uint64_t seed);

// Edge-list text format:
//   N <n> directed=<0|1>
//   <src> <dst>        (src is added to N_dst; both ways if undirected)
// Blank lines and '#' comments are ignored.
Graph read_edge_list(std::istream& in, std::string label = "edge_list");
Graph read_edge_list_file(const std::filesystem::path& path);
void write_edge_list(std::ostream& out, const Graph& graph);

struct GraphSpec {
  enum class Kind { complete, lattice, random, edge_list };

  Kind kind = Kind::complete;
  std::size_t size = 0;  // n for complete/random, side for lattice
  double edge_prob = 0.0;
  std::uint64_t seed = 0;
  std::filesystem::path path;

  friend bool operator==(const GraphSpec&, const GraphSpec&) = default;
};

Graph build_graph(const GraphSpec& spec);

}  // namespace coda
