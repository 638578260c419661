#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "pgg/common.hpp"

namespace pgg {

struct Edge {
  AgentId u;
  AgentId v;
  bool operator==(const Edge&) const = default;
};

/// Immutable undirected simple graph in compressed adjacency form.
///
/// Neighbor lists are sorted ascending. A built Network is never mutated, so
/// it can be shared read-only between simulation workers.
class Network {
 public:
  Network() = default;

  /// Build from an undirected edge list. Self-loops, duplicate edges and
  /// out-of-range endpoints are rejected with InvalidInput.
  static Network from_edges(std::size_t n, std::span<const Edge> edges);

  std::size_t size() const noexcept { return offsets_.size() - 1; }
  std::size_t edge_count() const noexcept { return adjacency_.size() / 2; }

  std::size_t degree(AgentId i) const noexcept { return offsets_[i + 1] - offsets_[i]; }

  std::span<const AgentId> neighbors(AgentId i) const noexcept {
    return {adjacency_.data() + offsets_[i], degree(i)};
  }

  /// The agent itself followed by its neighbors in ascending order.
  /// Throws std::out_of_range for an invalid id.
  std::vector<AgentId> closed_neighborhood(AgentId i) const;

  /// Every edge once, as (u, v) with u < v, in ascending order.
  std::vector<Edge> edges() const;

  std::vector<std::size_t> degrees() const;
  std::size_t max_degree() const;
  bool is_connected() const;

  bool operator==(const Network&) const = default;

 private:
  std::vector<std::size_t> offsets_{0};
  std::vector<AgentId> adjacency_;
};

struct GraphSpec {
  enum class Kind { lattice, ba };

  Kind kind = Kind::lattice;
  std::size_t side = 30;
  std::size_t n = 4000;
  std::size_t m0 = 5;
  std::size_t m = 2;
  std::uint64_t seed = 1;

  std::size_t agent_count() const { return kind == Kind::lattice ? side * side : n; }

  /// Throws InvalidSpec when the description cannot be built.
  void validate() const;
};

/// side x side torus, von Neumann neighborhood. Requires side >= 3.
Network build_lattice(std::size_t side);

/// Barabasi-Albert growth from a complete graph on m0 vertices; each new
/// vertex attaches m distinct edges by degree-proportional sampling.
Network build_ba(std::size_t n, std::size_t m0, std::size_t m, Engine& rng);

Network build_network(const GraphSpec& spec);

/// Edge-list text: header `n m_edges`, then one `i j` line per edge, i < j,
/// ascending.
void write_edge_list(std::ostream& out, const Network& net);
Network read_edge_list(std::istream& in);

}  // namespace pgg
