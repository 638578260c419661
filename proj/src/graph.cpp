#include "pgg/graph.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <string>

namespace pgg {

Network Network::from_edges(std::size_t n, std::span<const Edge> edges) {
  std::vector<std::size_t> deg(n, 0);
  for (const auto& e : edges) {
    if (e.u >= n || e.v >= n) throw InvalidInput("edge endpoint out of range");
    if (e.u == e.v) throw InvalidInput("self-loop on agent " + std::to_string(e.u));
    ++deg[e.u];
    ++deg[e.v];
  }

  Network net;
  net.offsets_.assign(n + 1, 0);
  for (std::size_t i = 0; i < n; ++i) net.offsets_[i + 1] = net.offsets_[i] + deg[i];
  net.adjacency_.resize(net.offsets_[n]);

  std::vector<std::size_t> fill(net.offsets_.begin(), net.offsets_.end() - 1);
  for (const auto& e : edges) {
    net.adjacency_[fill[e.u]++] = e.v;
    net.adjacency_[fill[e.v]++] = e.u;
  }
  for (std::size_t i = 0; i < n; ++i) {
    auto first = net.adjacency_.begin() + static_cast<std::ptrdiff_t>(net.offsets_[i]);
    auto last = net.adjacency_.begin() + static_cast<std::ptrdiff_t>(net.offsets_[i + 1]);
    std::sort(first, last);
    if (std::adjacent_find(first, last) != last)
      throw InvalidInput("duplicate edge at agent " + std::to_string(i));
  }
  return net;
}

std::vector<AgentId> Network::closed_neighborhood(AgentId i) const {
  if (i >= size()) throw std::out_of_range("agent id " + std::to_string(i) + " out of range");
  auto nb = neighbors(i);
  std::vector<AgentId> out;
  out.reserve(nb.size() + 1);
  out.push_back(i);
  out.insert(out.end(), nb.begin(), nb.end());
  return out;
}

std::vector<Edge> Network::edges() const {
  std::vector<Edge> out;
  out.reserve(edge_count());
  for (AgentId i = 0; i < size(); ++i)
    for (AgentId j : neighbors(i))
      if (i < j) out.push_back({i, j});
  return out;
}

std::vector<std::size_t> Network::degrees() const {
  std::vector<std::size_t> out(size());
  for (AgentId i = 0; i < size(); ++i) out[i] = degree(i);
  return out;
}

std::size_t Network::max_degree() const {
  std::size_t best = 0;
  for (AgentId i = 0; i < size(); ++i) best = std::max(best, degree(i));
  return best;
}

bool Network::is_connected() const {
  if (size() == 0) return true;
  std::vector<std::uint8_t> seen(size(), 0);
  std::vector<AgentId> stack{0};
  seen[0] = 1;
  std::size_t reached = 1;
  while (!stack.empty()) {
    AgentId i = stack.back();
    stack.pop_back();
    for (AgentId j : neighbors(i)) {
      if (!seen[j]) {
        seen[j] = 1;
        ++reached;
        stack.push_back(j);
      }
    }
  }
  return reached == size();
}

void GraphSpec::validate() const {
  if (kind == Kind::lattice) {
    if (side < 3) throw InvalidSpec("lattice side must be at least 3");
    return;
  }
  if (m < 1) throw InvalidSpec("BA requires m >= 1");
  if (m > m0) throw InvalidSpec("BA requires m <= m0");
  if (n < m0) throw InvalidSpec("BA requires n >= m0");
}

Network build_lattice(std::size_t side) {
  if (side < 3) throw InvalidSpec("lattice side must be at least 3");
  const std::size_t n = side * side;
  std::vector<Edge> edges;
  edges.reserve(2 * n);
  auto add = [&edges](std::size_t a, std::size_t b) {
    edges.push_back({static_cast<AgentId>(std::min(a, b)), static_cast<AgentId>(std::max(a, b))});
  };
  for (std::size_t row = 0; row < side; ++row) {
    for (std::size_t col = 0; col < side; ++col) {
      const std::size_t i = row * side + col;
      add(i, row * side + (col + 1) % side);
      add(i, ((row + 1) % side) * side + col);
    }
  }
  return Network::from_edges(n, edges);
}

Network build_ba(std::size_t n, std::size_t m0, std::size_t m, Engine& rng) {
  GraphSpec{GraphSpec::Kind::ba, 0, n, m0, m, 0}.validate();

  std::vector<Edge> edges;
  edges.reserve(m0 * (m0 - 1) / 2 + (n - m0) * m);
  // Each edge contributes both endpoints, so a uniform pick is degree-proportional.
  std::vector<AgentId> endpoints;
  endpoints.reserve(2 * edges.capacity());

  for (AgentId i = 0; i < m0; ++i) {
    for (AgentId j = i + 1; j < m0; ++j) {
      edges.push_back({i, j});
      endpoints.push_back(i);
      endpoints.push_back(j);
    }
  }

  std::vector<AgentId> targets;
  targets.reserve(m);
  for (std::size_t v = m0; v < n; ++v) {
    targets.clear();
    while (targets.size() < m) {
      // Only reachable with m0 == 1: the seed vertex has no edges yet.
      const AgentId t = endpoints.empty() ? static_cast<AgentId>(uniform_index(rng, v))
                                          : endpoints[uniform_index(rng, endpoints.size())];
      if (std::find(targets.begin(), targets.end(), t) == targets.end()) targets.push_back(t);
    }
    for (AgentId t : targets) {
      edges.push_back({t, static_cast<AgentId>(v)});
      endpoints.push_back(t);
      endpoints.push_back(static_cast<AgentId>(v));
    }
  }
  return Network::from_edges(n, edges);
}

Network build_network(const GraphSpec& spec) {
  spec.validate();
  if (spec.kind == GraphSpec::Kind::lattice) return build_lattice(spec.side);
  Engine rng(spec.seed);
  return build_ba(spec.n, spec.m0, spec.m, rng);
}

void write_edge_list(std::ostream& out, const Network& net) {
  out << net.size() << ' ' << net.edge_count() << '\n';
  for (const auto& e : net.edges()) out << e.u << ' ' << e.v << '\n';
}

Network read_edge_list(std::istream& in) {
  std::size_t n = 0, m = 0;
  if (!(in >> n >> m)) throw InvalidInput("edge list: missing header");
  std::vector<Edge> edges(m);
  for (auto& e : edges) {
    if (!(in >> e.u >> e.v)) throw InvalidInput("edge list: truncated");
  }
  return Network::from_edges(n, edges);
}

}  // namespace pgg
