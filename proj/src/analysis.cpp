#include "pgg/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

namespace pgg {

double l_alpha(const Network& net, double alpha, AgentId i) {
  const auto hood = net.closed_neighborhood(i);
  double weighted = 0.0, total = 0.0;
  for (AgentId j : hood) {
    const double pool = static_cast<double>(net.degree(j) + 1);
    const double a = std::exp(alpha * std::log(pool));
    weighted += a / pool;
    total += a;
  }
  return weighted / total;
}

std::vector<SelfReturnRecord> self_returns(const Network& net, double alpha, double r) {
  std::vector<SelfReturnRecord> out(net.size());
  for (AgentId i = 0; i < net.size(); ++i) {
    const double l = l_alpha(net, alpha, i);
    out[i] = {i, net.degree(i), l, r * l};
  }
  return out;
}

double effective_group_size(const Network& net, double alpha) {
  if (net.size() == 0) return 0.0;
  double sum = 0.0;
  for (AgentId i = 0; i < net.size(); ++i) sum += 1.0 / l_alpha(net, alpha, i);
  return sum / static_cast<double>(net.size());
}

PiiByDegree pii_by_degree(const Network& net, double alpha, double r) {
  PiiByDegree out;
  out.records = self_returns(net, alpha, r);
  std::map<std::size_t, std::pair<std::size_t, double>> acc;
  for (const auto& rec : out.records) {
    auto& [count, sum] = acc[rec.degree];
    ++count;
    sum += rec.p_ii;
  }
  for (const auto& [k, cs] : acc) out.by_degree.push_back({k, cs.first, cs.second / static_cast<double>(cs.first)});
  return out;
}

std::vector<double> fraction_pii_above_one(const Network& net, double alpha, std::span<const double> r_grid) {
  if (!std::is_sorted(r_grid.begin(), r_grid.end())) throw InvalidInput("r grid must be ascending");
  std::vector<double> l(net.size());
  for (AgentId i = 0; i < net.size(); ++i) l[i] = l_alpha(net, alpha, i);
  std::vector<double> out;
  out.reserve(r_grid.size());
  for (double r : r_grid) {
    const auto above = std::count_if(l.begin(), l.end(), [r](double v) { return r * v > 1.0; });
    out.push_back(net.size() ? static_cast<double>(above) / static_cast<double>(net.size()) : 0.0);
  }
  return out;
}

std::vector<NeighborDegreeTuple> pii_neighbor_tuples(const Network& net, double alpha, double r,
                                                     std::size_t degree) {
  std::vector<NeighborDegreeTuple> out;
  for (AgentId i = 0; i < net.size(); ++i) {
    if (net.degree(i) != degree) continue;
    NeighborDegreeTuple t{i, r * l_alpha(net, alpha, i), {}};
    for (AgentId j : net.neighbors(i)) t.neighbor_degrees.push_back(net.degree(j));
    std::sort(t.neighbor_degrees.begin(), t.neighbor_degrees.end());
    out.push_back(std::move(t));
  }
  return out;
}

std::optional<std::size_t> last_crossing(std::span<const double> values, double level) {
  std::optional<std::size_t> found;
  for (std::size_t k = 0; k + 1 < values.size(); ++k)
    if (values[k] <= level && values[k + 1] > level) found = k;
  return found;
}

ThresholdResult find_thresholds(const GraphSpec& graph, double alpha, const SimConfig& dynamics,
                                const ThresholdSearch& search) {
  if (!(search.r_lo < search.r_hi)) throw InvalidInput("threshold search needs r_lo < r_hi");
  if (!(search.r_step > 0.0)) throw InvalidInput("threshold search needs a positive step");
  if (search.realizations == 0) throw InvalidInput("threshold search needs realizations >= 1");

  ThresholdResult result;
  const auto cells = static_cast<std::size_t>(std::floor((search.r_hi - search.r_lo) / search.r_step + 1e-9));
  std::vector<GridPoint> points;
  for (std::size_t k = 0; k <= cells; ++k) {
    const double r = search.r_lo + static_cast<double>(k) * search.r_step;
    result.grid.push_back(r);
    points.push_back({search.alpha_index, alpha, k, r});
  }

  auto grid_runs = run_grid(graph, dynamics, points, search.realizations, search.workers, search.master_seed);
  std::vector<double> means;
  for (const auto& runs : grid_runs) {
    result.points.push_back(summarize(runs));
    means.push_back(result.points.back().mean);
  }

  // Refinement points get r indices past the grid so their streams never collide.
  std::size_t next_index = points.size();
  auto mean_at = [&](double r) {
    const GridPoint p{search.alpha_index, alpha, next_index++, r};
    auto runs = run_grid(graph, dynamics, std::span(&p, 1), search.realizations, search.workers,
                         search.master_seed);
    return summarize(runs.front()).mean;
  };

  auto refine = [&](double level) -> std::optional<double> {
    const auto cell = last_crossing(means, level);
    if (!cell) return std::nullopt;
    double lo = result.grid[*cell], hi = result.grid[*cell + 1];
    for (int step = 0; step < search.refinements; ++step) {
      const double mid = 0.5 * (lo + hi);
      if (mean_at(mid) > level) hi = mid;
      else lo = mid;
    }
    return 0.5 * (lo + hi);
  };

  result.r_c = refine(search.epsilon);
  result.r_d = refine(1.0 - search.epsilon);
  return result;
}

std::vector<DegreeOccupation> degree_resolved_states(const Network& net, const StateVector& state,
                                                     const UpdateStats* stats) {
  if (state.size() != net.size()) throw InvalidInput("state and network sizes differ");
  if (stats && stats->change_count.size() != net.size()) throw InvalidInput("stats and network sizes differ");
  struct Acc {
    std::size_t count = 0, coop = 0;
    double freq = 0.0;
  };
  std::map<std::size_t, Acc> acc;
  for (AgentId i = 0; i < net.size(); ++i) {
    auto& a = acc[net.degree(i)];
    ++a.count;
    a.coop += state[i];
    if (stats) a.freq += stats->frequency(i);
  }
  std::vector<DegreeOccupation> out;
  for (const auto& [k, a] : acc) {
    const auto c = static_cast<double>(a.count);
    out.push_back({k, a.count, static_cast<double>(a.coop) / c, a.freq / c});
  }
  return out;
}

double top_degree_coop_fraction(const Network& net, const StateVector& state, std::size_t count) {
  if (state.size() != net.size()) throw InvalidInput("state and network sizes differ");
  count = std::min(count, net.size());
  if (count == 0) return 0.0;
  std::vector<AgentId> order(net.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](AgentId a, AgentId b) { return net.degree(a) > net.degree(b); });
  std::size_t coop = 0;
  for (std::size_t k = 0; k < count; ++k) coop += state[order[k]];
  return static_cast<double>(coop) / static_cast<double>(count);
}

std::string LatticeImage::glyphs() const {
  std::string out;
  out.reserve(side * (side + 1));
  for (std::size_t row = 0; row < side; ++row) {
    for (std::size_t col = 0; col < side; ++col) out.push_back(pixels[row * side + col] == 0 ? '#' : '.');
    out.push_back('\n');
  }
  return out;
}

LatticeImage snapshot_lattice(const StateVector& state, std::size_t side) {
  if (state.size() != side * side) throw InvalidInput("state size is not side * side");
  LatticeImage img{side, std::vector<std::uint8_t>(state.size())};
  for (std::size_t i = 0; i < state.size(); ++i) img.pixels[i] = state[i] ? 0 : 255;
  return img;
}

double same_state_edge_fraction(const Network& net, const StateVector& state) {
  if (state.size() != net.size()) throw InvalidInput("state and network sizes differ");
  if (net.edge_count() == 0) return 0.0;
  std::size_t same = 0;
  for (const auto& e : net.edges()) same += state[e.u] == state[e.v];
  return static_cast<double>(same) / static_cast<double>(net.edge_count());
}

namespace {
std::vector<double> average_ranks(std::span<const double> v) {
  std::vector<std::size_t> idx(v.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
  std::vector<double> ranks(v.size());
  for (std::size_t k = 0; k < idx.size();) {
    std::size_t end = k;
    while (end + 1 < idx.size() && v[idx[end + 1]] == v[idx[k]]) ++end;
    const double rank = 0.5 * static_cast<double>(k + end) + 1.0;
    for (std::size_t q = k; q <= end; ++q) ranks[idx[q]] = rank;
    k = end + 1;
  }
  return ranks;
}
}  // namespace

double spearman(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) throw InvalidInput("spearman needs two equal-length samples");
  const auto rx = average_ranks(x);
  const auto ry = average_ranks(y);
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(rx.begin(), rx.end(), 0.0) / n;
  const double my = std::accumulate(ry.begin(), ry.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < rx.size(); ++i) {
    sxy += (rx[i] - mx) * (ry[i] - my);
    sxx += (rx[i] - mx) * (rx[i] - mx);
    syy += (ry[i] - my) * (ry[i] - my);
  }
  if (sxx == 0.0 || syy == 0.0) return 0.0;
  return sxy / std::sqrt(sxx * syy);
}

}  // namespace pgg
