#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pgg/dynamics.hpp"
#include "pgg/ensemble.hpp"
#include "pgg/graph.hpp"

namespace pgg {

// ---------------------------------------------------------------------------
// Self-return statistics (static; all-cooperate state)
// ---------------------------------------------------------------------------

struct SelfReturnRecord {
  AgentId agent = 0;
  std::size_t degree = 0;
  double l_alpha = 0.0;  // attractiveness-weighted mean of 1/(k_j+1) over the closed neighborhood
  double p_ii = 0.0;     // r * l_alpha
};

/// Attractiveness-weighted average of 1/(k_j + 1) over j in N(i).
double l_alpha(const Network& net, double alpha, AgentId i);

std::vector<SelfReturnRecord> self_returns(const Network& net, double alpha, double r);

/// Population mean of 1 / L_alpha.
double effective_group_size(const Network& net, double alpha);

struct DegreeMean {
  std::size_t degree = 0;
  std::size_t count = 0;
  double mean = 0.0;
};

struct PiiByDegree {
  std::vector<SelfReturnRecord> records;
  std::vector<DegreeMean> by_degree;  // ascending degree, only degrees present
};

PiiByDegree pii_by_degree(const Network& net, double alpha, double r);

/// For each r in an ascending grid, the fraction of agents with r * L_alpha > 1.
/// Throws InvalidInput if the grid is not ascending.
std::vector<double> fraction_pii_above_one(const Network& net, double alpha, std::span<const double> r_grid);

/// Raw self-return of every agent with the given degree together with its
/// neighbors' degrees (ascending).
struct NeighborDegreeTuple {
  AgentId agent = 0;
  double p_ii = 0.0;
  std::vector<std::size_t> neighbor_degrees;
};

std::vector<NeighborDegreeTuple> pii_neighbor_tuples(const Network& net, double alpha, double r,
                                                     std::size_t degree);

// ---------------------------------------------------------------------------
// Thresholds
// ---------------------------------------------------------------------------

struct ThresholdResult {
  std::optional<double> r_c;  // nullopt: not in range
  std::optional<double> r_d;
  std::vector<double> grid;
  std::vector<PointSummary> points;  // one per grid value
};

struct ThresholdSearch {
  double r_lo = 1.0;
  double r_hi = 7.0;
  double r_step = 0.25;
  std::size_t realizations = 10;
  double epsilon = 0.01;
  int refinements = 3;  // bisection steps inside the crossing cell (step / 8)
  unsigned workers = 1;
  std::uint64_t master_seed = 1;
  std::size_t alpha_index = 0;
};

/// Uniform grid sweep of mean equilibrium cooperation, then bisection inside
/// the last cell where the mean crosses above epsilon (r_c) and above
/// 1 - epsilon (r_d).
ThresholdResult find_thresholds(const GraphSpec& graph, double alpha, const SimConfig& dynamics,
                                const ThresholdSearch& search);

/// Last index k such that values[k] <= level < values[k + 1].
std::optional<std::size_t> last_crossing(std::span<const double> values, double level);

// ---------------------------------------------------------------------------
// Dynamic observables
// ---------------------------------------------------------------------------

struct DegreeOccupation {
  std::size_t degree = 0;
  std::size_t count = 0;
  double coop_fraction = 0.0;
  double mean_update_frequency = 0.0;
};

/// Per present degree: share of cooperators and (when stats given) the mean
/// per-agent state-change frequency.
std::vector<DegreeOccupation> degree_resolved_states(const Network& net, const StateVector& state,
                                                     const UpdateStats* stats = nullptr);

/// Cooperator share among the `count` highest-degree agents (ties broken by id).
double top_degree_coop_fraction(const Network& net, const StateVector& state, std::size_t count);

/// Row-major side x side image, cooperator = 0 (black), defector = 255 (white).
struct LatticeImage {
  std::size_t side = 0;
  std::vector<std::uint8_t> pixels;

  /// '#' for cooperators, '.' for defectors, one line per row.
  std::string glyphs() const;
};

LatticeImage snapshot_lattice(const StateVector& state, std::size_t side);

/// Fraction of edges whose endpoints share a state.
double same_state_edge_fraction(const Network& net, const StateVector& state);

/// Same-state edge fraction expected without spatial correlation.
inline double mixing_baseline(double rho) { return rho * rho + (1.0 - rho) * (1.0 - rho); }

/// Spearman rank correlation with average ranks for ties.
double spearman(std::span<const double> x, std::span<const double> y);

}  // namespace pgg
