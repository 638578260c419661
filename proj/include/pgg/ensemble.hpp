#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "pgg/dynamics.hpp"
#include "pgg/graph.hpp"

namespace pgg {

/// Runs fn(0) ... fn(count - 1) on `workers` threads. Tasks are claimed from
/// a shared counter; the first exception thrown is rethrown after all
/// workers join.
void parallel_for(std::size_t count, unsigned workers, const std::function<void(std::size_t)>& fn);

unsigned default_workers();

struct GridPoint {
  std::size_t alpha_index = 0;
  double alpha = 0.0;
  std::size_t r_index = 0;
  double r = 0.0;
};

struct RealizationResult {
  double equilibrium = 0.0;
  std::optional<Absorption> absorbed;
};

struct PointSummary {
  double mean = 0.0;
  double stderr_ = 0.0;
  std::size_t realizations = 0;
  std::size_t absorbed_c = 0;
  std::size_t absorbed_d = 0;
};

PointSummary summarize(std::span<const RealizationResult> results);

/// Dynamics stream for one realization at one grid point.
std::uint64_t realization_seed(std::uint64_t master, const GridPoint& p, std::size_t realization);

/// Network for a realization. Lattices ignore the seed; BA realization i is
/// the same graph at every grid point.
GraphSpec realization_graph(const GraphSpec& base, std::uint64_t master, std::size_t realization);

/// Equilibrium cooperator frequency for every (point, realization) pair,
/// indexed [point][realization]. Output is independent of `workers`.
std::vector<std::vector<RealizationResult>> run_grid(const GraphSpec& graph, const SimConfig& base,
                                                     std::span<const GridPoint> points,
                                                     std::size_t realizations, unsigned workers,
                                                     std::uint64_t master_seed);

}  // namespace pgg
