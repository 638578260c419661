#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "pgg/common.hpp"
#include "pgg/graph.hpp"
#include "pgg/payoff.hpp"

namespace pgg {

enum class UpdateMode { synchronous, asynchronous };

struct SimConfig {
  double r = 1.0;
  double alpha = 0.0;
  double tau = 0.1;    // cost of changing state
  double kappa = 0.1;  // imitation noise
  std::size_t generations = 25000;
  std::size_t transient = 20000;
  double init_coop_density = 0.5;
  UpdateMode update_mode = UpdateMode::synchronous;
  std::uint64_t seed = 1;

  /// Throws InvalidSpec.
  void validate() const;
};

/// Probability that an agent with return r_i adopts the state of a neighbor
/// with return r_j. kappa == 0 is the deterministic limit.
double fermi_prob(double r_i, double r_j, double tau, double kappa);

enum class Absorption { all_cooperate, all_defect };

struct AbsorptionEvent {
  Absorption kind;
  std::size_t generation;
};

struct Trajectory {
  std::vector<double> rho_c;  // rho_c[t] after t generations; rho_c[0] is the initial state
  StateVector final_state;
  std::optional<AbsorptionEvent> absorbed;
};

struct UpdateStats {
  std::vector<std::uint32_t> change_count;
  std::size_t generations_observed = 0;

  double frequency(AgentId i) const {
    return generations_observed == 0 ? 0.0
                                     : static_cast<double>(change_count[i]) / static_cast<double>(generations_observed);
  }
};

struct RunResult {
  Trajectory trajectory;
  UpdateStats stats;
};

/// One synchronous imitation round. Every agent picks a uniform neighbor and
/// imitates it with the Fermi probability; all decisions read `state` and
/// `returns` from before the round. `changed[i]` is set iff agent i's state
/// differs afterwards. Returns the number of changed agents.
std::size_t step_synchronous(const Network& net, const StateVector& state, std::span<const double> returns,
                             double tau, double kappa, Engine& rng, StateVector& next,
                             std::span<std::uint8_t> changed);

/// One Monte Carlo sweep of n random sequential updates; returns are
/// recomputed from the live state at every elementary update. `changed[i]` is
/// set iff agent i's state differs between the start and end of the sweep.
std::size_t step_asynchronous(const Network& net, const LocalReturns& returns, StateVector& state, double tau,
                              double kappa, Engine& rng, std::span<std::uint8_t> changed);

StateVector random_state(std::size_t n, double coop_density, Engine& rng);

RunResult run(const Network& net, const SimConfig& config);

/// Overload for callers that already hold operators built for (net, alpha).
RunResult run(const Network& net, const InvestmentOperator& inv, const SharingOperator& share,
              const SimConfig& config);

/// Mean of rho_c over generations (transient, end]. Throws InvalidInput when
/// the trajectory is not longer than the transient.
double equilibrium_frequency(const Trajectory& traj, std::size_t transient);

double cooperator_fraction(const StateVector& s);

}  // namespace pgg
