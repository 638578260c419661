#include "pgg/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace pgg {

void SimConfig::validate() const {
  if (!(r >= 0.0)) throw InvalidSpec("r must be non-negative");
  if (!std::isfinite(alpha)) throw InvalidSpec("alpha must be finite");
  if (!(tau > 0.0)) throw InvalidSpec("tau must be positive");
  if (!(kappa >= 0.0)) throw InvalidSpec("kappa must be non-negative");
  if (generations == 0) throw InvalidSpec("generations must be positive");
  if (transient >= generations) throw InvalidSpec("transient must be smaller than generations");
  if (!(init_coop_density >= 0.0 && init_coop_density <= 1.0))
    throw InvalidSpec("initial cooperator density must lie in [0, 1]");
}

double fermi_prob(double r_i, double r_j, double tau, double kappa) {
  if (kappa == 0.0) {
    const double gain = r_j - r_i;
    if (gain > tau) return 1.0;
    if (gain == tau) return 0.5;
    return 0.0;
  }
  const double x = (r_i - r_j + tau) / kappa;
  if (x > 700.0) return 0.0;
  if (x < -700.0) return 1.0;
  return std::clamp(1.0 / (1.0 + std::exp(x)), 0.0, 1.0);
}

std::size_t step_synchronous(const Network& net, const StateVector& state, std::span<const double> returns,
                             double tau, double kappa, Engine& rng, StateVector& next,
                             std::span<std::uint8_t> changed) {
  const std::size_t n = net.size();
  next.assign(state.begin(), state.end());
  std::size_t flips = 0;
  for (AgentId i = 0; i < n; ++i) {
    changed[i] = 0;
    auto nb = net.neighbors(i);
    if (nb.empty()) continue;
    const AgentId j = nb[uniform_index(rng, nb.size())];
    // Imitating an equal state is a no-op, so no coin is needed.
    if (state[j] == state[i]) continue;
    if (uniform01(rng) < fermi_prob(returns[i], returns[j], tau, kappa)) {
      next[i] = state[j];
      changed[i] = 1;
      ++flips;
    }
  }
  return flips;
}

std::size_t step_asynchronous(const Network& net, const LocalReturns& returns, StateVector& state, double tau,
                              double kappa, Engine& rng, std::span<std::uint8_t> changed) {
  const std::size_t n = net.size();
  StateVector before = state;
  for (std::size_t step = 0; step < n; ++step) {
    const auto i = static_cast<AgentId>(uniform_index(rng, n));
    auto nb = net.neighbors(i);
    if (nb.empty()) continue;
    const AgentId j = nb[uniform_index(rng, nb.size())];
    if (state[j] == state[i]) continue;
    const double p = fermi_prob(returns(i, state), returns(j, state), tau, kappa);
    if (uniform01(rng) < p) state[i] = state[j];
  }
  std::size_t flips = 0;
  for (std::size_t i = 0; i < n; ++i) {
    changed[i] = state[i] != before[i];
    flips += changed[i];
  }
  return flips;
}

StateVector random_state(std::size_t n, double coop_density, Engine& rng) {
  StateVector s(n);
  for (auto& v : s) v = uniform01(rng) < coop_density ? 1 : 0;
  return s;
}

double cooperator_fraction(const StateVector& s) {
  if (s.empty()) return 0.0;
  const auto coop = std::accumulate(s.begin(), s.end(), std::size_t{0});
  return static_cast<double>(coop) / static_cast<double>(s.size());
}

RunResult run(const Network& net, const SimConfig& config) {
  config.validate();
  const auto inv = build_investment_operator(net, attractiveness(net, config.alpha));
  const auto share = build_sharing_operator(net);
  return run(net, inv, share, config);
}

RunResult run(const Network& net, const InvestmentOperator& inv, const SharingOperator& share,
              const SimConfig& config) {
  config.validate();
  const std::size_t n = net.size();
  if (inv.matrix.dim() != n || share.matrix.dim() != n) throw InvalidInput("operators do not match network");

  Engine rng(config.seed);
  RunResult result;
  Trajectory& traj = result.trajectory;
  UpdateStats& stats = result.stats;
  traj.rho_c.reserve(config.generations + 1);
  stats.change_count.assign(n, 0);
  stats.generations_observed = config.generations;

  StateVector state = random_state(n, config.init_coop_density, rng);
  StateVector next(n);
  std::vector<std::uint8_t> changed(n, 0);
  PayoffResult payoff;
  std::optional<LocalReturns> local;
  if (config.update_mode == UpdateMode::asynchronous) local.emplace(net, inv, config.r);

  std::size_t coop = std::accumulate(state.begin(), state.end(), std::size_t{0});
  auto check_absorbed = [&](std::size_t t) {
    if (coop == n) traj.absorbed = AbsorptionEvent{Absorption::all_cooperate, t};
    else if (coop == 0) traj.absorbed = AbsorptionEvent{Absorption::all_defect, t};
  };
  traj.rho_c.push_back(static_cast<double>(coop) / static_cast<double>(n));
  check_absorbed(0);

  for (std::size_t t = 1; t <= config.generations && !traj.absorbed; ++t) {
    if (config.update_mode == UpdateMode::synchronous) {
      evaluate_into(inv, share, state, config.r, payoff);
      step_synchronous(net, state, payoff.ret, config.tau, config.kappa, rng, next, changed);
      state.swap(next);
    } else {
      step_asynchronous(net, *local, state, config.tau, config.kappa, rng, changed);
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (!changed[i]) continue;
      ++stats.change_count[i];
      if (state[i]) ++coop;
      else --coop;
    }
    traj.rho_c.push_back(static_cast<double>(coop) / static_cast<double>(n));
    check_absorbed(t);
  }
  // Absorbing states are fixed points: pad with the constant.
  traj.rho_c.resize(config.generations + 1, traj.rho_c.back());
  traj.final_state = std::move(state);
  return result;
}

double equilibrium_frequency(const Trajectory& traj, std::size_t transient) {
  if (transient + 1 >= traj.rho_c.size()) throw InvalidInput("trajectory shorter than transient");
  if (traj.absorbed && traj.absorbed->generation <= transient)
    return traj.absorbed->kind == Absorption::all_cooperate ? 1.0 : 0.0;
  const auto first = traj.rho_c.begin() + static_cast<std::ptrdiff_t>(transient + 1);
  const double sum = std::accumulate(first, traj.rho_c.end(), 0.0);
  return sum / static_cast<double>(traj.rho_c.end() - first);
}

}  // namespace pgg
