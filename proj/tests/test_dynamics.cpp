#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numeric>

#include "pgg/dynamics.hpp"
#include "pgg/ensemble.hpp"
#include "test_support.hpp"

using namespace pgg;
using doctest::Approx;

namespace {

// Two-agent path with agent 0 cooperating and agent 1 defecting: both pools
// hold 1/2, both payoffs are r/2, so R_C = r/2 - 1 and R_D = r/2.
struct PathPair {
  Network net = testing::path(2);
  double r = 1.5;
  double r_coop() const { return r / 2.0 - 1.0; }
  double r_defect() const { return r / 2.0; }
};

// Tolerance of four binomial standard deviations.
void check_frequency(double count, double trials, double p) {
  const double sd = std::sqrt(p * (1.0 - p) / trials);
  CHECK(std::abs(count / trials - p) <= 4.0 * sd + 1e-12);
}

}  // namespace

TEST_CASE("fermi probability values") {
  CHECK(fermi_prob(0.3, 0.3, 0.1, 0.1) == Approx(0.268941421369995120748840758178).epsilon(1e-15));
  CHECK(fermi_prob(0.0, 1e9, 0.1, 0.1) == 1.0);
  CHECK(fermi_prob(1e9, 0.0, 0.1, 0.1) == 0.0);
  CHECK(fermi_prob(0.0, 0.05, 0.1, 0.0) == 0.0);
  CHECK(fermi_prob(0.0, 0.5, 0.1, 0.0) == 1.0);
  CHECK(fermi_prob(0.0, 0.1, 0.1, 0.0) == 0.5);
  for (double d = -100.0; d <= 100.0; d += 0.37) {
    const double p = fermi_prob(0.0, d, 0.1, 0.01);
    CHECK(p >= 0.0);
    CHECK(p <= 1.0);
  }
}

TEST_CASE("fermi probability is nondecreasing in the neighbor's return") {
  double prev = 0.0;
  for (double rj = -5.0; rj <= 5.0; rj += 0.01) {
    const double p = fermi_prob(0.0, rj, 0.1, 0.1);
    CHECK(p >= prev);
    prev = p;
  }
}

TEST_CASE("synchronous step on a uniform state is a no-op") {
  const Network lat = build_lattice(5);
  Engine rng(1);
  for (std::uint8_t v : {0, 1}) {
    const StateVector s(lat.size(), v);
    const std::vector<double> ret(lat.size(), 0.0);
    StateVector next;
    std::vector<std::uint8_t> changed(lat.size(), 9);
    CHECK(step_synchronous(lat, s, ret, 0.1, 0.1, rng, next, changed) == 0);
    CHECK(next == s);
    CHECK(std::accumulate(changed.begin(), changed.end(), 0) == 0);
  }
}

TEST_CASE("synchronous step, deterministic limit: neighbors of a rich defector flip") {
  // Star: defector at the center, cooperating leaves.
  const Network s3 = testing::star(3);
  StateVector s{0, 1, 1, 1};
  const auto inv = build_investment_operator(s3, attractiveness(s3, 0.0));
  const auto res = evaluate(inv, build_sharing_operator(s3), s, 2.0);
  for (AgentId l = 1; l <= 3; ++l) REQUIRE(res.ret[0] - res.ret[l] > 0.1);
  Engine rng(3);
  StateVector next;
  std::vector<std::uint8_t> changed(4);
  step_synchronous(s3, s, res.ret, 0.1, 0.0, rng, next, changed);
  // Each leaf's only neighbor is the defector.
  CHECK(next == StateVector{0, 0, 0, 0});
  CHECK(changed == std::vector<std::uint8_t>{0, 1, 1, 1});
}

TEST_CASE("synchronous step on the two-agent path matches exact transition probabilities") {
  PathPair pp;
  pp.r = 1.5;
  const double tau = 0.1, kappa = 1.0;
  const StateVector s{1, 0};
  const auto inv = build_investment_operator(pp.net, attractiveness(pp.net, 0.0));
  const auto res = evaluate(inv, build_sharing_operator(pp.net), s, pp.r);
  REQUIRE(res.ret[0] == Approx(pp.r_coop()));
  REQUIRE(res.ret[1] == Approx(pp.r_defect()));

  // Frozen from an independent high-precision evaluation of the Fermi rule.
  const double p_cd = 0.7109495026250039634630982368;  // cooperator copies defector
  const double p_dc = 0.249739894404882395790023157588;
  CHECK(fermi_prob(res.ret[0], res.ret[1], tau, kappa) == Approx(p_cd).epsilon(1e-12));
  CHECK(fermi_prob(res.ret[1], res.ret[0], tau, kappa) == Approx(p_dc).epsilon(1e-12));

  // Enumerated outcomes of one simultaneous round from (C, D).
  const double trials = 100000.0;
  double swapped = 0, all_d = 0, all_c = 0, same = 0;
  Engine rng(2024);
  StateVector next;
  std::vector<std::uint8_t> changed(2);
  for (int t = 0; t < static_cast<int>(trials); ++t) {
    step_synchronous(pp.net, s, res.ret, tau, kappa, rng, next, changed);
    if (next == StateVector{0, 1}) ++swapped;
    else if (next == StateVector{0, 0}) ++all_d;
    else if (next == StateVector{1, 1}) ++all_c;
    else ++same;
  }
  check_frequency(swapped, trials, p_cd * p_dc);
  check_frequency(all_d, trials, p_cd * (1.0 - p_dc));
  check_frequency(all_c, trials, (1.0 - p_cd) * p_dc);
  check_frequency(same, trials, (1.0 - p_cd) * (1.0 - p_dc));
}

TEST_CASE("asynchronous sweep on the two-agent path matches the exact chain") {
  PathPair pp;
  const double tau = 0.1, kappa = 1.0;
  const auto inv = build_investment_operator(pp.net, attractiveness(pp.net, 0.0));
  const LocalReturns local(pp.net, inv, pp.r);
  const double p_cd = fermi_prob(pp.r_coop(), pp.r_defect(), tau, kappa);
  const double p_dc = fermi_prob(pp.r_defect(), pp.r_coop(), tau, kappa);

  // One sweep = two elementary updates; each picks an agent uniformly. From a
  // mixed state an update absorbs into all-D w.p. q_d, into all-C w.p. q_c.
  const double q_d = p_cd / 2.0, q_c = p_dc / 2.0, stay = 1.0 - q_d - q_c;
  const double exp_d = q_d + stay * q_d;
  const double exp_c = q_c + stay * q_c;
  const double exp_mixed = stay * stay;

  const double trials = 100000.0;
  double all_d = 0, all_c = 0, mixed = 0;
  Engine rng(99);
  std::vector<std::uint8_t> changed(2);
  for (int t = 0; t < static_cast<int>(trials); ++t) {
    StateVector s{1, 0};
    step_asynchronous(pp.net, local, s, tau, kappa, rng, changed);
    if (s == StateVector{0, 0}) ++all_d;
    else if (s == StateVector{1, 1}) ++all_c;
    else ++mixed;
  }
  check_frequency(all_d, trials, exp_d);
  check_frequency(all_c, trials, exp_c);
  check_frequency(mixed, trials, exp_mixed);
}

TEST_CASE("absorbing states are fixed points of both schedulers") {
  Engine net_rng(8);
  const Network net = build_ba(200, 5, 2, net_rng);
  for (auto mode : {UpdateMode::synchronous, UpdateMode::asynchronous}) {
    for (double density : {0.0, 1.0}) {
      SimConfig c;
      c.r = 2.0;
      c.generations = 50;
      c.transient = 10;
      c.init_coop_density = density;
      c.update_mode = mode;
      const auto res = run(net, c);
      REQUIRE(res.trajectory.absorbed.has_value());
      CHECK(res.trajectory.absorbed->generation == 0);
      for (double rho : res.trajectory.rho_c) CHECK(rho == density);
      CHECK(std::accumulate(res.stats.change_count.begin(), res.stats.change_count.end(), 0u) == 0u);
    }
  }
}

TEST_CASE("r = 0 always ends in full defection") {
  const Network lat = build_lattice(10);
  Engine net_rng(4);
  const Network ba = build_ba(300, 5, 2, net_rng);
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    for (const Network* net : {&lat, &ba}) {
      for (double alpha : {-2.0, 0.0, 1.0}) {
        SimConfig c;
        c.r = 0.0;
        c.alpha = alpha;
        c.generations = 3000;
        c.transient = 2000;
        c.seed = seed;
        const auto res = run(*net, c);
        CHECK(equilibrium_frequency(res.trajectory, c.transient) == 0.0);
        REQUIRE(res.trajectory.absorbed.has_value());
        CHECK(res.trajectory.absorbed->kind == Absorption::all_defect);
      }
    }
  }
}

TEST_CASE("run invariants and determinism") {
  Engine net_rng(5);
  const Network net = build_ba(500, 5, 2, net_rng);
  for (auto mode : {UpdateMode::synchronous, UpdateMode::asynchronous}) {
    SimConfig c;
    c.r = 1.6;
    c.generations = 400;
    c.transient = 300;
    c.seed = 17;
    c.update_mode = mode;
    const auto a = run(net, c);
    const auto b = run(net, c);
    CHECK(a.trajectory.rho_c == b.trajectory.rho_c);
    CHECK(a.trajectory.final_state == b.trajectory.final_state);
    CHECK(a.stats.change_count == b.stats.change_count);

    CHECK(a.trajectory.rho_c.size() == c.generations + 1);
    CHECK(is_binary_state(a.trajectory.final_state));
    for (double rho : a.trajectory.rho_c) {
      CHECK(rho >= 0.0);
      CHECK(rho <= 1.0);
    }
    CHECK(a.trajectory.rho_c.back() == Approx(cooperator_fraction(a.trajectory.final_state)));
    CHECK(a.stats.generations_observed == c.generations);
    for (auto count : a.stats.change_count) CHECK(count <= c.generations);

    c.seed = 18;
    CHECK(run(net, c).trajectory.rho_c != a.trajectory.rho_c);
  }
}

TEST_CASE("absorption pads the trajectory with the constant") {
  const Network lat = build_lattice(10);
  SimConfig c;
  c.r = 8.0;
  c.generations = 2000;
  c.transient = 1000;
  const auto res = run(lat, c);
  REQUIRE(res.trajectory.absorbed.has_value());
  CHECK(res.trajectory.absorbed->kind == Absorption::all_cooperate);
  for (std::size_t t = res.trajectory.absorbed->generation; t < res.trajectory.rho_c.size(); ++t)
    CHECK(res.trajectory.rho_c[t] == 1.0);
}

TEST_CASE("lattice at high r: defectors go extinct on most seeds") {
  const Network lat = build_lattice(30);
  int extinct = 0;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    SimConfig c;
    c.r = 6.0;
    c.generations = 5000;
    c.transient = 4000;
    c.seed = seed;
    const auto res = run(lat, c);
    extinct += res.trajectory.rho_c.back() == 1.0;
  }
  CHECK(extinct >= 8);
}

TEST_CASE("equilibrium frequency") {
  Trajectory t;
  t.rho_c.assign(201, 0.5);
  CHECK(equilibrium_frequency(t, 100) == 0.5);

  Trajectory saw;
  saw.rho_c.assign(101, 0.0);
  for (std::size_t g = 51; g <= 100; ++g) saw.rho_c[g] = g % 2 ? 0.4 : 0.6;
  CHECK(equilibrium_frequency(saw, 50) == Approx(0.5).epsilon(1e-15));

  Trajectory absorbed;
  absorbed.rho_c.assign(201, 1.0);
  absorbed.rho_c[0] = 0.5;
  absorbed.absorbed = AbsorptionEvent{Absorption::all_cooperate, 10};
  CHECK(equilibrium_frequency(absorbed, 100) == 1.0);

  CHECK_THROWS_AS(equilibrium_frequency(t, 200), InvalidInput);
}

TEST_CASE("config validation") {
  SimConfig c;
  CHECK_NOTHROW(c.validate());
  c.transient = c.generations;
  CHECK_THROWS_AS(c.validate(), InvalidSpec);
  c = SimConfig{};
  c.tau = 0.0;
  CHECK_THROWS_AS(c.validate(), InvalidSpec);
  c = SimConfig{};
  c.init_coop_density = 1.5;
  CHECK_THROWS_AS(c.validate(), InvalidSpec);
  c = SimConfig{};
  c.r = -1.0;
  CHECK_THROWS_AS(c.validate(), InvalidSpec);
}

TEST_CASE("parallel_for covers every task once and rethrows") {
  std::vector<int> hits(1000, 0);
  parallel_for(hits.size(), 4, [&](std::size_t i) { hits[i] += 1; });
  CHECK(std::all_of(hits.begin(), hits.end(), [](int h) { return h == 1; }));
  CHECK_THROWS_AS(parallel_for(10, 3, [](std::size_t i) {
                    if (i == 5) throw InvalidInput("boom");
                  }),
                  InvalidInput);
}

TEST_CASE("run_grid is independent of worker count") {
  GraphSpec g;
  g.kind = GraphSpec::Kind::ba;
  g.n = 300;
  SimConfig base;
  base.generations = 300;
  base.transient = 200;
  std::vector<GridPoint> pts{{0, 0.0, 0, 1.2}, {0, 0.0, 1, 1.8}, {1, -1.0, 0, 1.2}};
  const auto one = run_grid(g, base, pts, 5, 1, 42);
  const auto four = run_grid(g, base, pts, 5, 4, 42);
  for (std::size_t p = 0; p < pts.size(); ++p)
    for (std::size_t i = 0; i < 5; ++i) CHECK(one[p][i].equilibrium == four[p][i].equilibrium);
}

TEST_CASE("summary statistics") {
  std::vector<RealizationResult> rs{{1.0, Absorption::all_cooperate}, {0.0, Absorption::all_defect}, {0.5, {}}};
  const auto s = summarize(rs);
  CHECK(s.mean == Approx(0.5));
  CHECK(s.stderr_ == Approx(std::sqrt(0.25 / 3.0)));
  CHECK(s.absorbed_c == 1);
  CHECK(s.absorbed_d == 1);
  CHECK(s.realizations == 3);
}
