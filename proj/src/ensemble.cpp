#include "pgg/ensemble.hpp"

#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

namespace pgg {

namespace {
constexpr std::uint64_t kNetworkStream = 0x6e6574;  // "net"
}

void parallel_for(std::size_t count, unsigned workers, const std::function<void(std::size_t)>& fn) {
  workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(std::max<std::size_t>(count, 1))));
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;

  auto worker = [&] {
    for (;;) {
      const std::size_t task = next.fetch_add(1);
      if (task >= count) return;
      try {
        fn(task);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
        next.store(count);
        return;
      }
    }
  };

  if (workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (error) std::rethrow_exception(error);
}

unsigned default_workers() { return std::max(1u, std::thread::hardware_concurrency()); }

PointSummary summarize(std::span<const RealizationResult> results) {
  PointSummary s;
  s.realizations = results.size();
  if (results.empty()) return s;
  double sum = 0.0;
  for (const auto& r : results) {
    sum += r.equilibrium;
    if (r.absorbed == Absorption::all_cooperate) ++s.absorbed_c;
    if (r.absorbed == Absorption::all_defect) ++s.absorbed_d;
  }
  s.mean = sum / static_cast<double>(results.size());
  if (results.size() > 1) {
    double ss = 0.0;
    for (const auto& r : results) ss += (r.equilibrium - s.mean) * (r.equilibrium - s.mean);
    const double var = ss / static_cast<double>(results.size() - 1);
    s.stderr_ = std::sqrt(var / static_cast<double>(results.size()));
  }
  return s;
}

std::uint64_t realization_seed(std::uint64_t master, const GridPoint& p, std::size_t realization) {
  return derive_seed(master, {p.alpha_index, p.r_index, realization});
}

GraphSpec realization_graph(const GraphSpec& base, std::uint64_t master, std::size_t realization) {
  GraphSpec g = base;
  g.seed = derive_seed(master, {kNetworkStream, realization});
  return g;
}

std::vector<std::vector<RealizationResult>> run_grid(const GraphSpec& graph, const SimConfig& base,
                                                     std::span<const GridPoint> points,
                                                     std::size_t realizations, unsigned workers,
                                                     std::uint64_t master_seed) {
  graph.validate();
  if (realizations == 0) throw InvalidSpec("realizations must be at least 1");
  for (const auto& p : points) {
    SimConfig c = base;
    c.r = p.r;
    c.alpha = p.alpha;
    c.validate();
  }

  std::optional<Network> shared;
  if (graph.kind == GraphSpec::Kind::lattice) shared = build_network(graph);

  std::vector<std::vector<RealizationResult>> out(points.size(), std::vector<RealizationResult>(realizations));
  parallel_for(points.size() * realizations, workers, [&](std::size_t task) {
    const std::size_t pi = task / realizations;
    const std::size_t ri = task % realizations;
    const GridPoint& p = points[pi];
    SimConfig c = base;
    c.r = p.r;
    c.alpha = p.alpha;
    c.seed = realization_seed(master_seed, p, ri);

    std::optional<Network> own;
    if (!shared) own = build_network(realization_graph(graph, master_seed, ri));
    const Network& net = shared ? *shared : *own;

    const RunResult res = run(net, c);
    RealizationResult& slot = out[pi][ri];
    slot.equilibrium = equilibrium_frequency(res.trajectory, c.transient);
    if (res.trajectory.absorbed) slot.absorbed = res.trajectory.absorbed->kind;
  });
  return out;
}

}  // namespace pgg
