#include "pgg/experiment.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <numeric>
#include <sstream>

#include "pgg/analysis.hpp"
#include "pgg/ensemble.hpp"

namespace pgg {

namespace fs = std::filesystem;

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

double parse_real(std::string_view text, std::string_view key) {
  text = trim(text);
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size() || !std::isfinite(v))
    throw UsageError("invalid number for " + std::string(key) + ": '" + std::string(text) + "'");
  return v;
}

std::uint64_t parse_count(std::string_view text, std::string_view key) {
  text = trim(text);
  std::uint64_t v = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size())
    throw UsageError("invalid integer for " + std::string(key) + ": '" + std::string(text) + "'");
  return v;
}

std::string join_reals(const std::vector<double>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ',';
    out += format_real(v[i]);
  }
  return out;
}

class CsvFile {
 public:
  CsvFile(const fs::path& path, std::string_view header) : path_(path), out_(path) {
    if (!out_) throw IoError("cannot open " + path.string() + " for writing");
    out_ << header << '\n';
  }
  template <class... Cells>
  void row(const Cells&... cells) {
    std::size_t k = 0;
    ((out_ << (k++ ? "," : "") << cell(cells)), ...);
    out_ << '\n';
  }
  ~CsvFile() = default;
  void close() {
    out_.close();
    if (!out_) throw IoError("failed writing " + path_.string());
  }

 private:
  static std::string cell(double v) { return format_real(v); }
  static std::string cell(const std::string& v) { return v; }
  static std::string cell(const char* v) { return v; }
  template <class Int>
    requires std::is_integral_v<Int>
  static std::string cell(Int v) { return std::to_string(v); }

  fs::path path_;
  std::ofstream out_;
};

void write_text(const fs::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  out.close();
  if (!out) throw IoError("failed writing " + path.string());
}

fs::path prepare_output(const ExperimentSpec& spec) {
  const fs::path dir(spec.out_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) throw IoError("cannot create output directory " + dir.string());
  write_text(dir / "config.txt", render_config(spec));
  return dir;
}

void gnuplot_script(const ExperimentSpec& spec, const fs::path& csv, std::string_view xcol,
                    std::string_view ycol, std::string_view extra = {}) {
  if (!spec.gnuplot) return;
  std::ostringstream gp;
  gp << "set datafile separator ','\n"
     << "set key autotitle columnhead\n"
     << "set xlabel '" << xcol << "'\n"
     << "set ylabel '" << ycol << "'\n"
     << "set terminal pngcairo size 800,600\n"
     << "set output '" << csv.stem().string() << ".png'\n"
     << extra << "plot '" << csv.filename().string() << "' using '" << xcol << "':'" << ycol
     << "' with linespoints\n";
  fs::path script = csv;
  script.replace_extension(".gp");
  write_text(script, gp.str());
}

std::string threshold_cell(const std::optional<double>& v) { return v ? format_real(*v) : "not_in_range"; }

}  // namespace

void ExperimentSpec::validate() const {
  graph.validate();
  sim.validate();
  if (r_values.empty() || alpha_values.empty()) throw InvalidSpec("sweep axes must be nonempty");
  if (realizations < 1) throw InvalidSpec("realizations must be at least 1");
  for (double r : r_values)
    if (r < 0.0) throw InvalidSpec("r must be non-negative");
  if (!(epsilon > 0.0 && epsilon < 0.5)) throw InvalidSpec("epsilon must lie in (0, 0.5)");
  if (refinements < 0) throw InvalidSpec("refinements must be non-negative");
}

std::string format_real(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::vector<double> parse_real_list(std::string_view text) {
  text = trim(text);
  if (text.empty()) throw UsageError("empty number list");
  std::vector<double> out;
  const auto c1 = text.find(':', 1);
  if (c1 != std::string_view::npos) {
    const auto c2 = text.find(':', c1 + 1);
    if (c2 == std::string_view::npos) throw UsageError("range must be lo:step:hi");
    const double lo = parse_real(text.substr(0, c1), "range");
    const double step = parse_real(text.substr(c1 + 1, c2 - c1 - 1), "range");
    const double hi = parse_real(text.substr(c2 + 1), "range");
    if (!(step > 0.0) || hi < lo) throw UsageError("range needs step > 0 and lo <= hi");
    const auto count = static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9));
    for (std::size_t k = 0; k <= count; ++k) out.push_back(lo + static_cast<double>(k) * step);
    return out;
  }
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto comma = text.find(',', start);
    const auto piece = text.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start);
    out.push_back(parse_real(piece, "list"));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

void apply_setting(ExperimentSpec& spec, std::string_view key, std::string_view value) {
  key = trim(key);
  value = trim(value);
  if (key == "net") {
    if (value == "lattice") spec.graph.kind = GraphSpec::Kind::lattice;
    else if (value == "ba") spec.graph.kind = GraphSpec::Kind::ba;
    else throw UsageError("net must be lattice or ba");
  } else if (key == "side") {
    spec.graph.side = parse_count(value, key);
  } else if (key == "n") {
    spec.graph.n = parse_count(value, key);
  } else if (key == "m0") {
    spec.graph.m0 = parse_count(value, key);
  } else if (key == "m") {
    spec.graph.m = parse_count(value, key);
  } else if (key == "r") {
    spec.r_values = parse_real_list(value);
    spec.sim.r = spec.r_values.front();
  } else if (key == "alpha") {
    spec.alpha_values = parse_real_list(value);
    spec.sim.alpha = spec.alpha_values.front();
  } else if (key == "tau") {
    spec.sim.tau = parse_real(value, key);
  } else if (key == "kappa") {
    spec.sim.kappa = parse_real(value, key);
  } else if (key == "generations") {
    spec.sim.generations = parse_count(value, key);
  } else if (key == "transient") {
    spec.sim.transient = parse_count(value, key);
  } else if (key == "init_coop") {
    spec.sim.init_coop_density = parse_real(value, key);
  } else if (key == "update") {
    if (value == "sync") spec.sim.update_mode = UpdateMode::synchronous;
    else if (value == "async") spec.sim.update_mode = UpdateMode::asynchronous;
    else throw UsageError("update must be sync or async");
  } else if (key == "seed") {
    spec.sim.seed = parse_count(value, key);
  } else if (key == "realizations") {
    spec.realizations = parse_count(value, key);
  } else if (key == "workers") {
    spec.workers = static_cast<unsigned>(parse_count(value, key));
    if (spec.workers == 0) spec.workers = default_workers();
  } else if (key == "out") {
    if (value.empty()) throw UsageError("out must not be empty");
    spec.out_dir = std::string(value);
  } else if (key == "gnuplot") {
    if (value == "true" || value == "1") spec.gnuplot = true;
    else if (value == "false" || value == "0") spec.gnuplot = false;
    else throw UsageError("gnuplot must be true or false");
  } else if (key == "pii_r") {
    spec.pii_r = parse_real(value, key);
  } else if (key == "epsilon") {
    spec.epsilon = parse_real(value, key);
  } else if (key == "refinements") {
    spec.refinements = static_cast<int>(parse_count(value, key));
  } else {
    throw UsageError("unknown setting '" + std::string(key) + "'");
  }
}

void load_config(ExperimentSpec& spec, std::istream& in) {
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string_view view(line);
    if (auto hash = view.find('#'); hash != std::string_view::npos) view = view.substr(0, hash);
    view = trim(view);
    if (view.empty()) continue;
    const auto eq = view.find('=');
    if (eq == std::string_view::npos) throw UsageError("config line " + std::to_string(lineno) + ": expected key = value");
    apply_setting(spec, view.substr(0, eq), view.substr(eq + 1));
  }
}

void load_config_file(ExperimentSpec& spec, const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read config " + path.string());
  load_config(spec, in);
}

std::string render_config(const ExperimentSpec& spec) {
  std::ostringstream out;
  out << "net = " << (spec.graph.kind == GraphSpec::Kind::lattice ? "lattice" : "ba") << '\n'
      << "side = " << spec.graph.side << '\n'
      << "n = " << spec.graph.n << '\n'
      << "m0 = " << spec.graph.m0 << '\n'
      << "m = " << spec.graph.m << '\n'
      << "r = " << join_reals(spec.r_values) << '\n'
      << "alpha = " << join_reals(spec.alpha_values) << '\n'
      << "tau = " << format_real(spec.sim.tau) << '\n'
      << "kappa = " << format_real(spec.sim.kappa) << '\n'
      << "generations = " << spec.sim.generations << '\n'
      << "transient = " << spec.sim.transient << '\n'
      << "init_coop = " << format_real(spec.sim.init_coop_density) << '\n'
      << "update = " << (spec.sim.update_mode == UpdateMode::synchronous ? "sync" : "async") << '\n'
      << "seed = " << spec.sim.seed << '\n'
      << "realizations = " << spec.realizations << '\n'
      << "workers = " << spec.workers << '\n'
      << "out = " << spec.out_dir << '\n'
      << "gnuplot = " << (spec.gnuplot ? "true" : "false") << '\n'
      << "pii_r = " << format_real(spec.pii_r) << '\n'
      << "epsilon = " << format_real(spec.epsilon) << '\n'
      << "refinements = " << spec.refinements << '\n';
  return out.str();
}

ExperimentSpec recipe(std::string_view name) {
  ExperimentSpec spec;
  auto set = [&spec](std::string_view k, std::string_view v) { apply_setting(spec, k, v); };
  if (name == "fig1") {
    set("net", "lattice");
    set("side", "30");
    set("r", "1:0.25:7");
    set("alpha", "0");
    set("realizations", "40");
  } else if (name == "fig2") {
    set("net", "ba");
    set("n", "4000");
    set("m0", "5");
    set("m", "2");
    set("r", "0.5:0.1:2.5");
    set("alpha", "-2,-1,0,1");
    set("realizations", "20");
  } else if (name == "fig3") {
    set("net", "ba");
    set("n", "100000");
    set("m0", "5");
    set("m", "2");
    set("alpha", "-2,1");
    set("r", "1:0.25:10");
  } else if (name == "fig4") {
    set("net", "ba");
    set("n", "100000");
    set("m0", "5");
    set("m", "2");
    set("alpha", "-2,-1,0,1");
    set("r", "1:0.25:10");
  } else if (name == "fig5") {
    set("net", "ba");
    set("n", "1000");
    set("m0", "5");
    set("m", "2");
    set("r", "1.6");
    set("alpha", "0");
  } else {
    throw UsageError("unknown recipe '" + std::string(name) + "' (expected fig1..fig5)");
  }
  return spec;
}

std::string render_pgm(const StateVector& state, std::size_t side) {
  const LatticeImage img = snapshot_lattice(state, side);
  std::string out = "P5\n" + std::to_string(side) + " " + std::to_string(side) + "\n255\n";
  out.append(img.pixels.begin(), img.pixels.end());
  return out;
}

StateVector read_state_file(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read state file " + path.string());
  StateVector state;
  std::string line;
  std::getline(in, line);  // header
  while (std::getline(in, line)) {
    std::string_view view = trim(line);
    if (view.empty()) continue;
    const auto comma = view.rfind(',');
    const auto cell = comma == std::string_view::npos ? view : view.substr(comma + 1);
    const auto v = parse_count(cell, "state");
    if (v > 1) throw InvalidInput("state values must be 0 or 1");
    state.push_back(static_cast<std::uint8_t>(v));
  }
  return state;
}

void cmd_run(const ExperimentSpec& spec) {
  spec.validate();
  if (spec.r_values.size() != 1 || spec.alpha_values.size() != 1)
    throw UsageError("run takes a single r and a single alpha");
  const fs::path dir = prepare_output(spec);

  // A run is realization 0 of the single grid point (0, 0).
  const GridPoint point{0, spec.alpha_values.front(), 0, spec.r_values.front()};
  SimConfig config = spec.sim;
  config.r = point.r;
  config.alpha = point.alpha;
  config.seed = realization_seed(spec.sim.seed, point, 0);
  const Network net = build_network(realization_graph(spec.graph, spec.sim.seed, 0));
  const RunResult res = run(net, config);
  const Trajectory& traj = res.trajectory;

  {
    CsvFile csv(dir / "trajectory.csv", "generation,rho_c");
    for (std::size_t t = 0; t < traj.rho_c.size(); ++t) csv.row(t, traj.rho_c[t]);
    csv.close();
    gnuplot_script(spec, dir / "trajectory.csv", "generation", "rho_c", "set yrange [0:1]\n");
  }
  {
    CsvFile csv(dir / "final_state.csv", "agent,degree,state");
    for (AgentId i = 0; i < net.size(); ++i) csv.row(i, net.degree(i), static_cast<int>(traj.final_state[i]));
    csv.close();
  }
  {
    CsvFile csv(dir / "update_stats.csv", "agent,degree,changes,frequency");
    for (AgentId i = 0; i < net.size(); ++i)
      csv.row(i, net.degree(i), res.stats.change_count[i], res.stats.frequency(i));
    csv.close();
  }
  {
    CsvFile csv(dir / "degree_states.csv", "degree,count,coop_fraction,mean_update_frequency");
    for (const auto& d : degree_resolved_states(net, traj.final_state, &res.stats))
      csv.row(d.degree, d.count, d.coop_fraction, d.mean_update_frequency);
    csv.close();
    gnuplot_script(spec, dir / "degree_states.csv", "degree", "coop_fraction", "set logscale x\n");
  }
  {
    std::ofstream edges(dir / "network.txt");
    if (!edges) throw IoError("cannot write network.txt");
    write_edge_list(edges, net);
  }

  std::ostringstream summary;
  summary << "final_rho_c = " << format_real(traj.rho_c.back()) << '\n'
          << "equilibrium_rho_c = " << format_real(equilibrium_frequency(traj, config.transient)) << '\n';
  if (traj.absorbed)
    summary << "absorbed = " << (traj.absorbed->kind == Absorption::all_cooperate ? "all_C" : "all_D") << " at "
            << traj.absorbed->generation << '\n';
  else
    summary << "absorbed = none\n";
  if (spec.graph.kind == GraphSpec::Kind::lattice) {
    write_text(dir / "snapshot.pgm", render_pgm(traj.final_state, spec.graph.side));
    summary << "same_state_edge_fraction = " << format_real(same_state_edge_fraction(net, traj.final_state)) << '\n'
            << "mixing_baseline = " << format_real(mixing_baseline(traj.rho_c.back())) << '\n';
  }
  write_text(dir / "summary.txt", summary.str());
  std::cout << summary.str();
}

void cmd_sweep(const ExperimentSpec& spec) {
  spec.validate();
  const fs::path dir = prepare_output(spec);

  std::vector<GridPoint> points;
  for (std::size_t a = 0; a < spec.alpha_values.size(); ++a)
    for (std::size_t k = 0; k < spec.r_values.size(); ++k)
      points.push_back({a, spec.alpha_values[a], k, spec.r_values[k]});
  std::stable_sort(points.begin(), points.end(), [](const GridPoint& x, const GridPoint& y) {
    return x.alpha != y.alpha ? x.alpha < y.alpha : x.r < y.r;
  });

  const auto results = run_grid(spec.graph, spec.sim, points, spec.realizations, spec.workers, spec.sim.seed);
  CsvFile csv(dir / "sweep.csv", "alpha,r,mean_rho_c,stderr,realizations,absorbed_C_count,absorbed_D_count");
  for (std::size_t p = 0; p < points.size(); ++p) {
    const auto s = summarize(results[p]);
    csv.row(points[p].alpha, points[p].r, s.mean, s.stderr_, s.realizations, s.absorbed_c, s.absorbed_d);
  }
  csv.close();
  gnuplot_script(spec, dir / "sweep.csv", "r", "mean_rho_c", "set yrange [0:1]\n");
}

void cmd_pii(const ExperimentSpec& spec) {
  spec.validate();
  if (!std::is_sorted(spec.r_values.begin(), spec.r_values.end())) throw UsageError("r grid must be ascending");
  const fs::path dir = prepare_output(spec);
  const Network net = build_network(realization_graph(spec.graph, spec.sim.seed, 0));

  CsvFile pii(dir / "pii.csv", "alpha,agent,degree,l_alpha,p_ii");
  CsvFile by_degree(dir / "pii_by_degree.csv", "alpha,degree,count,mean_p_ii");
  CsvFile inset(dir / "pii_k3.csv", "alpha,agent,p_ii,k1,k2,k3");
  CsvFile group(dir / "group_size.csv", "alpha,effective_group_size");
  CsvFile fraction(dir / "pii_fraction.csv", "alpha,r,fraction");
  for (double alpha : spec.alpha_values) {
    const auto stats = pii_by_degree(net, alpha, spec.pii_r);
    double inv_sum = 0.0;
    for (const auto& rec : stats.records) {
      pii.row(alpha, rec.agent, rec.degree, rec.l_alpha, rec.p_ii);
      inv_sum += 1.0 / rec.l_alpha;
    }
    for (const auto& d : stats.by_degree) by_degree.row(alpha, d.degree, d.count, d.mean);
    for (const auto& t : pii_neighbor_tuples(net, alpha, spec.pii_r, 3))
      inset.row(alpha, t.agent, t.p_ii, t.neighbor_degrees[0], t.neighbor_degrees[1], t.neighbor_degrees[2]);
    group.row(alpha, net.size() ? inv_sum / static_cast<double>(net.size()) : 0.0);
    const auto frac = fraction_pii_above_one(net, alpha, spec.r_values);
    for (std::size_t k = 0; k < frac.size(); ++k) fraction.row(alpha, spec.r_values[k], frac[k]);
  }
  pii.close();
  by_degree.close();
  inset.close();
  group.close();
  fraction.close();
  gnuplot_script(spec, dir / "pii_by_degree.csv", "degree", "mean_p_ii", "set logscale x\n");
  gnuplot_script(spec, dir / "group_size.csv", "alpha", "effective_group_size");
  gnuplot_script(spec, dir / "pii_fraction.csv", "r", "fraction");
}

void cmd_thresholds(const ExperimentSpec& spec) {
  spec.validate();
  const auto& r = spec.r_values;
  if (r.size() < 2 || !std::is_sorted(r.begin(), r.end()) || r.front() == r.back())
    throw UsageError("thresholds needs an ascending r grid lo:step:hi");
  const fs::path dir = prepare_output(spec);

  CsvFile summary(dir / "thresholds.csv", "alpha,r_c,r_d");
  CsvFile grid(dir / "thresholds_grid.csv", "alpha,r,mean_rho_c,stderr");
  for (std::size_t a = 0; a < spec.alpha_values.size(); ++a) {
    ThresholdSearch search;
    search.r_lo = r.front();
    search.r_hi = r.back();
    search.r_step = r[1] - r[0];
    search.realizations = spec.realizations;
    search.epsilon = spec.epsilon;
    search.refinements = spec.refinements;
    search.workers = spec.workers;
    search.master_seed = spec.sim.seed;
    search.alpha_index = a;
    const auto res = find_thresholds(spec.graph, spec.alpha_values[a], spec.sim, search);
    summary.row(spec.alpha_values[a], threshold_cell(res.r_c), threshold_cell(res.r_d));
    for (std::size_t k = 0; k < res.grid.size(); ++k)
      grid.row(spec.alpha_values[a], res.grid[k], res.points[k].mean, res.points[k].stderr_);
  }
  summary.close();
  grid.close();
  gnuplot_script(spec, dir / "thresholds_grid.csv", "r", "mean_rho_c", "set yrange [0:1]\n");
}

void cmd_snapshot(const fs::path& state_file, std::size_t side, const fs::path& out) {
  const StateVector state = read_state_file(state_file);
  if (state.size() != side * side)
    throw InvalidInput("state has " + std::to_string(state.size()) + " agents, expected side^2 = " +
                       std::to_string(side * side));
  if (out.has_parent_path()) {
    std::error_code ec;
    fs::create_directories(out.parent_path(), ec);
  }
  write_text(out, render_pgm(state, side));
}

}  // namespace pgg
