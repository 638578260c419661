#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "pgg/dynamics.hpp"
#include "pgg/graph.hpp"

namespace pgg {

// Bad command line or configuration. Maps to exit code 1.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Output or input file could not be opened or written. Maps to exit code 2.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Everything needed to reproduce one experiment. `seed` is the master seed;
/// per-realization network and dynamics streams are derived from it.
struct ExperimentSpec {
  GraphSpec graph;
  SimConfig sim;
  std::vector<double> r_values{1.0};
  std::vector<double> alpha_values{0.0};
  std::size_t realizations = 1;
  std::string out_dir = "out";
  unsigned workers = 1;
  bool gnuplot = false;
  double pii_r = 1.0;
  double epsilon = 0.01;
  int refinements = 3;

  void validate() const;
};

/// `key = value` setting; keys match the long command-line flags.
void apply_setting(ExperimentSpec& spec, std::string_view key, std::string_view value);

/// Reads `key = value` lines; `#` starts a comment.
void load_config(ExperimentSpec& spec, std::istream& in);
void load_config_file(ExperimentSpec& spec, const std::filesystem::path& path);

/// Every setting with defaults materialized, in a form load_config accepts.
std::string render_config(const ExperimentSpec& spec);

/// Built-in parameter sets: fig1 ... fig5.
ExperimentSpec recipe(std::string_view name);

/// "x", "a,b,c" or "lo:step:hi" (inclusive).
std::vector<double> parse_real_list(std::string_view text);

/// Twelve significant digits.
std::string format_real(double v);

/// Binary PGM (P5) of a lattice state; cooperators black.
std::string render_pgm(const StateVector& state, std::size_t side);

/// Reads the state column of a final_state.csv file.
StateVector read_state_file(const std::filesystem::path& path);

void cmd_run(const ExperimentSpec& spec);
void cmd_sweep(const ExperimentSpec& spec);
void cmd_pii(const ExperimentSpec& spec);
void cmd_thresholds(const ExperimentSpec& spec);
void cmd_snapshot(const std::filesystem::path& state_file, std::size_t side, const std::filesystem::path& out);

}  // namespace pgg
