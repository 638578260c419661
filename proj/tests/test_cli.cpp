#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

namespace fs = std::filesystem;

namespace {

int run_cli(const std::string& args) {
  const std::string cmd = std::string(PGG_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("pgg_test_cli_" + name);
  fs::remove_all(dir);
  return dir;
}

}  // namespace

TEST_CASE("run succeeds and writes outputs") {
  const fs::path out = scratch("run");
  CHECK(run_cli("run --net lattice --side 10 --r 3.8 --generations 200 --transient 100 --seed 1 --gnuplot --out " +
                out.string()) == 0);
  CHECK(fs::exists(out / "trajectory.csv"));
  CHECK(fs::exists(out / "final_state.csv"));
  CHECK(fs::exists(out / "trajectory.gp"));

  const fs::path pgm = out / "snap.pgm";
  CHECK(run_cli("snapshot " + (out / "final_state.csv").string() + " --side 10 --out " + pgm.string()) == 0);
  CHECK(fs::file_size(pgm) == std::string("P5\n10 10\n255\n").size() + 100);
  CHECK(run_cli("snapshot " + (out / "final_state.csv").string() + " --side 9 --out " + pgm.string()) == 1);
}

TEST_CASE("config file and recipe resolution") {
  const fs::path out = scratch("cfg");
  fs::create_directories(out);
  {
    std::ofstream cfg(out / "exp.txt");
    cfg << "net = ba\nn = 300\ngenerations = 100\ntransient = 50\nr = 1,2\nrealizations = 2\n";
  }
  CHECK(run_cli("sweep --config " + (out / "exp.txt").string() + " --out " + (out / "s").string()) == 0);
  CHECK(fs::exists(out / "s" / "sweep.csv"));
  CHECK(run_cli("pii --recipe fig4 --n 2000 --out " + (out / "p").string()) == 0);
  CHECK(fs::exists(out / "p" / "group_size.csv"));
}

TEST_CASE("usage errors exit with 1") {
  CHECK(run_cli("") == 1);
  CHECK(run_cli("frobnicate") == 1);
  CHECK(run_cli("run --net ring") == 1);
  CHECK(run_cli("run --side 2 --out " + scratch("bad").string()) == 1);
  CHECK(run_cli("run --recipe nope") == 1);
  CHECK(run_cli("run --generations 10 --transient 10") == 1);
}

TEST_CASE("I/O errors exit with 2") {
  const fs::path blocker = scratch("blocker");
  { std::ofstream(blocker) << "x"; }
  CHECK(run_cli("run --side 5 --generations 10 --transient 5 --out " + (blocker / "sub").string()) == 2);
  CHECK(run_cli("snapshot /nonexistent/state.csv --side 3") == 2);
  CHECK(run_cli("run --config /nonexistent/config.txt") == 2);
  fs::remove(blocker);
}
