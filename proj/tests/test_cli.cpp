#include <doctest.h>

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

struct CliResult {
  int status = -1;
  std::string output;
};

CliResult run_cli(const std::string& args) {
  const std::string dir = "cli_test_scratch";
  fs::create_directories(dir);
  const std::string log = dir + "/last_output.txt";
  const std::string cmd = std::string(JKOFLOW_CLI_PATH) + " " + args + " > " + log + " 2>&1";
  const int rc = std::system(cmd.c_str());
  CliResult r;
  r.status = (rc >= 0 && WIFEXITED(rc)) ? WEXITSTATUS(rc) : -1;
  std::ifstream in(log);
  std::stringstream ss;
  ss << in.rdbuf();
  r.output = ss.str();
  return r;
}

std::string write_config(const std::string& name, const std::string& text) {
  const std::string dir = "cli_test_scratch";
  fs::create_directories(dir);
  const std::string path = dir + "/" + name;
  std::ofstream out(path);
  out << text;
  return path;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("validate passes on the default configuration") {
  const CliResult r = run_cli("validate");
  CHECK(r.status == 0);
  CHECK(r.output.find("PASS") != std::string::npos);
  CHECK(r.output.find("FAIL") == std::string::npos);
}

TEST_CASE("global flags are accepted on either side of the subcommand") {
  const std::string cfg = write_config("mini.cfg", "K=2\nT=1e-3\npotential=zero\n");
  const CliResult before = run_cli("--config " + cfg + " --out cli_test_scratch/a run");
  const CliResult after = run_cli("run --config " + cfg + " --out cli_test_scratch/b");
  CHECK(before.status == 0);
  CHECK(after.status == 0);
}

TEST_CASE("a missing config file exits with status two") {
  const CliResult r = run_cli("run --config cli_test_scratch/does_not_exist.cfg");
  CHECK(r.status == 2);
  CHECK(r.output.find("cannot open") != std::string::npos);
}

TEST_CASE("a malformed config names its line and exits with status two") {
  const std::string cfg = write_config("bad.cfg", "K=8\nK=-1\n");
  const CliResult r = run_cli("run --config " + cfg);
  CHECK(r.status == 2);
  CHECK(r.output.find("config line 2") != std::string::npos);
}

TEST_CASE("run emits the entropy series and final state, reproducibly") {
  const std::string cfg =
      write_config("run.cfg", "K=3\ntau=1e-3\nT=3e-3\npotential=exp1\n");
  const CliResult r1 = run_cli("run --config " + cfg + " --out cli_test_scratch/r1");
  REQUIRE(r1.status == 0);
  CHECK(fs::exists("cli_test_scratch/r1/decay.dat"));
  CHECK(fs::exists("cli_test_scratch/r1/state_final.csv"));
  CHECK(r1.output.find("entropy") != std::string::npos);

  const CliResult r2 = run_cli("run --config " + cfg + " --out cli_test_scratch/r2");
  REQUIRE(r2.status == 0);
  CHECK(slurp("cli_test_scratch/r1/decay.dat") == slurp("cli_test_scratch/r2/decay.dat"));
  CHECK(slurp("cli_test_scratch/r1/state_final.csv") ==
        slurp("cli_test_scratch/r2/state_final.csv"));

  // entropy series: header plus one row per step plus the initial value
  std::ifstream decay("cli_test_scratch/r1/decay.dat");
  std::string line;
  int rows = 0;
  bool header_seen = false;
  while (std::getline(decay, line)) {
    if (!header_seen) {
      header_seen = true;
      CHECK(line.find("t") != std::string::npos);
    } else if (!line.empty()) {
      ++rows;
    }
  }
  CHECK(rows == 4);
}

TEST_CASE("convergence command writes the error records") {
  const std::string cfg = write_config(
      "conv.cfg", "Ks=2,3\ntau=2e-3\nT=4e-3\nL=30\npotential=zero\n");
  const CliResult r = run_cli("convergence --config " + cfg + " --out cli_test_scratch/c");
  REQUIRE(r.status == 0);
  CHECK(fs::exists("cli_test_scratch/c/error.dat"));
  CHECK(r.output.find("fitted order") != std::string::npos);
}

TEST_CASE("contractivity command writes distances and the rate envelope") {
  const std::string cfg =
      write_config("contr.cfg", "K=2\ntau=1e-3\nsteps=6\npotential=quadratic\n");
  const CliResult r =
      run_cli("contractivity --config " + cfg + " --out cli_test_scratch/k");
  REQUIRE(r.status == 0);
  CHECK(fs::exists("cli_test_scratch/k/distance.dat"));
  CHECK(fs::exists("cli_test_scratch/k/envelope.dat"));
  CHECK(r.output.find("fitted rate") != std::string::npos);

  // identical seed reruns are byte-identical
  const CliResult r2 =
      run_cli("contractivity --config " + cfg + " --out cli_test_scratch/k2");
  REQUIRE(r2.status == 0);
  CHECK(slurp("cli_test_scratch/k/distance.dat") ==
        slurp("cli_test_scratch/k2/distance.dat"));
}
