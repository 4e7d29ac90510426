#include <doctest.h>

#include <cstdlib>
#include <fstream>
#include <string>

#include <sys/wait.h>

#include "helpers.hpp"

namespace {

int run_cli(const std::string& args) {
  const std::string command = std::string(SUBRAD_CLI) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(command.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string write_config(const std::string& name, const std::string& text) {
  const auto path = std::filesystem::temp_directory_path() / ("subrad_cli_" + name + ".json");
  std::ofstream(path) << text;
  return path.string();
}

const char* kScenario = R"({
  "name": "cli",
  "model": {"atom_count": 11, "sum_cutoff": 500},
  "field": {"zero_point": [[0, 0], [1, 2]]},
  "initial": {"momentum_over_k0": 1.5, "psi_plus": 0.3, "psi_minus": 0.3, "width_sites2": 10},
  "sampling": {"t_end_inv_gamma0": 2, "count": 5}
})";

}  // namespace

TEST_CASE("exit codes") {
  const auto out = testing::scratch_dir("cli");
  const auto good = write_config("good", kScenario);
  CHECK(run_cli("evolve --config " + good + " --out " + out.string()) == 0);
  CHECK(std::filesystem::exists(out / "observables.csv"));
  CHECK(run_cli("project --config " + good + " --out " + out.string()) == 0);
  CHECK(std::filesystem::exists(out / "spectrum.csv"));

  const auto typo = write_config("typo", std::string(kScenario).replace(std::string(kScenario).find("count\""), 6, "cuont\""));
  CHECK(run_cli("evolve --config " + typo + " --out " + out.string()) == 2);
  CHECK(run_cli("evolve --config /nonexistent.json --out " + out.string()) == 2);
  CHECK(run_cli("evolve --config " + good) == 2);
  CHECK(run_cli("teleport --config " + good) == 2);
  CHECK(run_cli("bands --config " + good + " --out " + out.string()) == 2);

  CHECK(run_cli("evolve --config " + good + " --out " + out.string() + " --dt-max 0.5") == 3);
}
