#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace pmelab::cli {

// Resolved experiment configuration. Defaults are the documented ones; every
// run echoes the resolved values into report.json for reproducibility.
struct ExperimentConfig {
  std::string command;
  double lambda = 1.0;
  double Lambda = 1.0;
  double b = 1.0;
  std::string sign = "minus";  // "minus" | "plus"
  int dim = 1;
  int nx = 129;        // nodes per axis: power of two plus one, >= 17
  double domain = 8.0; // spatial box [-domain, domain]^dim
  double cfl = 0.9;
  double max_dt = 0.0; // 0 = no explicit cap
  double t_final = 1.0;
  std::string ic = "front";  // front | barenblatt | constant:c | file:PATH
  int k_max = 6;
  double shift = 0.0;
  int n_shifts = 17;
  double mu = 0.5;
  double t0 = 0.0;
  double center_x = 0.0;
  double center_y = 0.0;
  std::string snapshots;  // comma-separated times; empty = final time only
  std::string out = ".";
  std::uint64_t seed = 1;
};

// Line-based `key = value` file; '#' starts a comment; blank lines ignored.
// Unknown keys raise an error that lists the valid keys.
void load_config_file(const std::string& path, ExperimentConfig& cfg);

// Full argv parse: the positional command, then flags. --config is applied
// first so explicit flags override file values regardless of position.
ExperimentConfig parse_args(const std::vector<std::string>& args);

// Executes the configured command, writing artifacts under cfg.out.
// Returns 0 on success, 2 on hypothesis-violation diagnostics.
// Other errors propagate as exceptions.
int run(const ExperimentConfig& cfg);

// parse + run + uniform error reporting; the process exit code
// (0 success, 1 usage/config/runtime error, 2 hypothesis violation).
int main_entry(int argc, char** argv);

}  // namespace pmelab::cli
