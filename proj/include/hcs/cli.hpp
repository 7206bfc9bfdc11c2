#pragma once

#include "hcs/report.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace hcs {

struct RunConfig {
  std::string command;
  std::string manifold = "flat_torus";
  std::optional<int> n;
  std::optional<double> L;
  double epsilon = 0.0;
  std::string suite = "all";
  int samples = 100;
  int j_samples = 50;
  double h = 1e-4;
  double tol = 1e-4;
  std::uint64_t seed = 0;
  std::optional<int> grid;
  int steps = 100000;
  double tau = 0.0;
  std::string out;
};

// Check names accepted by --suite.
std::vector<std::string> verify_check_names();

// Executes one command; reports go to cfg.out, or to `out` when empty.
// Returns 0 when every check passes and 1 otherwise; throws hcs::Error on
// configuration or I/O problems.
int run_command(const RunConfig& cfg, std::ostream& out);

// Full entry point: parses argv, maps errors to exit code 2 with a single
// diagnostic line on `err`.
int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace hcs
