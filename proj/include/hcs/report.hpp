#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace hcs {

enum class CheckStatus { passed, failed, hypothesis_not_met };

const char* to_string(CheckStatus s);

struct ResidualReport {
  std::string name;
  std::string manifold;
  int samples = 0;
  double h = 0.0;
  double max_residual = 0.0;
  double mean_residual = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  std::uint64_t seed = 0;
  CheckStatus status = CheckStatus::failed;
  // Named auxiliary quantities (integral values, scan minima, ...).
  std::vector<std::pair<std::string, double>> detail;

  double detail_value(const std::string& key) const;
};

// Residual check: pass iff max residual <= tolerance.
ResidualReport residual_report(std::string name, std::string manifold,
                               std::span<const double> residuals, double tolerance, double h,
                               std::uint64_t seed);

// Concatenation of residual checks under one name: max of maxima,
// sample-weighted mean, pass iff all pass. Details are kept from the first.
ResidualReport merge_reports(std::string name, std::span<const ResidualReport> parts);

// Top-level envelope of a CLI run.
struct RunHeader {
  std::string command;
  std::string manifold;
  std::uint64_t seed = 0;
  double h = 0.0;
  double tol = 0.0;
};

// JSON with keys version, command, manifold, seed, h, tol, checks (in that
// order). Each check lists name, samples, max_residual, mean_residual,
// tolerance, pass, then status and detail.
std::string report_json(const RunHeader& header, std::span<const ResidualReport> reports);
void write_report(const RunHeader& header, std::span<const ResidualReport> reports,
                  const std::string& path);

struct ParsedReport {
  RunHeader header;
  std::vector<ResidualReport> checks;
};
ParsedReport parse_report(const std::string& json_text);

}  // namespace hcs
