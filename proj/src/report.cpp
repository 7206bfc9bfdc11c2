#include "hcs/report.hpp"

#include "hcs/errors.hpp"

#include <json.hpp>

#include <algorithm>
#include <fstream>
#include <cmath>

namespace hcs {

using ordered_json = nlohmann::ordered_json;

const char* to_string(CheckStatus s) {
  switch (s) {
    case CheckStatus::passed:
      return "passed";
    case CheckStatus::failed:
      return "failed";
    case CheckStatus::hypothesis_not_met:
      return "hypothesis_not_met";
  }
  return "failed";
}

double ResidualReport::detail_value(const std::string& key) const {
  for (const auto& [k, v] : detail)
    if (k == key) return v;
  throw std::out_of_range("report '" + name + "' has no detail '" + key + "'");
}

ResidualReport residual_report(std::string name, std::string manifold,
                               std::span<const double> residuals, double tolerance, double h,
                               std::uint64_t seed) {
  ResidualReport r;
  r.name = std::move(name);
  r.manifold = std::move(manifold);
  r.samples = static_cast<int>(residuals.size());
  r.h = h;
  r.tolerance = tolerance;
  r.seed = seed;
  if (!residuals.empty()) {
    double mean = 0.0;
    int k = 0;
    for (double v : residuals) {
      r.max_residual = std::isnan(v) || std::isnan(r.max_residual) ? std::nan("") : std::max(r.max_residual, v);
      mean += (v - mean) / ++k;
    }
    r.mean_residual = mean;
  }
  // NaN residuals fail.
  r.pass = r.max_residual <= tolerance;
  r.status = r.pass ? CheckStatus::passed : CheckStatus::failed;
  return r;
}

ResidualReport merge_reports(std::string name, std::span<const ResidualReport> parts) {
  if (parts.empty()) throw Error("merge_reports: nothing to merge");
  ResidualReport r = parts.front();
  r.name = std::move(name);
  double weighted = 0.0;
  int samples = 0;
  bool all_pass = true, any_failed = false;
  for (const ResidualReport& p : parts) {
    r.max_residual = std::max(r.max_residual, p.max_residual);
    weighted += p.mean_residual * p.samples;
    samples += p.samples;
    all_pass = all_pass && p.pass;
    any_failed = any_failed || p.status == CheckStatus::failed;
  }
  r.samples = samples;
  r.mean_residual = samples > 0 ? weighted / samples : 0.0;
  r.pass = all_pass;
  r.status = any_failed || !all_pass ? CheckStatus::failed : r.status;
  return r;
}

std::string report_json(const RunHeader& header, std::span<const ResidualReport> reports) {
  ordered_json doc;
  doc["version"] = "1";
  doc["command"] = header.command;
  doc["manifold"] = header.manifold;
  doc["seed"] = header.seed;
  doc["h"] = header.h;
  doc["tol"] = header.tol;
  ordered_json checks = ordered_json::array();
  for (const ResidualReport& r : reports) {
    ordered_json c;
    c["name"] = r.name;
    c["samples"] = r.samples;
    c["max_residual"] = r.max_residual;
    c["mean_residual"] = r.mean_residual;
    c["tolerance"] = r.tolerance;
    c["pass"] = r.pass;
    c["status"] = to_string(r.status);
    ordered_json detail = ordered_json::object();
    for (const auto& [k, v] : r.detail) detail[k] = v;
    c["detail"] = detail;
    checks.push_back(std::move(c));
  }
  doc["checks"] = std::move(checks);
  return doc.dump(2) + "\n";
}

void write_report(const RunHeader& header, std::span<const ResidualReport> reports,
                  const std::string& path) {
  const std::string text = report_json(header, reports);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot open report file '" + path + "' for writing");
  out << text;
  out.flush();
  if (!out) throw Error("failed writing report file '" + path + "'");
}

ParsedReport parse_report(const std::string& json_text) {
  const ordered_json doc = ordered_json::parse(json_text);
  ParsedReport out;
  out.header.command = doc.at("command").get<std::string>();
  out.header.manifold = doc.at("manifold").get<std::string>();
  out.header.seed = doc.at("seed").get<std::uint64_t>();
  out.header.h = doc.at("h").get<double>();
  out.header.tol = doc.at("tol").get<double>();
  for (const auto& c : doc.at("checks")) {
    ResidualReport r;
    r.name = c.at("name").get<std::string>();
    r.samples = c.at("samples").get<int>();
    r.max_residual = c.at("max_residual").get<double>();
    r.mean_residual = c.at("mean_residual").get<double>();
    r.tolerance = c.at("tolerance").get<double>();
    r.pass = c.at("pass").get<bool>();
    const std::string status = c.value("status", r.pass ? "passed" : "failed");
    r.status = status == "passed"               ? CheckStatus::passed
               : status == "hypothesis_not_met" ? CheckStatus::hypothesis_not_met
                                                : CheckStatus::failed;
    if (c.contains("detail"))
      for (const auto& [k, v] : c.at("detail").items()) r.detail.emplace_back(k, v.get<double>());
    out.checks.push_back(std::move(r));
  }
  return out;
}

}  // namespace hcs
