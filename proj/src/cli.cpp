#include "hcs/cli.hpp"

#include "hcs/errors.hpp"
#include "hcs/flow.hpp"
#include "hcs/identities.hpp"
#include "hcs/random_fields.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <iostream>
#include <numbers>
#include <set>
#include <sstream>

namespace hcs {

namespace {

// Sub-seed streams derived from the root seed.
constexpr std::uint64_t kPointStream = 1;
constexpr std::uint64_t kConjugatedStream = 2;
constexpr std::uint64_t kEndomorphismStream = 3;
constexpr std::uint64_t kFrameStream = 4;
constexpr std::uint64_t kTwoFormStream = 5;
constexpr std::uint64_t kFormStreamBase = 10;
constexpr std::uint64_t kScanStreamBase = 1000;

constexpr int kFormsPerDegree = 2;
constexpr double kOrthogonalOracleGap = 24.0;

const std::vector<std::string> kVerifyChecks = {
    "curvature_symmetries", "weitzenboeck",  "integrability",      "kaehler_harmonic",
    "bochner",              "trace_theorem", "trace_delta_j",      "scal_bound",
    "integral_criterion",   "integral_trace", "energy_bound",      "frame_independence"};

std::string format_double(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

std::string manifold_label(const ManifoldChart& m) {
  std::string s = m.name + "(";
  bool first = true;
  for (const auto& [k, v] : m.params) {
    s += (first ? "" : ",") + k + "=" + format_double(v);
    first = false;
  }
  return s + ")";
}

ManifoldPtr make_manifold(const RunConfig& cfg, const std::string& name, std::optional<int> n) {
  std::map<std::string, double> params;
  if (n) params["n"] = *n;
  if (name == "flat_torus" && cfg.L) params["L"] = *cfg.L;
  if (name == "perturbed_sphere") {
    params["epsilon"] = cfg.epsilon;
    params["seed"] = static_cast<double>(cfg.seed);
  }
  return builtin(name, params);
}

std::set<std::string> parse_suite(const std::string& suite) {
  std::set<std::string> out;
  if (suite == "all") return {kVerifyChecks.begin(), kVerifyChecks.end()};
  std::stringstream ss(suite);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    if (std::find(kVerifyChecks.begin(), kVerifyChecks.end(), item) == kVerifyChecks.end())
      throw ParameterError("unknown check '" + item + "' in --suite");
    out.insert(item);
  }
  if (out.empty()) throw ParameterError("--suite selects no checks");
  return out;
}

int auto_grid(int n) {
  if (n <= 2) return 64;
  if (n <= 4) return 8;
  return 4;
}

int emit(const RunConfig& cfg, const RunHeader& header, const std::vector<ResidualReport>& reports,
         std::ostream& out) {
  if (cfg.out.empty()) {
    out << report_json(header, reports);
  } else {
    write_report(header, reports, cfg.out);
    for (const ResidualReport& r : reports)
      out << (r.pass ? "PASS " : "FAIL ") << r.name << " max_residual=" << format_double(r.max_residual)
          << " tolerance=" << format_double(r.tolerance) << "\n";
  }
  const bool all = std::all_of(reports.begin(), reports.end(), [](const ResidualReport& r) { return r.pass; });
  return all ? 0 : 1;
}

int run_verify(const RunConfig& cfg, std::ostream& out) {
  const ManifoldPtr m = make_manifold(cfg, cfg.manifold, cfg.n);
  if (m->dim % 2 != 0)
    throw ParameterError("dimension " + std::to_string(m->dim) + " is odd: no almost complex structure exists");
  const std::set<std::string> suite = parse_suite(cfg.suite);
  const bool explicit_suite = cfg.suite != "all";
  const int n = m->dim;
  const auto points = sample_points(*m, cfg.samples, split_seed(cfg.seed, kPointStream));
  CheckOptions opts;
  opts.h = cfg.h;
  opts.tol = cfg.tol;
  opts.seed = cfg.seed;

  const AlmostComplexField standard = make_standard(m);
  const AlmostComplexField conjugated = make_conjugated(m, split_seed(cfg.seed, kConjugatedStream));
  const bool kaehler_applicable = m->name == "flat_torus" || n == 2;
  const bool torus = m->quadrature.has_value();
  const int grid = cfg.grid.value_or(auto_grid(n));

  std::vector<ResidualReport> reports;
  auto want = [&](const char* name) { return suite.count(name) > 0; };

  if (want("curvature_symmetries")) reports.push_back(check_curvature_symmetries(*m, points, opts));
  if (want("weitzenboeck")) {
    std::vector<ResidualReport> parts;
    double absolute = 0.0;
    for (int p = 0; p <= std::min(n, 3); ++p)
      for (int k = 0; k < kFormsPerDegree; ++k) {
        const auto w = random_tensor_field(m, p, split_seed(cfg.seed, kFormStreamBase + kFormsPerDegree * p + k));
        parts.push_back(check_weitzenboeck(w, points, opts));
        absolute = std::max(absolute, parts.back().detail_value("max_absolute_residual"));
      }
    ResidualReport r = merge_reports("weitzenboeck", parts);
    r.detail = {{"fields", static_cast<double>(parts.size())}, {"max_absolute_residual", absolute}};
    reports.push_back(std::move(r));
  }
  if (want("integrability")) reports.push_back(check_integrability(conjugated, points, opts));
  if (want("kaehler_harmonic") && (kaehler_applicable || explicit_suite))
    reports.push_back(check_kaehler_harmonic(standard, points, opts));
  if (want("bochner")) {
    for (ResidualReport& r : check_bochner(conjugated, points, opts)) reports.push_back(std::move(r));
    for (ResidualReport& r : check_bochner(standard, points, opts)) {
      if (r.name == "bochner") r.name = "bochner_standard";
      reports.push_back(std::move(r));
    }
  }
  if (want("trace_theorem")) {
    RandomFieldOptions ropts;
    ropts.antisymmetric = false;
    const auto a = random_tensor_field(m, 1, split_seed(cfg.seed, kEndomorphismStream), ropts);
    reports.push_back(check_trace_theorem(a, points, opts));
  }
  if (want("trace_delta_j")) reports.push_back(check_trace_delta_j(conjugated, points, opts));
  if (want("scal_bound")) reports.push_back(check_scal_bound(standard, points, opts));
  if (want("integral_criterion") && (torus || explicit_suite)) {
    ResidualReport k = check_integral_criterion(standard, grid, points, opts);
    k.name = "integral_criterion_kaehler";
    reports.push_back(std::move(k));
    ResidualReport c = check_integral_criterion(conjugated, grid, points, opts);
    c.name = "integral_criterion_conjugated";
    reports.push_back(std::move(c));
  }
  if (want("integral_trace") && (torus || explicit_suite)) {
    RandomFieldOptions ropts;
    ropts.antisymmetric = false;
    const auto a = random_tensor_field(m, 1, split_seed(cfg.seed, kEndomorphismStream), ropts);
    reports.push_back(check_integral_trace(a, grid, opts));
  }
  if (want("energy_bound")) {
    ResidualReport s = check_energy_bound(standard, points, opts);
    ResidualReport c = check_energy_bound(conjugated, points, opts);
    s.name = "energy_bound_standard";
    c.name = "energy_bound_conjugated";
    reports.push_back(std::move(s));
    reports.push_back(std::move(c));
  }
  if (want("frame_independence")) {
    CheckOptions fopts = opts;
    fopts.seed = split_seed(cfg.seed, kFrameStream);
    const auto w = random_tensor_field(m, std::min(2, n), split_seed(cfg.seed, kTwoFormStream));
    ResidualReport r = check_frame_independence(conjugated, w, points, fopts);
    r.seed = cfg.seed;
    reports.push_back(std::move(r));
  }

  const RunHeader header{"verify", manifold_label(*m), cfg.seed, cfg.h, cfg.tol};
  return emit(cfg, header, reports, out);
}

std::uint64_t scan_seed(std::uint64_t root, int k) {
  if (k == 0) return 0;
  // Cycles the sampler's three J families; never 0.
  const std::uint64_t base = split_seed(root, kScanStreamBase + k) / 3 * 3 + 3;
  return base + static_cast<std::uint64_t>(k % 3);
}

int run_scan(const RunConfig& cfg, std::ostream& out) {
  if (cfg.n && *cfg.n != 6) throw ParameterError("scan-s6 runs in dimension 6 only");
  if (cfg.j_samples < 1) throw ParameterError("--j-samples must be at least 1");
  std::string name = cfg.manifold;
  if (name == "flat_torus") name = cfg.epsilon > 0.0 ? "perturbed_sphere" : "round_sphere";
  if (name != "round_sphere" && name != "perturbed_sphere")
    throw ParameterError("scan-s6 needs round_sphere or perturbed_sphere");
  if (name == "round_sphere" && cfg.epsilon != 0.0) throw ParameterError("--epsilon needs perturbed_sphere");
  const ManifoldPtr m = make_manifold(cfg, name, 6);
  const bool round = name == "round_sphere" || cfg.epsilon == 0.0;

  std::vector<std::uint64_t> seeds;
  for (int k = 0; k < cfg.j_samples; ++k) seeds.push_back(scan_seed(cfg.seed, k));
  const auto points = sample_points(*m, cfg.samples, split_seed(cfg.seed, kPointStream));
  ScanOptions sopts;
  sopts.h = cfg.h;
  sopts.seed = cfg.seed;
  sopts.margin = round ? 20.0 : 0.0;
  std::vector<ResidualReport> reports{s6_obstruction_scan(m, pointwise_j_sampler, seeds, points, sopts)};

  const ResidualReport& scan = reports.front();
  if (round && scan.detail_value("orthogonal_samples") > 0) {
    const double lo = scan.detail_value("min_orthogonal_gap");
    const double hi = scan.detail_value("max_orthogonal_gap");
    const std::vector<double> res{std::abs(lo - kOrthogonalOracleGap), std::abs(hi - kOrthogonalOracleGap)};
    ResidualReport oracle = residual_report("s6_orthogonal_oracle", m->name, res, cfg.tol, cfg.h, cfg.seed);
    oracle.samples = static_cast<int>(scan.detail_value("orthogonal_samples"));
    oracle.detail = {{"oracle_gap", kOrthogonalOracleGap}, {"min_orthogonal_gap", lo}, {"max_orthogonal_gap", hi}};
    reports.push_back(std::move(oracle));
  }
  const RunHeader header{"scan-s6", manifold_label(*m), cfg.seed, cfg.h, cfg.tol};
  return emit(cfg, header, reports, out);
}

std::string csv_path_for(const std::string& out) {
  const auto slash = out.find_last_of('/');
  const auto dot = out.find_last_of('.');
  if (dot != std::string::npos && (slash == std::string::npos || dot > slash)) return out.substr(0, dot) + ".csv";
  return out + ".csv";
}

int run_flow_command(const RunConfig& cfg, std::ostream& out) {
  if (cfg.manifold != "flat_torus") throw ParameterError("flow runs on flat_torus only");
  if (cfg.n && *cfg.n != 2) throw ParameterError("flow runs in dimension 2 only");
  const int grid = cfg.grid.value_or(32);
  if (grid < 4 || (grid & (grid - 1)) != 0) throw ParameterError("--grid must be a power of two >= 4 for flow");
  if (cfg.steps < 0) throw ParameterError("--steps must be non-negative");
  if (cfg.tau < 0.0) throw ParameterError("--tau must be positive");
  const ManifoldPtr m = make_manifold(cfg, "flat_torus", 2);
  const AlmostComplexField init = make_conjugated(m, split_seed(cfg.seed, kConjugatedStream));
  FlowConfig fc;
  fc.tau = cfg.tau;
  fc.tol = cfg.tol;
  fc.max_iter = cfg.steps;
  const FlowTrace trace = run_flow(grid_from_field(init, grid), fc);

  std::vector<double> increases, constraints;
  for (std::size_t k = 0; k < trace.records.size(); ++k) {
    constraints.push_back(trace.records[k].max_constraint);
    if (k > 0) increases.push_back(std::max(0.0, trace.records[k].energy - trace.records[k - 1].energy));
  }
  if (increases.empty()) increases.push_back(0.0);
  std::vector<ResidualReport> reports;
  reports.push_back(residual_report("flow_monotone", m->name, increases, 0.0, cfg.h, cfg.seed));
  reports.push_back(residual_report("flow_constraint", m->name, constraints, 1e-8, cfg.h, cfg.seed));
  const FlowRecord& last = trace.records.back();
  const std::vector<double> grad{last.max_grad};
  ResidualReport conv = residual_report("flow_convergence", m->name, grad, cfg.tol, cfg.h, cfg.seed);
  conv.samples = static_cast<int>(trace.records.size());
  conv.pass = trace.status == FlowStatus::converged;
  conv.status = conv.pass ? CheckStatus::passed : CheckStatus::failed;
  conv.detail = {{"iterations", static_cast<double>(last.iter)},
                 {"grid", static_cast<double>(grid)},
                 {"initial_energy", trace.records.front().energy},
                 {"final_energy", last.energy},
                 {"final_laplace_norm", trace.final_laplace_norm},
                 {"stalled", trace.status == FlowStatus::stalled ? 1.0 : 0.0}};
  reports.push_back(std::move(conv));

  if (!cfg.out.empty()) write_trace_csv(trace, csv_path_for(cfg.out));
  const RunHeader header{"flow", manifold_label(*m), cfg.seed, cfg.h, cfg.tol};
  return emit(cfg, header, reports, out);
}

int run_list(std::ostream& out) {
  for (const std::string& name : builtin_names()) {
    const ManifoldPtr m = builtin(name, {});
    out << name << " default " << manifold_label(*m) << "\n";
  }
  return 0;
}

void validate(const RunConfig& cfg) {
  if (cfg.samples < 1) throw ParameterError("--samples must be at least 1");
  if (!(cfg.h > 0.0 && cfg.h <= 1e-2)) throw ParameterError("--h must lie in (0, 1e-2]");
  if (!(cfg.tol > 0.0)) throw ParameterError("--tol must be positive");
  if (cfg.grid && *cfg.grid < 2) throw ParameterError("--grid must be at least 2");
}

}  // namespace

std::vector<std::string> verify_check_names() { return kVerifyChecks; }

int run_command(const RunConfig& cfg, std::ostream& out) {
  validate(cfg);
  if (cfg.command == "verify") return run_verify(cfg, out);
  if (cfg.command == "scan-s6") return run_scan(cfg, out);
  if (cfg.command == "flow") return run_flow_command(cfg, out);
  if (cfg.command == "list-manifolds") return run_list(out);
  throw ParameterError("unknown command '" + cfg.command + "'");
}

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Harmonic complex structure verification toolkit", "hcs"};
  app.set_help_flag("--help", "print help");
  app.require_subcommand(1, 1);
  RunConfig cfg;

  auto add_common = [&cfg](CLI::App* sub) {
    sub->set_help_flag("--help", "print help");
    sub->add_option("--manifold", cfg.manifold, "flat_torus | round_sphere | perturbed_sphere");
    sub->add_option("--n", cfg.n, "dimension");
    sub->add_option("--L", cfg.L, "torus period");
    sub->add_option("--epsilon", cfg.epsilon, "perturbed_sphere amplitude");
    sub->add_option("--samples", cfg.samples, "sample points");
    sub->add_option("--h", cfg.h, "finite-difference step");
    sub->add_option("--tol", cfg.tol, "tolerance");
    sub->add_option("--seed", cfg.seed, "root seed");
    sub->add_option("--grid", cfg.grid, "quadrature or flow grid resolution");
    sub->add_option("--out", cfg.out, "report path");
  };
  CLI::App* verify = app.add_subcommand("verify", "run identity checks");
  add_common(verify);
  verify->add_option("--suite", cfg.suite, "comma-separated check names or all");
  verify->add_option("--j-samples", cfg.j_samples, "unused by verify");
  CLI::App* scan = app.add_subcommand("scan-s6", "S6 curvature obstruction scan");
  add_common(scan);
  scan->add_option("--j-samples", cfg.j_samples, "pointwise J samples");
  CLI::App* flow = app.add_subcommand("flow", "constrained Dirichlet flow on the 2-torus");
  add_common(flow);
  flow->add_option("--steps", cfg.steps, "maximum iterations");
  flow->add_option("--tau", cfg.tau, "initial step size (0: 0.2 spacing^2)");
  app.add_subcommand("list-manifolds", "print built-in manifolds");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "hcs: error: " << e.what() << "\n";
    return 2;
  }
  cfg.command = app.get_subcommands().front()->get_name();
  try {
    return run_command(cfg, out);
  } catch (const std::exception& e) {
    std::string msg = e.what();
    std::replace(msg.begin(), msg.end(), '\n', ' ');
    err << "hcs: error: " << msg << "\n";
    return 2;
  }
}

}  // namespace hcs
