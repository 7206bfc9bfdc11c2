#include "hcs/cli.hpp"
#include "hcs/errors.hpp"
#include "hcs/flow.hpp"
#include "hcs/identities.hpp"
#include "hcs/random_fields.hpp"

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

namespace py = pybind11;
using namespace hcs;

namespace {

using Params = std::map<std::string, double>;

py::dict to_dict(const ResidualReport& r) {
  py::dict d;
  d["name"] = r.name;
  d["samples"] = r.samples;
  d["max_residual"] = r.max_residual;
  d["mean_residual"] = r.mean_residual;
  d["tolerance"] = r.tolerance;
  d["pass"] = r.pass;
  d["status"] = to_string(r.status);
  py::dict detail;
  for (const auto& [k, v] : r.detail) detail[py::str(k)] = v;
  d["detail"] = detail;
  return d;
}

CheckOptions options(double h, double tol, std::uint64_t seed) {
  CheckOptions o;
  o.h = h;
  o.tol = tol;
  o.seed = seed;
  return o;
}

ManifoldPtr chart(const std::string& name, const Params& params, bool exact) {
  ManifoldPtr m = builtin(name, params);
  return exact ? m : without_exact_connection(*m);
}

py::tuple run(const std::vector<std::string>& args) {
  std::vector<std::string> full{"hcs"};
  full.insert(full.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& a : full) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli_main(static_cast<int>(argv.size()), argv.data(), out, err);
  return py::make_tuple(code, out.str(), err.str());
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Curvature identities for almost complex structures";

  py::register_exception<Error>(m, "HcsError", PyExc_ValueError);

  m.def("builtin_names", &builtin_names);
  m.def("verify_check_names", &verify_check_names);
  m.def("run", &run, py::arg("args"), "Runs the command-line tool in-process; returns (code, stdout, stderr).");

  m.def(
      "metric",
      [](const std::string& name, const Params& params, const Point& x) {
        return checked_metric(*builtin(name, params), x);
      },
      py::arg("manifold"), py::arg("params"), py::arg("x"));
  m.def(
      "scalar_curvature",
      [](const std::string& name, const Params& params, const Point& x, double h, bool exact) {
        return scalar_curvature(*chart(name, params, exact), x, h);
      },
      py::arg("manifold"), py::arg("params"), py::arg("x"), py::arg("h") = kDefaultStep, py::arg("exact") = true);
  m.def(
      "sample_points",
      [](const std::string& name, const Params& params, int count, std::uint64_t seed) {
        return sample_points(*builtin(name, params), count, seed);
      },
      py::arg("manifold"), py::arg("params"), py::arg("count"), py::arg("seed"));

  m.def(
      "check_weitzenboeck",
      [](const std::string& name, const Params& params, int degree, int samples, std::uint64_t seed, double h,
         double tol, bool exact) {
        const ManifoldPtr c = chart(name, params, exact);
        const auto pts = sample_points(*c, samples, split_seed(seed, 1));
        return to_dict(check_weitzenboeck(random_tensor_field(c, degree, split_seed(seed, 10 + 2 * degree)), pts,
                                          options(h, tol, seed)));
      },
      py::arg("manifold"), py::arg("params"), py::arg("degree"), py::arg("samples") = 20, py::arg("seed") = 0,
      py::arg("h") = kDefaultStep, py::arg("tol") = 1e-4, py::arg("exact") = true);
  m.def(
      "check_bochner",
      [](const std::string& name, const Params& params, bool standard, int samples, std::uint64_t seed, double h,
         double tol) {
        const ManifoldPtr c = builtin(name, params);
        const auto pts = sample_points(*c, samples, split_seed(seed, 1));
        const auto j = standard ? make_standard(c) : make_conjugated(c, split_seed(seed, 2));
        py::list out;
        for (const auto& r : check_bochner(j, pts, options(h, tol, seed))) out.append(to_dict(r));
        return out;
      },
      py::arg("manifold"), py::arg("params"), py::arg("standard") = false, py::arg("samples") = 20,
      py::arg("seed") = 0, py::arg("h") = kDefaultStep, py::arg("tol") = 1e-4);
  m.def(
      "contraction_terms",
      [](const std::string& name, const Params& params, const Point& x, const Matrix& j) {
        const ManifoldPtr c = builtin(name, params);
        const Matrix g = checked_metric(*c, x);
        return contraction_terms(riemann(*c, x), g, orthonormal_frame(g).vectors, j);
      },
      py::arg("manifold"), py::arg("params"), py::arg("x"), py::arg("j"),
      "(term2, term3) for a coordinate matrix J at x.");

  m.def(
      "flow",
      [](int grid, std::uint64_t seed, double tau, double tol, int max_iter) {
        const ManifoldPtr t = builtin("flat_torus", {{"n", 2}});
        FlowConfig cfg;
        cfg.tau = tau;
        cfg.tol = tol;
        cfg.max_iter = max_iter;
        const FlowTrace tr = run_flow(grid_from_field(make_conjugated(t, split_seed(seed, 2)), grid), cfg);
        py::dict d;
        d["status"] = to_string(tr.status);
        std::vector<int> iters;
        std::vector<double> energy, grad, constraint;
        for (const FlowRecord& r : tr.records) {
          iters.push_back(r.iter);
          energy.push_back(r.energy);
          grad.push_back(r.max_grad);
          constraint.push_back(r.max_constraint);
        }
        d["iter"] = iters;
        d["energy"] = energy;
        d["max_grad"] = grad;
        d["max_constraint"] = constraint;
        return d;
      },
      py::arg("grid") = 32, py::arg("seed") = 0, py::arg("tau") = 0.0, py::arg("tol") = 1e-4,
      py::arg("max_iter") = 100000);
}
