#include "hcs/flow.hpp"

#include "hcs/errors.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace hcs {

namespace {

int wrap(int i, int n) { return ((i % n) + n) % n; }

// Projected gradient norm per node.
double max_projected(const GridField& f, const GridField& lap) {
  double worst = 0.0;
  for (std::size_t p = 0; p < f.values.size(); ++p)
    worst = std::max(worst, tangent_projection(f.values[p], lap.values[p]).norm());
  return worst;
}

double max_norm(const GridField& f) {
  double worst = 0.0;
  for (const Matrix2& m : f.values) worst = std::max(worst, m.norm());
  return worst;
}

}  // namespace

GridField::GridField(int n, double l) : N(n), L(l) {
  if (n < 2) throw ParameterError("grid resolution must be at least 2");
  if (!(l > 0.0)) throw ParameterError("grid period must be positive");
  values.assign(static_cast<std::size_t>(n) * n, Matrix2::Zero());
}

std::size_t GridField::index(int i, int j) const {
  return static_cast<std::size_t>(wrap(i, N)) * N + wrap(j, N);
}

GridField grid_from_function(int n, double l, const std::function<Matrix2(double, double)>& f) {
  GridField g(n, l);
  const double s = g.spacing();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) g.at(i, j) = f(i * s, j * s);
  return g;
}

GridField grid_from_field(const AlmostComplexField& j, int n) {
  const ManifoldChart& m = j.base();
  if (m.dim != 2 || !m.quadrature) throw UnsupportedError("flow grids need the 2-dimensional flat torus");
  return grid_from_function(n, m.quadrature->period, [&j](double x, double y) {
    Point p(2);
    p << x, y;
    return Matrix2(j.matrix_at(p));
  });
}

double dirichlet_energy(const GridField& f) {
  double acc = 0.0;
  for (int i = 0; i < f.N; ++i)
    for (int j = 0; j < f.N; ++j) {
      acc += (f.at(i + 1, j) - f.at(i - 1, j)).squaredNorm();
      acc += (f.at(i, j + 1) - f.at(i, j - 1)).squaredNorm();
    }
  // (1/2) * |diff / (2s)|^2 * s^2
  return acc / 8.0;
}

GridField discrete_laplacian(const GridField& f) {
  GridField out(f.N, f.L);
  const double scale = 1.0 / (4.0 * f.spacing() * f.spacing());
  for (int i = 0; i < f.N; ++i)
    for (int j = 0; j < f.N; ++j)
      out.at(i, j) = scale * (f.at(i + 2, j) + f.at(i - 2, j) + f.at(i, j + 2) + f.at(i, j - 2) - 4.0 * f.at(i, j));
  return out;
}

Matrix2 tangent_projection(const Matrix2& j, const Matrix2& v) { return 0.5 * (v + j * v * j); }

Matrix2 retract(const Matrix2& a) {
  const double tr = a.trace();
  const double disc = tr * tr - 4.0 * a.determinant();
  if (!(disc < 0.0)) throw NotRetractableError("retract: matrix has real eigenvalues");
  const Matrix2 m = -(a * a);
  Matrix2 y = m;
  Matrix2 z = Matrix2::Identity();
  bool converged = false;
  for (int it = 0; it < 50; ++it) {
    const Matrix2 y_next = 0.5 * (y + z.inverse());
    const Matrix2 z_next = 0.5 * (z + y.inverse());
    const double change = (y_next - y).norm() / std::max(1.0, y_next.norm());
    y = y_next;
    z = z_next;
    if (change <= 1e-13) {
      converged = true;
      break;
    }
  }
  if (!converged || !z.allFinite()) throw NotRetractableError("retract: square root iteration did not converge");
  Matrix2 j = a * z;
  // One Newton polish keeps J^2 = -I at rounding level.
  j = 0.5 * (j - j.inverse());
  return j;
}

double max_constraint_defect(const GridField& f) {
  double worst = 0.0;
  for (const Matrix2& j : f.values) worst = std::max(worst, (j * j + Matrix2::Identity()).norm());
  return worst;
}

const char* to_string(FlowStatus s) {
  switch (s) {
    case FlowStatus::running:
      return "running";
    case FlowStatus::converged:
      return "converged";
    case FlowStatus::max_iter:
      return "max_iter";
    case FlowStatus::stalled:
      return "stalled";
  }
  return "running";
}

StepResult flow_step(const GridField& f, double tau) {
  if (!(tau > 0.0)) throw ParameterError("flow step size must be positive");
  const double e0 = dirichlet_energy(f);
  const GridField lap = discrete_laplacian(f);
  StepResult out;
  for (int halving = 0; halving <= 20; ++halving, tau *= 0.5) {
    GridField cand(f.N, f.L);
    bool ok = true;
    for (std::size_t p = 0; p < f.values.size() && ok; ++p) {
      try {
        cand.values[p] = retract(f.values[p] + tau * tangent_projection(f.values[p], lap.values[p]));
      } catch (const NotRetractableError&) {
        ok = false;
      }
    }
    if (!ok) continue;
    const double e1 = dirichlet_energy(cand);
    if (e1 <= e0) {
      out.field = std::move(cand);
      out.energy = e1;
      out.tau = tau;
      return out;
    }
  }
  out.field = f;
  out.energy = e0;
  out.stalled = true;
  return out;
}

FlowTrace run_flow(const GridField& init, const FlowConfig& config) {
  if (config.tol <= 0.0) throw ParameterError("flow tolerance must be positive");
  if (config.max_iter < 0) throw ParameterError("flow max_iter must be non-negative");
  const double tau = config.tau > 0.0 ? config.tau : 0.2 * init.spacing() * init.spacing();
  FlowTrace trace;
  GridField f = init;
  FlowRecord rec;
  rec.energy = dirichlet_energy(f);
  rec.max_constraint = max_constraint_defect(f);
  GridField lap = discrete_laplacian(f);
  rec.max_grad = max_projected(f, lap);
  trace.records.push_back(rec);
  for (int iter = 1;; ++iter) {
    if (rec.max_grad <= config.tol) {
      trace.status = FlowStatus::converged;
      break;
    }
    if (iter > config.max_iter) {
      trace.status = FlowStatus::max_iter;
      break;
    }
    StepResult step = flow_step(f, tau);
    if (step.stalled) {
      trace.status = FlowStatus::stalled;
      break;
    }
    f = std::move(step.field);
    lap = discrete_laplacian(f);
    rec.iter = iter;
    rec.energy = step.energy;
    rec.max_grad = max_projected(f, lap);
    rec.max_constraint = max_constraint_defect(f);
    rec.tau = step.tau;
    trace.records.push_back(rec);
  }
  trace.final_laplace_norm = max_norm(lap);
  trace.final_field = std::move(f);
  return trace;
}

std::string trace_csv(const FlowTrace& trace) {
  std::ostringstream os;
  os << "iter,energy,max_grad,max_constraint\n" << std::setprecision(17);
  for (const FlowRecord& r : trace.records)
    os << r.iter << ',' << r.energy << ',' << r.max_grad << ',' << r.max_constraint << '\n';
  return os.str();
}

void write_trace_csv(const FlowTrace& trace, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot open trace file '" + path + "' for writing");
  out << trace_csv(trace);
  out.flush();
  if (!out) throw Error("failed writing trace file '" + path + "'");
}

}  // namespace hcs
