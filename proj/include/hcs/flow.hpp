#pragma once

#include "hcs/jstructure.hpp"

#include <Eigen/Dense>

#include <functional>
#include <string>
#include <vector>

namespace hcs {

using Matrix2 = Eigen::Matrix2d;

// N x N periodic nodes on [0, L)^2, values stored row-major by (i, j) with
// node position (i * spacing, j * spacing).
struct GridField {
  int N = 0;
  double L = 0.0;
  std::vector<Matrix2> values;

  GridField() = default;
  GridField(int n, double l);

  double spacing() const { return L / N; }
  Matrix2& at(int i, int j) { return values[index(i, j)]; }
  const Matrix2& at(int i, int j) const { return values[index(i, j)]; }

 private:
  std::size_t index(int i, int j) const;
};

GridField grid_from_function(int n, double l, const std::function<Matrix2(double, double)>& f);

// Samples a 2-dimensional almost complex field on the flat torus chart.
GridField grid_from_field(const AlmostComplexField& j, int n);

// 1/2 sum_p sum_dir |(J(p+dir) - J(p-dir)) / (2 spacing)|^2 spacing^2.
double dirichlet_energy(const GridField& f);

// Negative energy gradient divided by spacing^2: the second difference
// (J(p+2dir) - 2J(p) + J(p-2dir)) / (4 spacing^2) summed over directions.
GridField discrete_laplacian(const GridField& f);

// Projection of a matrix onto the tangent space of {J^2 = -I} at J.
Matrix2 tangent_projection(const Matrix2& j, const Matrix2& v);

// J = A (-A^2)^{-1/2}; throws NotRetractableError when A has real eigenvalues
// or the square root iteration fails.
Matrix2 retract(const Matrix2& a);

// max over nodes of |J^2 + I|_F.
double max_constraint_defect(const GridField& f);

enum class FlowStatus { running, converged, max_iter, stalled };
const char* to_string(FlowStatus s);

struct FlowRecord {
  int iter = 0;
  double energy = 0.0;
  double max_grad = 0.0;
  double max_constraint = 0.0;
  double tau = 0.0;  // accepted step, 0 for the initial record
};

struct FlowTrace {
  std::vector<FlowRecord> records;
  FlowStatus status = FlowStatus::running;
  GridField final_field;
  double final_laplace_norm = 0.0;  // max node |discrete Laplacian|_F
};

struct StepResult {
  GridField field;
  double energy = 0.0;
  double tau = 0.0;
  bool stalled = false;
};

// One projected explicit step with backtracking: tau is halved until the
// energy does not increase, at most 20 times.
StepResult flow_step(const GridField& f, double tau);

struct FlowConfig {
  double tau = 0.0;  // 0 selects 0.2 spacing^2
  double tol = 1e-4;
  int max_iter = 100000;
};

FlowTrace run_flow(const GridField& init, const FlowConfig& config = {});

// CSV with header iter,energy,max_grad,max_constraint.
std::string trace_csv(const FlowTrace& trace);
void write_trace_csv(const FlowTrace& trace, const std::string& path);

}  // namespace hcs
