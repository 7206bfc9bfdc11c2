#include "hcs/errors.hpp"
#include "hcs/flow.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <sstream>

using namespace hcs;

namespace {

const Matrix2 kJ0 = (Matrix2() << 0, -1, 1, 0).finished();
constexpr double kTwoPi = 2.0 * std::numbers::pi;

GridField constant_grid(int n, const Matrix2& j) {
  return grid_from_function(n, kTwoPi, [j](double, double) { return j; });
}

// P(x) J0 P(x)^{-1} with a smooth non-constant P.
GridField conjugated_grid(int n) {
  return grid_from_function(n, kTwoPi, [](double x, double y) {
    Matrix2 p;
    p << 1.0 + 0.3 * std::sin(x), 0.2 * std::cos(y), 0.1 * std::sin(x + y), 1.0 - 0.2 * std::cos(x);
    return Matrix2(p * kJ0 * p.inverse());
  });
}

}  // namespace

TEST(GridField, Construction) {
  EXPECT_THROW(GridField(1, 1.0), ParameterError);
  EXPECT_THROW(GridField(4, 0.0), ParameterError);
  GridField g(4, 2.0);
  EXPECT_EQ(g.spacing(), 0.5);
  g.at(-1, 5) = kJ0;
  EXPECT_EQ(g.at(3, 1), kJ0);
}

TEST(DirichletEnergy, ConstantConjugatedAndInvariance) {
  EXPECT_EQ(dirichlet_energy(constant_grid(16, kJ0)), 0.0);
  const GridField f = conjugated_grid(16);
  const double e = dirichlet_energy(f);
  EXPECT_GT(e, 0.0);
  const double t = 0.7;
  Matrix2 q;
  q << std::cos(t), -std::sin(t), std::sin(t), std::cos(t);
  GridField rotated = f;
  for (Matrix2& m : rotated.values) m = q * m * q.transpose();
  EXPECT_NEAR(dirichlet_energy(rotated), e, 1e-12 * e);
}

TEST(DirichletEnergy, LaplacianIsScaledNegativeGradient) {
  const GridField f = conjugated_grid(8);
  const GridField lap = discrete_laplacian(f);
  const double s2 = f.spacing() * f.spacing();
  const double step = 1e-6;
  for (int node : {0, 13, 40}) {
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b) {
        GridField plus = f, minus = f;
        plus.values[node](a, b) += step;
        minus.values[node](a, b) -= step;
        const double grad = (dirichlet_energy(plus) - dirichlet_energy(minus)) / (2.0 * step);
        EXPECT_NEAR(grad, -s2 * lap.values[node](a, b), 1e-6);
      }
  }
}

TEST(Retract, Examples) {
  EXPECT_LT((retract(3.5 * kJ0) - kJ0).norm(), 1e-14);
  Matrix2 a;
  a << 1, -1, 2, -1;
  EXPECT_LT((retract(a) - a).norm(), 1e-12);
  Matrix2 sym;
  sym << 0.3, 0.5, 0.5, -0.2;
  const Matrix2 j = retract(kJ0 + 0.1 * sym);
  EXPECT_LE((j * j + Matrix2::Identity()).norm(), 1e-12);
  EXPECT_THROW(retract(Matrix2::Identity()), NotRetractableError);
  EXPECT_THROW(retract(Matrix2::Zero()), NotRetractableError);
}

TEST(Retract, NearestStructureToPerturbation) {
  // The retraction commutes with scaling and is smooth near the constraint set.
  Matrix2 d;
  d << 0.01, 0.02, -0.03, 0.015;
  const Matrix2 j1 = retract(kJ0 + d);
  const Matrix2 j2 = retract(2.0 * (kJ0 + d));
  EXPECT_LT((j1 - j2).norm(), 1e-13);
  EXPECT_LT((j1 - kJ0).norm(), 0.1);
}

TEST(FlowStep, ConstantIsFixed) {
  const GridField f = constant_grid(8, kJ0);
  for (double tau : {1e-3, 1.0, 100.0}) {
    const StepResult r = flow_step(f, tau);
    EXPECT_FALSE(r.stalled);
    for (std::size_t p = 0; p < f.values.size(); ++p) EXPECT_LT((r.field.values[p] - kJ0).norm(), 1e-15);
  }
  EXPECT_THROW(flow_step(f, 0.0), ParameterError);
}

TEST(FlowStep, FirstStepDecreasesEnergyAndKeepsConstraint) {
  const GridField f = conjugated_grid(32);
  const double tau = 0.2 * f.spacing() * f.spacing();
  const StepResult r = flow_step(f, tau);
  EXPECT_FALSE(r.stalled);
  EXPECT_LT(r.energy, dirichlet_energy(f));
  EXPECT_EQ(r.tau, tau);
  EXPECT_LE(max_constraint_defect(r.field), 1e-8);
}

TEST(RunFlow, ConstantConvergesImmediately) {
  const FlowTrace t = run_flow(constant_grid(16, kJ0));
  EXPECT_EQ(t.status, FlowStatus::converged);
  ASSERT_EQ(t.records.size(), 1u);
  EXPECT_EQ(t.records[0].iter, 0);
  EXPECT_EQ(t.final_laplace_norm, 0.0);
}

TEST(RunFlow, ConjugatedInitConverges) {
  const FlowTrace t = run_flow(conjugated_grid(32));
  EXPECT_EQ(t.status, FlowStatus::converged);
  EXPECT_LE(t.records.back().max_grad, 1e-4);
  for (std::size_t k = 1; k < t.records.size(); ++k) {
    EXPECT_LE(t.records[k].energy, t.records[k - 1].energy);
    EXPECT_LE(t.records[k].max_constraint, 1e-8);
  }
  EXPECT_LT(t.records.back().energy, 1e-3 * t.records.front().energy);
}

TEST(RunFlow, MaxIterStatus) {
  FlowConfig cfg;
  cfg.max_iter = 3;
  const FlowTrace t = run_flow(conjugated_grid(16), cfg);
  EXPECT_EQ(t.status, FlowStatus::max_iter);
  EXPECT_EQ(t.records.size(), 4u);
  EXPECT_STREQ(to_string(t.status), "max_iter");
}

TEST(TraceCsv, HeaderAndPrecision) {
  FlowConfig cfg;
  cfg.max_iter = 2;
  const FlowTrace t = run_flow(conjugated_grid(8), cfg);
  const std::string csv = trace_csv(t);
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "iter,energy,max_grad,max_constraint");
  int rows = 0;
  while (std::getline(in, line)) {
    ++rows;
    std::istringstream row(line);
    std::string cell;
    std::getline(row, cell, ',');
    std::getline(row, cell, ',');
    EXPECT_EQ(std::stod(cell), t.records[rows - 1].energy);
  }
  EXPECT_EQ(rows, 3);
  EXPECT_THROW(write_trace_csv(t, "/nonexistent-dir/trace.csv"), Error);
}

TEST(RunFlow, GridDoublingIsConsistent) {
  const FlowTrace a = run_flow(conjugated_grid(32));
  const FlowTrace b = run_flow(conjugated_grid(64));
  ASSERT_EQ(a.status, FlowStatus::converged);
  ASSERT_EQ(b.status, FlowStatus::converged);
  const double ea = a.records.front().energy, eb = b.records.front().energy;
  EXPECT_NEAR(ea, eb, 0.1 * std::max(ea, eb));
  EXPECT_NEAR(a.records.back().energy, b.records.back().energy, 0.1 * std::max(ea, eb));
}
