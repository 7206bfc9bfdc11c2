#pragma once

#include "hcs/tensor.hpp"

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace hcs {

inline constexpr double kDefaultStep = 1e-4;

// Periodic uniform-grid quadrature on [0, period)^n.
struct TorusQuadrature {
  double period = 0.0;
};

// A Riemannian manifold covered by a single chart.
//
// Curvature follows the sign convention
//   R(X, Y) = -nabla_X nabla_Y + nabla_Y nabla_X + nabla_[X,Y],
// stored as R^m_{ijk} with R(d_i, d_j) d_k = R^m_{ijk} d_m, index order
// [m][i][j][k]. Christoffel symbols are stored as [k][i][j] = Gamma^k_{ij}.
struct ManifoldChart {
  using MetricFn = std::function<Matrix(const Point&)>;
  using TensorFn = std::function<Tensor(const Point&)>;
  using DomainFn = std::function<bool(const Point&)>;
  using SamplerFn = std::function<Point(std::mt19937_64&)>;

  std::string name;
  int dim = 0;
  MetricFn metric;
  TensorFn exact_christoffel;  // optional
  TensorFn exact_riemann;      // optional
  DomainFn domain;
  SamplerFn sampler;  // draws interior points used by the checks
  std::optional<TorusQuadrature> quadrature;
  std::map<std::string, double> params;
};

using ManifoldPtr = std::shared_ptr<const ManifoldChart>;

struct FrameAt {
  Matrix vectors;  // column j holds the coordinate components of e_j
};

Tensor christoffel(const ManifoldChart& m, const Point& x, double h = kDefaultStep);
Tensor riemann(const ManifoldChart& m, const Point& x, double h = kDefaultStep);

// Lowers the output slot: R_{ijkm} = g_{ml} R^l_{ijk}, index order [i][j][k][m].
Tensor lower_riemann(const Tensor& r, const Matrix& g);

// Gram-Schmidt in the metric at x, of the coordinate basis when seed is
// empty and of a seeded Gaussian basis otherwise.
FrameAt orthonormal_frame(const ManifoldChart& m, const Point& x,
                          std::optional<std::uint64_t> seed = std::nullopt);
FrameAt orthonormal_frame(const Matrix& g, std::optional<std::uint64_t> seed = std::nullopt);

// sum_{i,j} <R(e_i, e_j) e_i, e_j>.
double scalar_curvature(const ManifoldChart& m, const Point& x, double h = kDefaultStep,
                        std::optional<std::uint64_t> frame_seed = std::nullopt);

// Metric at x after domain and positive-definiteness checks.
Matrix checked_metric(const ManifoldChart& m, const Point& x);

// Curvature endomorphism R(X, Y) as a matrix acting on coordinate vectors.
Matrix curvature_endomorphism(const Tensor& r, const Eigen::VectorXd& x_vec,
                              const Eigen::VectorXd& y_vec);

// Registry: flat_torus {n, L}, round_sphere {n}, perturbed_sphere {n, epsilon, seed}.
ManifoldPtr builtin(const std::string& name, const std::map<std::string, double>& params);
std::vector<std::string> builtin_names();

// Copy of m with exact connection data removed, so every derivative is
// taken by central differences of the metric.
ManifoldPtr without_exact_connection(const ManifoldChart& m);

// Draws `count` domain points with the manifold's sampler.
std::vector<Point> sample_points(const ManifoldChart& m, int count, std::uint64_t seed);

// Central-difference helpers shared by the field operators. The effective
// step is (x + h) - (x - h) as represented in floating point.
struct Stencil {
  Point plus;
  Point minus;
  double width;
};
Stencil central_stencil(const Point& x, int direction, double h);

}  // namespace hcs
