#pragma once

#include "hcs/jstructure.hpp"
#include "hcs/report.hpp"

#include <functional>
#include <optional>

namespace hcs {

struct CheckOptions {
  double h = kDefaultStep;
  double tol = 1e-5;
  std::uint64_t seed = 0;
  std::optional<std::uint64_t> frame_seed;  // coordinate Gram-Schmidt frame when empty
};

// Function Laplacian g^{ij}(d_i d_j f - Gamma^k_{ij} d_k f): the metric trace
// of the Hessian, with nested central differences.
double function_laplacian(const ManifoldChart& m, const std::function<double(const Point&)>& f,
                          const Point& x, double h = kDefaultStep);

// |Delta w + nabla^2 w - S| at each point, divided by the largest of 1 and
// the three term norms.
ResidualReport check_weitzenboeck(const BundleForm& w, std::span<const Point> points,
                                  const CheckOptions& opts = {});

struct CurvatureTerms {
  double term2 = 0.0;             // sum <R(e_i, e_j) J e_i, J e_j>
  double term3 = 0.0;             // sum <J R(e_i, e_j) e_i, J e_j>
  double grad_norm_sq = 0.0;      // |nabla J|^2
  double energy_laplacian = 0.0;  // Delta e(J), function Laplacian
};

CurvatureTerms curvature_terms(const AlmostComplexField& j, const Point& x,
                               const CheckOptions& opts = {});

// Curvature contractions of a pointwise J against curvature r in the frame e.
std::pair<double, double> contraction_terms(const Tensor& r, const Matrix& g, const Matrix& frame,
                                            const Matrix& j);

// Residual of Delta e(J) + <Delta J, J> = |nabla J|^2 - term2 + term3 at each
// point. When |Delta J| <= tol everywhere a second report checks the
// harmonic specialization with the <Delta J, J> term dropped.
std::vector<ResidualReport> check_bochner(const AlmostComplexField& j, std::span<const Point> points,
                                          const CheckOptions& opts = {});

// Hermitian harmonic J: residual of scal + |nabla J|^2 - term2 and the bound
// scal <= term2. Reports hypothesis_not_met when J is not hermitian and
// harmonic on the sample.
ResidualReport check_scal_bound(const AlmostComplexField& j, std::span<const Point> points,
                                const CheckOptions& opts = {});

// Flat torus only: integral of |nabla J|^2 - term2 + term3 by periodic grid
// quadrature against the sampled harmonic defect max |Delta J|. Passes when
// both vanish (<= tol) or neither does.
ResidualReport check_integral_criterion(const AlmostComplexField& j, int grid,
                                        std::span<const Point> points, const CheckOptions& opts = {});

using JSampler = std::function<AlmostComplexField(ManifoldPtr, std::uint64_t seed)>;

// Chart-constant J with J^2 = -I. Seed 0 gives J0; otherwise seed % 3 selects
// an orthogonal conjugate of J0 (0), a mild general conjugate (1) or a strong
// one (2).
AlmostComplexField pointwise_j_sampler(ManifoldPtr m, std::uint64_t seed);

struct ScanOptions {
  double margin = 20.0;
  double h = kDefaultStep;
  std::uint64_t seed = 0;
};

// For every (point, J) pair computes term3 - term2 and the Bochner integrand
// |nabla J|^2 - term2 + term3. Passes when the minimum gap is >= margin and
// strictly positive. Details: min_gap, min_integrand, orthogonal_samples,
// min_orthogonal_gap, max_orthogonal_gap, min_nonorthogonal_gap.
ResidualReport s6_obstruction_scan(const ManifoldPtr& m, const JSampler& sampler,
                                   std::span<const std::uint64_t> seeds,
                                   std::span<const Point> points, const ScanOptions& opts = {});

// |Trace Delta A + Delta_fn Trace A| at each point.
ResidualReport check_trace_theorem(const TangentTensorField& a, std::span<const Point> points,
                                   const CheckOptions& opts = {});

// Flat torus only: |integral of Trace Delta A| / volume by grid quadrature;
// the raw integral is in detail "integral".
ResidualReport check_integral_trace(const TangentTensorField& a, int grid,
                                    const CheckOptions& opts = {});

// |dJ(X,Y) - dJ(JX,JY) - N(J)(X,Y)| at each point.
ResidualReport check_integrability(const AlmostComplexField& j, std::span<const Point> points,
                                   const CheckOptions& opts = {});

// max(|nabla J|, |dJ|, |delta J|, |Delta J|) at each point.
ResidualReport check_kaehler_harmonic(const AlmostComplexField& j, std::span<const Point> points,
                                      const CheckOptions& opts = {});

// |Trace Delta J| at each point.
ResidualReport check_trace_delta_j(const AlmostComplexField& j, std::span<const Point> points,
                                   const CheckOptions& opts = {});

// Torsion symmetry, metric compatibility, curvature symmetries and first
// Bianchi identity, worst violation per point.
ResidualReport check_curvature_symmetries(const ManifoldChart& m, std::span<const Point> points,
                                          const CheckOptions& opts = {});

// max(0, n/2 - e(J)) at each point; detail min_excess over hermitian points.
ResidualReport check_energy_bound(const AlmostComplexField& j, std::span<const Point> points,
                                  const CheckOptions& opts = {});

// Spread of frame-summed quantities (scalar curvature, curvature terms,
// inner products, codifferential, Weitzenboeck term) across two frame seeds
// and against the metric-trace evaluations.
ResidualReport check_frame_independence(const AlmostComplexField& j, const BundleForm& w,
                                        std::span<const Point> points, const CheckOptions& opts = {});

}  // namespace hcs
