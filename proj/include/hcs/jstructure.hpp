#pragma once

#include "hcs/forms.hpp"

#include <cstdint>
#include <span>

namespace hcs {

// Endomorphism field J^k_i(x) with J^2 = -I pointwise.
class AlmostComplexField {
 public:
  // Validates J^2 = -I and trace J = 0 at the probe points.
  AlmostComplexField(TangentTensorField j, std::span<const Point> probes, double tol = 1e-10);

  const TangentTensorField& field() const { return j_; }
  const ManifoldChart& base() const { return j_.base(); }
  int dim() const { return j_.dim(); }
  Matrix matrix_at(const Point& x) const { return j_(x).to_matrix(); }

 private:
  TangentTensorField j_;
};

// Chart-constant block-diagonal J0 with 2x2 blocks [[0, -1], [1, 0]].
Matrix standard_block(int n);
AlmostComplexField make_standard(ManifoldPtr m);

struct ConjugationOptions {
  double epsilon = 0.1;
  int terms = 3;
  int max_frequency = 1;
};

// J(x) = P(x) J0 P(x)^{-1} with P = I + epsilon Q(x) and Q a seeded
// trigonometric matrix field. If P is close to singular on a probe set the
// construction retries with epsilon halved, up to three times.
AlmostComplexField make_conjugated(ManifoldPtr m, std::uint64_t seed,
                                   const ConjugationOptions& opts = {});

// Chart-constant field with the given pointwise value (J^2 = -I required).
AlmostComplexField make_pointwise(ManifoldPtr m, const Matrix& value);

// Random J with J^2 = -I: Q J0 Q^T for a seeded orthogonal Q when
// `orthogonal`, else P J0 P^{-1} with P = I + spread * Gaussian.
Matrix random_complex_matrix(int n, std::uint64_t seed, bool orthogonal, double spread = 0.5);

// N(J)(d_i, d_j) = [J d_i, d_j] + [d_i, J d_j] + J [J d_i, J d_j] - J [d_i, d_j],
// index order [k][i][j].
Tensor nijenhuis(const AlmostComplexField& j, const Point& x, double h = kDefaultStep);

// max_{i,j} |dJ(d_i, d_j) - dJ(J d_i, J d_j) - N(J)(d_i, d_j)|_g.
double integrability_defect(const AlmostComplexField& j, const Point& x, double h = kDefaultStep);

struct HarmonicResiduals {
  double sym_defect = 0.0;    // |antisymmetric part of (X, Y) -> (nabla_X J) Y|
  double trace_defect = 0.0;  // |sum_i (nabla_{e_i} J) e_i|
  double laplace_norm = 0.0;  // |Delta J|
};
HarmonicResiduals harmonic_residuals(const AlmostComplexField& j, const Point& x,
                                     double h = kDefaultStep);

struct DefectSummary {
  double hermitian = 0.0;
  double nearly_kaehler = 0.0;
  double kaehler = 0.0;
  double integrable = 0.0;
  double harmonic = 0.0;
  int samples = 0;
};

struct PointDefects {
  double hermitian = 0.0;       // |g(J., J.) - g|
  double nearly_kaehler = 0.0;  // |(nabla_i J) d_j + (nabla_j J) d_i|
  double kaehler = 0.0;         // |nabla J|
  double integrable = 0.0;      // |N(J)|
  double harmonic = 0.0;        // |Delta J|
  double sym_defect = 0.0;      // |antisymmetric part of nabla J|
};
PointDefects point_defects(const AlmostComplexField& j, const Point& x, double h = kDefaultStep);

DefectSummary structure_defects(const AlmostComplexField& j, std::span<const Point> points,
                                double h = kDefaultStep);

// Pointwise hermitian defect |J^T g J - g| in the metric norm.
double hermitian_defect(const Matrix& j, const Matrix& g);

// e(J) = 1/2 <J e_i, J e_i>.
double energy_density(const AlmostComplexField& j, const Point& x);
double energy_density(const Matrix& j, const Matrix& g);

}  // namespace hcs
