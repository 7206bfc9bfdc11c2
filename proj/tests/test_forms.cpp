#include "hcs/errors.hpp"
#include "hcs/forms.hpp"
#include "hcs/jstructure.hpp"
#include "hcs/random_fields.hpp"

#include <gtest/gtest.h>

using namespace hcs;

namespace {

ManifoldPtr torus(int n) { return builtin("flat_torus", {{"n", n}}); }
ManifoldPtr sphere(int n) { return builtin("round_sphere", {{"n", n}}); }

double max_norm(const TangentTensorField& f, std::span<const Point> pts) {
  double worst = 0.0;
  for (const Point& x : pts) {
    const Matrix g = checked_metric(f.base(), x);
    worst = std::max(worst, metric_norm(f(x), g, g.inverse()));
  }
  return worst;
}

}  // namespace

TEST(Field, CoefficientShapeIsChecked) {
  TangentTensorField bad(torus(2), 1, [](const Point&) { return Tensor(2, 3); });
  EXPECT_THROW(bad(Point::Zero(2)), ValenceError);
}

TEST(CovariantDerivative, ConstantFieldOnTorusVanishes) {
  const auto m = torus(3);
  Tensor v(3, 2);
  v({0, 1}) = 2.0;
  v({2, 0}) = -1.0;
  const auto d = covariant_derivative(constant_field(m, v));
  EXPECT_EQ(max_norm(d, sample_points(*m, 5, 1)), 0.0);
}

TEST(CovariantDerivative, KaehlerStructureOnS2IsParallel) {
  const auto m = sphere(2);
  const auto j = make_standard(m);
  EXPECT_LT(max_norm(covariant_derivative(j.field()), sample_points(*m, 50, 2)), 1e-6);
}

TEST(ExteriorD, VectorFieldIsCovariantDerivative) {
  const auto m = sphere(3);
  const auto v = random_tensor_field(m, 0, 5);
  const auto dv = exterior_d(v);
  const auto nv = covariant_derivative(v);
  for (const Point& x : sample_points(*m, 5, 3)) EXPECT_LT((dv(x) - nv(x)).max_abs(), 1e-14);
}

TEST(ExteriorD, ConstantVectorAndStandardJOnTorus) {
  const auto m = torus(4);
  const auto pts = sample_points(*m, 5, 4);
  Tensor v(4, 1);
  v({2}) = 1.0;
  EXPECT_EQ(max_norm(exterior_d(constant_field(m, v)), pts), 0.0);
  EXPECT_EQ(max_norm(exterior_d(make_standard(m).field()), pts), 0.0);
}

TEST(ExteriorD, ResultIsAntisymmetric) {
  const auto m = sphere(6);
  const auto dj = exterior_d(make_standard(m).field());
  for (const Point& x : sample_points(*m, 5, 5)) EXPECT_LT(antisymmetry_defect(dj(x)), 1e-12);
  const auto w = random_tensor_field(m, 2, 6);
  for (const Point& x : sample_points(*m, 3, 6)) EXPECT_LT(antisymmetry_defect(exterior_d(w)(x)), 1e-9);
}

TEST(ExteriorD, TopDegreeIsRejected) {
  const auto m = torus(2);
  EXPECT_THROW(exterior_d(random_tensor_field(m, 2, 1)), ValenceError);
  EXPECT_THROW(codifferential(random_tensor_field(m, 0, 1)), ValenceError);
}

TEST(Codifferential, KaehlerCases) {
  const auto t = torus(2);
  EXPECT_EQ(max_norm(codifferential(make_standard(t).field()), sample_points(*t, 5, 7)), 0.0);
  const auto s = sphere(2);
  EXPECT_LT(max_norm(codifferential(make_standard(s).field()), sample_points(*s, 50, 7)), 1e-6);
}

TEST(Codifferential, FrameSumAgreesWithMetricTrace) {
  const auto m = sphere(6);
  const auto j = make_standard(m);
  for (const Point& x : sample_points(*m, 50, 8)) {
    const FrameAt frame = orthonormal_frame(*m, x, 3);
    const Tensor a = codifferential(j.field())(x);
    const Tensor b = frame_sum::codifferential(j.field(), x, frame);
    EXPECT_LT((a - b).max_abs(), 1e-9 * std::max(1.0, a.max_abs()));
  }
}

TEST(HodgeLaplace, KaehlerCasesVanish) {
  const auto t = torus(2);
  EXPECT_EQ(max_norm(hodge_laplace(make_standard(t).field()), sample_points(*t, 5, 9)), 0.0);
  const auto s = sphere(2);
  EXPECT_LT(max_norm(hodge_laplace(make_standard(s).field()), sample_points(*s, 50, 9)), 1e-5);
}

TEST(HodgeLaplace, StandardStructureOnS6IsNotHarmonic) {
  const auto m = sphere(6);
  EXPECT_GT(max_norm(hodge_laplace(make_standard(m).field()), sample_points(*m, 10, 10)), 0.1);
}

TEST(RoughLaplacian, ConstantOnTorusAndLinearity) {
  const auto m = torus(2);
  Tensor v(2, 2);
  v({0, 0}) = 3.0;
  EXPECT_EQ(max_norm(rough_laplacian(constant_field(m, v)), sample_points(*m, 3, 11)), 0.0);

  const auto s = sphere(3);
  const auto u = random_tensor_field(s, 1, 12);
  const auto w = random_tensor_field(s, 1, 13);
  const auto lhs = rough_laplacian(linear_combination(2.0, u, -0.5, w));
  const auto ru = rough_laplacian(u), rw = rough_laplacian(w);
  for (const Point& x : sample_points(*s, 5, 14)) {
    const Tensor expect = 2.0 * ru(x) - 0.5 * rw(x);
    EXPECT_LT((lhs(x) - expect).max_abs(), 1e-5 * std::max(1.0, expect.max_abs()));
  }
}

TEST(CurvatureAction, FlatAndAntisymmetric) {
  const auto t = torus(2);
  const auto w = random_tensor_field(t, 1, 15);
  const FrameAt ft = orthonormal_frame(*t, Point::Zero(2));
  EXPECT_EQ(curvature_action(w, 0, 1, ft, Point::Zero(2)).max_abs(), 0.0);

  const auto s = sphere(4);
  const auto u = random_tensor_field(s, 2, 16);
  for (const Point& x : sample_points(*s, 3, 17)) {
    const FrameAt f = orthonormal_frame(*s, x);
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) {
        const Tensor sum = curvature_action(u, i, j, f, x) + curvature_action(u, j, i, f, x);
        EXPECT_LT(sum.max_abs(), 1e-10);
      }
  }
}

TEST(CurvatureAction, VectorFieldIsEndomorphismApplied) {
  const auto s = sphere(3);
  const auto v = random_tensor_field(s, 0, 18);
  for (const Point& x : sample_points(*s, 3, 19)) {
    const Tensor r = riemann(*s, x);
    Eigen::VectorXd a = Eigen::VectorXd::Unit(3, 0), b = Eigen::VectorXd::Unit(3, 2);
    const Tensor got = curvature_action(v, a, b, x);
    Eigen::VectorXd vx(3);
    for (int k = 0; k < 3; ++k) vx[k] = v(x)({k});
    const Eigen::VectorXd expect = curvature_endomorphism(r, a, b) * vx;
    for (int k = 0; k < 3; ++k) EXPECT_NEAR(got({k}), expect[k], 1e-12);
  }
}

TEST(WeitzenboeckTerm, FlatTorusVanishes) {
  const auto m = torus(4);
  EXPECT_EQ(max_norm(weitzenboeck_term(random_tensor_field(m, 2, 20)), sample_points(*m, 3, 21)), 0.0);
}

TEST(WeitzenboeckTerm, EndomorphismFormula) {
  // -S(X) = sum_i R(e_i, X) A e_i - A R(e_i, X) e_i.
  const auto m = sphere(4);
  RandomFieldOptions opts;
  opts.antisymmetric = false;
  const auto a = random_tensor_field(m, 1, 22, opts);
  const auto s = weitzenboeck_term(a);
  for (const Point& x : sample_points(*m, 5, 23)) {
    const Matrix g = checked_metric(*m, x);
    const Matrix e = orthonormal_frame(g).vectors;
    const Tensor r = riemann(*m, x);
    const Matrix am = a(x).to_matrix();
    Matrix minus_s = Matrix::Zero(4, 4);  // column c = -S(d_c)
    for (int c = 0; c < 4; ++c) {
      const Eigen::VectorXd xc = Eigen::VectorXd::Unit(4, c);
      for (int i = 0; i < 4; ++i) {
        const Matrix rix = curvature_endomorphism(r, e.col(i), xc);
        minus_s.col(c) += rix * am * e.col(i) - am * rix * e.col(i);
      }
    }
    const Matrix got = s(x).to_matrix();
    EXPECT_LT((got + minus_s).cwiseAbs().maxCoeff(), 1e-9 * std::max(1.0, got.cwiseAbs().maxCoeff()));
  }
}

TEST(WeitzenboeckTerm, FrameInvariance) {
  const auto m = builtin("perturbed_sphere", {{"n", 4}, {"epsilon", 0.1}, {"seed", 2}});
  const auto w = random_tensor_field(m, 2, 24);
  for (const Point& x : sample_points(*m, 3, 25)) {
    const Tensor a = frame_sum::weitzenboeck_term(w, x, orthonormal_frame(*m, x, 1));
    const Tensor b = frame_sum::weitzenboeck_term(w, x, orthonormal_frame(*m, x, 2));
    EXPECT_LT((a - b).max_abs(), 1e-9 * std::max(1.0, a.max_abs()));
    EXPECT_LT((a - weitzenboeck_term(w)(x)).max_abs(), 1e-9 * std::max(1.0, a.max_abs()));
  }
}

TEST(Inner, HermitianStructureHasNormDimension) {
  const auto m = sphere(4);
  const auto j = make_standard(m);
  for (const Point& x : sample_points(*m, 5, 26)) {
    EXPECT_NEAR(inner(j.field(), j.field(), x), 4.0, 1e-12);
    EXPECT_NEAR(frame_sum::inner(j.field(), j.field(), x, orthonormal_frame(*m, x, 7)), 4.0, 1e-12);
  }
}

TEST(Inner, PositiveDefinite) {
  const auto m = sphere(3);
  const auto w = random_tensor_field(m, 2, 27);
  for (const Point& x : sample_points(*m, 5, 28)) EXPECT_GT(inner(w, w, x), 0.0);
  const auto zero = constant_field(m, Tensor(3, 3));
  EXPECT_EQ(pointwise_norm(zero, Point::Zero(3)), 0.0);
}

TEST(DSquared, FlatTorusVanishes) {
  const auto m = torus(3);
  EXPECT_LT(max_norm(d_squared_defect(random_tensor_field(m, 1, 29)), sample_points(*m, 5, 30)), 1e-5);
}

TEST(DSquared, SphereEqualsCurvatureAction) {
  // dd V (X, Y) = -R(X, Y) V.
  const auto m = sphere(2);
  const auto v = random_tensor_field(m, 0, 31);
  const auto dd = d_squared_defect(v);
  double worst_gap = 0.0, largest = 0.0;
  for (const Point& x : sample_points(*m, 10, 32)) {
    const Tensor got = dd(x);
    const Tensor r = riemann(*m, x);
    Eigen::VectorXd vx(2);
    for (int k = 0; k < 2; ++k) vx[k] = v(x)({k});
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b) {
        const Eigen::VectorXd expect =
            -curvature_endomorphism(r, Eigen::VectorXd::Unit(2, a), Eigen::VectorXd::Unit(2, b)) * vx;
        for (int k = 0; k < 2; ++k) worst_gap = std::max(worst_gap, std::abs(got({k, a, b}) - expect[k]));
      }
    largest = std::max(largest, pointwise_norm(dd, x));
  }
  EXPECT_LT(worst_gap, 1e-5);
  EXPECT_GT(largest, 1e-3);
  EXPECT_THROW(d_squared_defect(random_tensor_field(m, 1, 33)), ValenceError);
}
