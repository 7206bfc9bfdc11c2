#include "hcs/errors.hpp"
#include "hcs/identities.hpp"
#include "hcs/random_fields.hpp"

#include <gtest/gtest.h>

using namespace hcs;

namespace {

ManifoldPtr torus(int n) { return builtin("flat_torus", {{"n", n}}); }
ManifoldPtr sphere(int n) { return builtin("round_sphere", {{"n", n}}); }

// Exhaustive orthonormal-frame index sums with R_ijkm = d_ik d_jm - d_jk d_im,
// where <R(e_i, e_j) e_k, e_m> = R_ijkm:
//   term2 = sum_{i,j} <R(e_i, e_j) J e_i, J e_j>,
//   term3 = sum_{i,j} <J R(e_i, e_j) e_i, J e_j>.
std::pair<double, double> constant_curvature_oracle(const Matrix& j) {
  const int n = static_cast<int>(j.rows());
  auto r = [](int i, int jj, int k, int m) { return double((i == k) * (jj == m)) - double((jj == k) * (i == m)); };
  double t2 = 0.0, t3 = 0.0;
  for (int i = 0; i < n; ++i)
    for (int jj = 0; jj < n; ++jj)
      for (int k = 0; k < n; ++k)
        for (int m = 0; m < n; ++m) {
          const double rv = r(i, jj, k, m);
          if (rv == 0.0) continue;
          // J e_i = sum_k J_ki e_k; <R(e_i,e_j) J e_i, J e_j> = sum_{k,m} J_ki J_mj R_ijkm.
          t2 += j(k, i) * j(m, jj) * rv;
          // R(e_i,e_j) e_i = sum_k R_ijik e_k; <J e_k, J e_j> = sum_m J_mk J_mj.
          if (k == i)
            for (int q = 0; q < n; ++q) t3 += rv * j(q, m) * j(q, jj);
        }
  return {t2, t3};
}

std::vector<Point> origin(int n) { return {Point::Zero(n)}; }

}  // namespace

TEST(FunctionLaplacian, Oracles) {
  const auto t = torus(2);
  auto f = [](const Point& x) { return std::sin(x[0]) * std::cos(2.0 * x[1]); };
  const Point x = Point::Constant(2, 0.4);
  EXPECT_NEAR(function_laplacian(*t, f, x), -5.0 * f(x), 1e-6);
  // Height function on the unit sphere: Delta_fn y = -n y for y = (|x|^2 - 1)/(|x|^2 + 1).
  const auto s = sphere(3);
  auto h = [](const Point& p) { return (p.squaredNorm() - 1.0) / (p.squaredNorm() + 1.0); };
  for (const Point& p : sample_points(*s, 5, 1)) EXPECT_NEAR(function_laplacian(*s, h, p), -3.0 * h(p), 1e-5);
}

TEST(Weitzenboeck, FlatTorusRandomForms) {
  const auto m = torus(4);
  const auto pts = sample_points(*m, 20, 2);
  for (int p = 0; p <= 3; ++p) EXPECT_TRUE(check_weitzenboeck(random_tensor_field(m, p, 30 + p), pts).pass);
}

TEST(Weitzenboeck, SphereEndomorphismAndStandardStructure) {
  const auto s2 = sphere(2);
  RandomFieldOptions opts;
  opts.antisymmetric = false;
  const auto r2 = check_weitzenboeck(random_tensor_field(s2, 1, 4, opts), sample_points(*s2, 20, 3));
  EXPECT_LE(r2.max_residual, 1e-5);
  const auto s6 = sphere(6);
  const auto r6 = check_weitzenboeck(make_standard(s6).field(), sample_points(*s6, 10, 3));
  EXPECT_LE(r6.max_residual, 1e-5);
  EXPECT_EQ(r6.detail_value("degree"), 1.0);
}

TEST(ContractionTerms, FlatTorusVanishes) {
  const auto m = torus(4);
  const auto t = curvature_terms(make_conjugated(m, 3), Point::Constant(4, 1.0));
  EXPECT_EQ(t.term2, 0.0);
  EXPECT_EQ(t.term3, 0.0);
}

TEST(ContractionTerms, ConstantCurvatureOracleOnS6) {
  const auto m = sphere(6);
  const Matrix id = Matrix::Identity(6, 6);
  for (std::uint64_t seed = 0; seed < 12; ++seed) {
    const Matrix j = seed == 0 ? standard_block(6) : random_complex_matrix(6, seed, seed % 2 == 0, 0.6);
    const auto [o2, o3] = constant_curvature_oracle(j);
    const double norm_sq = j.squaredNorm();
    EXPECT_NEAR(o2, 6.0, 1e-9);
    EXPECT_NEAR(o3, 5.0 * norm_sq, 1e-9);
    for (const Point& x : sample_points(*m, 3, seed + 10)) {
      const Matrix g = m->metric(x);
      const Matrix e = orthonormal_frame(g).vectors;
      // Pointwise J expressed in the frame is e J e^{-1} in coordinates.
      const Matrix jc = e * j * e.inverse();
      const auto [t2, t3] = contraction_terms(riemann(*m, x), g, e, jc);
      EXPECT_NEAR(t2, o2, 1e-9);
      EXPECT_NEAR(t3, o3, 1e-9 * std::max(1.0, o3));
    }
    if (hermitian_defect(j, id) < 1e-9) {
      EXPECT_NEAR(o3, 30.0, 1e-9);
      EXPECT_NEAR(o3 - o2, 24.0, 1e-9);
    }
  }
}

TEST(ContractionTerms, TermTwoIsDimensionOnSpheres) {
  for (int n : {2, 4}) {
    const auto m = sphere(n);
    const auto j = make_conjugated(m, 5);
    for (const Point& x : sample_points(*m, 3, 6)) EXPECT_NEAR(curvature_terms(j, x).term2, n, 1e-9);
  }
}

TEST(ContractionTerms, FrameSeedIndependence) {
  const auto m = builtin("perturbed_sphere", {{"n", 6}, {"epsilon", 0.1}, {"seed", 1}});
  const auto j = make_conjugated(m, 7);
  const Point x = sample_points(*m, 1, 7).front();
  CheckOptions a, b;
  a.frame_seed = 1;
  b.frame_seed = 2;
  const auto ta = curvature_terms(j, x, a), tb = curvature_terms(j, x, b);
  EXPECT_NEAR(ta.term2, tb.term2, 1e-9 * std::abs(ta.term2));
  EXPECT_NEAR(ta.term3, tb.term3, 1e-9 * std::abs(ta.term3));
}

TEST(Bochner, FlatTorus) {
  const auto m = torus(2);
  const auto r0 = check_bochner(make_standard(m), sample_points(*m, 10, 8));
  ASSERT_EQ(r0.size(), 2u);
  EXPECT_EQ(r0[0].max_residual, 0.0);
  EXPECT_EQ(r0[1].name, "bochner_harmonic");
  const auto rc = check_bochner(make_conjugated(m, 9), sample_points(*m, 30, 8));
  EXPECT_TRUE(rc[0].pass);
  EXPECT_EQ(rc[0].detail_value("max_curvature_gap"), 0.0);
  EXPECT_GT(rc[0].detail_value("max_grad_norm_sq"), 1e-3);
}

TEST(Bochner, StandardOnS2IsHarmonicSpecialization) {
  const auto m = sphere(2);
  const auto pts = sample_points(*m, 20, 9);
  const auto r = check_bochner(make_standard(m), pts);
  ASSERT_EQ(r.size(), 2u);
  EXPECT_LE(r[1].max_residual, 1e-5);
  for (const Point& x : pts) {
    const auto t = curvature_terms(make_standard(m), x);
    EXPECT_NEAR(t.term2, 2.0, 1e-9);
    EXPECT_NEAR(t.term3, 2.0, 1e-9);
    EXPECT_LT(t.grad_norm_sq, 1e-10);
    EXPECT_LT(std::abs(t.energy_laplacian), 1e-5);
  }
}

TEST(Bochner, ConjugatedOnSpheres) {
  for (int n : {2, 4}) {
    const auto m = sphere(n);
    const auto r = check_bochner(make_conjugated(m, 10), sample_points(*m, 15, 10));
    EXPECT_LE(r[0].max_residual, 1e-4) << n;
  }
}

TEST(ScalBound, EqualityCases) {
  const auto s2 = sphere(2);
  const auto r = check_scal_bound(make_standard(s2), sample_points(*s2, 10, 11));
  EXPECT_EQ(r.status, CheckStatus::passed);
  EXPECT_NEAR(r.detail_value("max_scalar_curvature"), 2.0, 1e-6);
  EXPECT_NEAR(r.detail_value("max_term2"), 2.0, 1e-9);
  const auto t = torus(2);
  const auto rt = check_scal_bound(make_standard(t), sample_points(*t, 5, 11));
  EXPECT_EQ(rt.status, CheckStatus::passed);
  EXPECT_EQ(rt.max_residual, 0.0);
}

TEST(ScalBound, HypothesisNotMet) {
  const auto t = torus(2);
  const auto nh = check_scal_bound(make_conjugated(t, 12), sample_points(*t, 5, 12));
  EXPECT_EQ(nh.status, CheckStatus::hypothesis_not_met);
  EXPECT_TRUE(nh.pass);
  const auto s6 = sphere(6);
  const auto s = check_scal_bound(make_standard(s6), sample_points(*s6, 3, 12));
  EXPECT_EQ(s.status, CheckStatus::hypothesis_not_met);
  EXPECT_GT(s.detail_value("harmonic_defect"), 1e-2);
}

TEST(IntegralCriterion, KaehlerAndConjugated) {
  const auto m = torus(2);
  CheckOptions opts;
  opts.tol = 1e-8;
  const auto pts = sample_points(*m, 20, 13);
  const auto k = check_integral_criterion(make_standard(m), 32, pts, opts);
  EXPECT_TRUE(k.pass);
  EXPECT_LE(std::abs(k.detail_value("integral")), 1e-8);
  EXPECT_LE(k.detail_value("harmonic_defect"), 1e-8);
  const auto jc = make_conjugated(m, 14);
  const auto c = check_integral_criterion(jc, 32, pts, opts);
  EXPECT_TRUE(c.pass);
  EXPECT_GT(c.detail_value("integral"), 1e-3);
  EXPECT_GT(c.detail_value("harmonic_defect"), 1e-2);
  const auto c64 = check_integral_criterion(jc, 64, pts, opts);
  EXPECT_LE(std::abs(c64.detail_value("integral") - c.detail_value("integral")), 1e-6);
  EXPECT_THROW(check_integral_criterion(make_standard(sphere(2)), 8, pts, opts), UnsupportedError);
}

TEST(S6Scan, OrthogonalGapMatchesOracle) {
  const auto m = sphere(6);
  std::vector<std::uint64_t> seeds;
  for (std::uint64_t s = 0; s < 12; ++s) seeds.push_back(s);
  const auto r = s6_obstruction_scan(m, pointwise_j_sampler, seeds, sample_points(*m, 30, 14));
  EXPECT_TRUE(r.pass);
  EXPECT_NEAR(r.detail_value("min_orthogonal_gap"), 24.0, 1e-9);
  EXPECT_NEAR(r.detail_value("max_orthogonal_gap"), 24.0, 1e-9);
  EXPECT_GT(r.detail_value("min_nonorthogonal_gap"), 24.0);
  EXPECT_NEAR(r.detail_value("min_gap"), 24.0, 1e-9);
}

TEST(S6Scan, MarginAndErrors) {
  const auto m = sphere(6);
  const std::vector<std::uint64_t> seeds{0};
  ScanOptions strict;
  strict.margin = 25.0;
  const auto r = s6_obstruction_scan(m, pointwise_j_sampler, seeds, origin(6), strict);
  EXPECT_FALSE(r.pass);
  EXPECT_NEAR(r.max_residual, 1.0, 1e-9);
  EXPECT_THROW(s6_obstruction_scan(sphere(4), pointwise_j_sampler, seeds, origin(4)), ParameterError);
  EXPECT_THROW(s6_obstruction_scan(m, pointwise_j_sampler, {}, origin(6)), ParameterError);
}

TEST(S6Scan, SmallPerturbationKeepsPositiveGap) {
  const auto m = builtin("perturbed_sphere", {{"n", 6}, {"epsilon", 0.05}, {"seed", 0}});
  std::vector<std::uint64_t> seeds;
  for (std::uint64_t s = 0; s < 10; ++s) seeds.push_back(s);
  ScanOptions opts;
  opts.margin = 0.0;
  const auto r = s6_obstruction_scan(m, pointwise_j_sampler, seeds, sample_points(*m, 20, 15), opts);
  EXPECT_TRUE(r.pass);
  EXPECT_GT(r.detail_value("min_gap"), 0.0);
}

TEST(TraceTheorem, RandomEndomorphisms) {
  RandomFieldOptions opts;
  opts.antisymmetric = false;
  for (const auto& m : {torus(2), sphere(2), torus(4)}) {
    const auto pts = sample_points(*m, 10, 16);
    for (std::uint64_t seed = 0; seed < 3; ++seed)
      EXPECT_LE(check_trace_theorem(random_tensor_field(m, 1, seed, opts), pts).max_residual, 1e-4);
  }
  EXPECT_THROW(check_trace_theorem(random_tensor_field(torus(2), 2, 1), origin(2)), ValenceError);
}

TEST(TraceTheorem, IntegralAndPointwise) {
  const auto m = torus(2);
  RandomFieldOptions opts;
  opts.antisymmetric = false;
  CheckOptions copts;
  copts.tol = 1e-6;
  const auto r = check_integral_trace(random_tensor_field(m, 1, 17, opts), 64, copts);
  EXPECT_LE(std::abs(r.detail_value("integral")), 1e-6);
  Tensor c(2, 2);
  c({0, 1}) = 3.0;
  const auto rc = check_integral_trace(constant_field(m, c), 8, copts);
  EXPECT_EQ(rc.detail_value("max_abs_integrand"), 0.0);
  const auto rj = check_integral_trace(make_standard(m).field(), 8, copts);
  EXPECT_EQ(rj.detail_value("max_abs_integrand"), 0.0);
  for (const auto& s : {sphere(4), torus(2)})
    EXPECT_LE(check_trace_delta_j(make_conjugated(s, 18), sample_points(*s, 10, 18)).max_residual, 1e-5);
}

TEST(CurvatureSymmetries, AllBuiltins) {
  for (const auto& m : {torus(3), sphere(4), builtin("perturbed_sphere", {{"n", 4}, {"epsilon", 0.1}})}) {
    const auto r = check_curvature_symmetries(*without_exact_connection(*m), sample_points(*m, 5, 19));
    EXPECT_TRUE(r.pass) << m->name << " " << r.max_residual;
  }
}

TEST(EnergyBound, ResidualSemantics) {
  const auto m = torus(4);
  const auto pts = sample_points(*m, 30, 20);
  const auto rs = check_energy_bound(make_standard(m), pts);
  EXPECT_EQ(rs.max_residual, 0.0);
  const auto rc = check_energy_bound(make_conjugated(m, 21), pts);
  EXPECT_TRUE(rc.pass);
  EXPECT_GT(rc.detail_value("min_excess"), 0.0);
}

TEST(FrameIndependence, PerturbedSphere) {
  const auto m = builtin("perturbed_sphere", {{"n", 4}, {"epsilon", 0.1}, {"seed", 5}});
  CheckOptions opts;
  opts.tol = 1e-9;
  const auto r = check_frame_independence(make_conjugated(m, 22), random_tensor_field(m, 2, 23),
                                          sample_points(*m, 5, 24), opts);
  EXPECT_TRUE(r.pass) << r.max_residual;
}
