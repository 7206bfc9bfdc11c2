#include "hcs/identities.hpp"

#include "hcs/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace hcs {

namespace {

// R(e_i, e_j) for every frame pair, plus the frame itself.
struct FrameCurvature {
  Matrix g;
  Matrix frame;
  std::vector<Matrix> endo;  // endo[i * n + j] = R(e_i, e_j)

  FrameCurvature(const Tensor& r, const Matrix& metric, const Matrix& e) : g(metric), frame(e) {
    const int n = static_cast<int>(e.cols());
    // R(e_i, e_j) = sum_{a,b} e_i^a e_j^b R(d_a, d_b); contract one slot at a time.
    std::vector<Matrix> partial(n * n, Matrix::Zero(n, n));  // [i * n + b]
    for (int i = 0; i < n; ++i)
      for (int a = 0; a < n; ++a) {
        const double w = e(a, i);
        if (w == 0.0) continue;
        for (int b = 0; b < n; ++b)
          for (int q = 0; q < n; ++q)
            for (int c = 0; c < n; ++c) partial[i * n + b](q, c) += w * r({q, a, b, c});
      }
    endo.assign(n * n, Matrix::Zero(n, n));
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int b = 0; b < n; ++b) endo[i * n + j] += e(b, j) * partial[i * n + b];
  }

  int dim() const { return static_cast<int>(frame.cols()); }

  std::pair<double, double> terms(const Matrix& j) const {
    const int n = dim();
    const Matrix je = j * frame;   // column i = J e_i
    const Matrix gje = g * je;     // column j = g J e_j
    double t2 = 0.0, t3 = 0.0;
    for (int i = 0; i < n; ++i)
      for (int l = 0; l < n; ++l) {
        const Matrix& rij = endo[i * n + l];
        t2 += (rij * je.col(i)).dot(gje.col(l));
        t3 += (j * (rij * frame.col(i))).dot(gje.col(l));
      }
    return {t2, t3};
  }

  double scalar() const {
    const int n = dim();
    double s = 0.0;
    for (int i = 0; i < n; ++i)
      for (int l = 0; l < n; ++l) s += (endo[i * n + l] * frame.col(i)).dot(g * frame.col(l));
    return s;
  }
};

double tensor_norm_at(const Tensor& t, const Matrix& g) { return metric_norm(t, g, g.inverse()); }

void add_detail(ResidualReport& r, const std::string& key, double value) { r.detail.emplace_back(key, value); }

ResidualReport custom_report(std::string name, const ManifoldChart& m, int samples, double h,
                             double max_residual, double mean_residual, double tol, bool pass,
                             std::uint64_t seed, CheckStatus status) {
  ResidualReport r;
  r.name = std::move(name);
  r.manifold = m.name;
  r.samples = samples;
  r.h = h;
  r.max_residual = max_residual;
  r.mean_residual = mean_residual;
  r.tolerance = tol;
  r.pass = pass;
  r.seed = seed;
  r.status = status;
  return r;
}

// NaN propagates.
double max_of(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::isnan(x) || std::isnan(m) ? std::nan("") : std::max(m, x);
  return m;
}

double mean_of(const std::vector<double>& v) {
  return v.empty() ? 0.0 : std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

// Visits every node of the periodic grid^n lattice with its quadrature weight.
template <class Fn>
void for_each_torus_node(const ManifoldChart& m, int grid, Fn&& fn) {
  if (!m.quadrature) throw UnsupportedError(m.name + ": no quadrature rule (flat torus only)");
  if (grid < 2) throw ParameterError("quadrature grid must be at least 2");
  const int n = m.dim;
  const double spacing = m.quadrature->period / grid;
  const double cell = std::pow(spacing, n);
  std::vector<int> idx(n, 0);
  Point x(n);
  for (;;) {
    for (int i = 0; i < n; ++i) x[i] = spacing * idx[i];
    const Matrix g = m.metric(x);
    fn(x, cell * std::sqrt(g.determinant()));
    int d = 0;
    while (d < n && ++idx[d] == grid) idx[d++] = 0;
    if (d == n) break;
  }
}

}  // namespace

double function_laplacian(const ManifoldChart& m, const std::function<double(const Point&)>& f,
                          const Point& x, double h) {
  const int n = m.dim;
  const Matrix g_inv = checked_metric(m, x).inverse();
  const Tensor gamma = christoffel(m, x, h);
  Eigen::VectorXd grad(n);
  for (int k = 0; k < n; ++k) {
    const Stencil s = central_stencil(x, k, h);
    grad[k] = (f(s.plus) - f(s.minus)) / s.width;
  }
  double acc = 0.0;
  for (int i = 0; i < n; ++i) {
    const Stencil si = central_stencil(x, i, h);
    for (int j = i; j < n; ++j) {
      const Stencil sp = central_stencil(si.plus, j, h);
      const Stencil sm = central_stencil(si.minus, j, h);
      const double hess = ((f(sp.plus) - f(sp.minus)) / sp.width - (f(sm.plus) - f(sm.minus)) / sm.width) / si.width;
      double conn = 0.0;
      for (int k = 0; k < n; ++k) conn += gamma({k, i, j}) * grad[k];
      acc += (i == j ? 1.0 : 2.0) * g_inv(i, j) * (hess - conn);
    }
  }
  return acc;
}

ResidualReport check_weitzenboeck(const BundleForm& w, std::span<const Point> points,
                                  const CheckOptions& opts) {
  const BundleForm lap = hodge_laplace(w, opts.h);
  const BundleForm rough = rough_laplacian(w, opts.h);
  const BundleForm s = weitzenboeck_term(w, opts.h);
  std::vector<double> res;
  res.reserve(points.size());
  double scale = 0.0, absolute = 0.0;
  for (const Point& x : points) {
    const Matrix g = checked_metric(w.base(), x);
    const Tensor l = lap(x), rl = rough(x), sx = s(x);
    const double a = tensor_norm_at(l + rl - sx, g);
    const double mag = std::max({1.0, tensor_norm_at(l, g), tensor_norm_at(rl, g), tensor_norm_at(sx, g)});
    res.push_back(a / mag);
    absolute = std::max(absolute, a);
    scale = std::max(scale, tensor_norm_at(l, g));
  }
  ResidualReport r = residual_report("weitzenboeck", w.base().name, res, opts.tol, opts.h, opts.seed);
  add_detail(r, "degree", w.valence());
  add_detail(r, "max_laplace_norm", scale);
  add_detail(r, "max_absolute_residual", absolute);
  return r;
}

std::pair<double, double> contraction_terms(const Tensor& r, const Matrix& g, const Matrix& frame,
                                            const Matrix& j) {
  return FrameCurvature(r, g, frame).terms(j);
}

CurvatureTerms curvature_terms(const AlmostComplexField& j, const Point& x, const CheckOptions& opts) {
  const ManifoldChart& m = j.base();
  const Matrix g = checked_metric(m, x);
  const FrameCurvature fc(riemann(m, x, opts.h), g, orthonormal_frame(g, opts.frame_seed).vectors);
  CurvatureTerms t;
  std::tie(t.term2, t.term3) = fc.terms(j.matrix_at(x));
  const Tensor nj = covariant_derivative(j.field(), opts.h)(x);
  t.grad_norm_sq = metric_inner(nj, nj, g, g.inverse());
  t.energy_laplacian = function_laplacian(m, [&j](const Point& y) { return energy_density(j, y); }, x, opts.h);
  return t;
}

std::vector<ResidualReport> check_bochner(const AlmostComplexField& j, std::span<const Point> points,
                                          const CheckOptions& opts) {
  const BundleForm lap = hodge_laplace(j.field(), opts.h);
  std::vector<double> general, harmonic;
  double max_lap = 0.0, max_grad = 0.0, max_curv = 0.0, max_energy_lap = 0.0;
  for (const Point& x : points) {
    const Matrix g = checked_metric(j.base(), x);
    const Matrix g_inv = g.inverse();
    const CurvatureTerms t = curvature_terms(j, x, opts);
    const Tensor lj = lap(x);
    const double pairing = metric_inner(lj, j.field()(x), g, g_inv);
    const double rhs = t.grad_norm_sq - t.term2 + t.term3;
    general.push_back(std::abs(t.energy_laplacian + pairing - rhs));
    harmonic.push_back(std::abs(t.energy_laplacian - rhs));
    max_lap = std::max(max_lap, metric_norm(lj, g, g_inv));
    max_grad = std::max(max_grad, t.grad_norm_sq);
    max_curv = std::max(max_curv, std::abs(t.term3 - t.term2));
    max_energy_lap = std::max(max_energy_lap, std::abs(t.energy_laplacian));
  }
  std::vector<ResidualReport> out;
  ResidualReport r = residual_report("bochner", j.base().name, general, opts.tol, opts.h, opts.seed);
  add_detail(r, "max_laplace_norm", max_lap);
  add_detail(r, "max_grad_norm_sq", max_grad);
  add_detail(r, "max_curvature_gap", max_curv);
  add_detail(r, "max_energy_laplacian", max_energy_lap);
  out.push_back(std::move(r));
  if (max_lap <= opts.tol) {
    ResidualReport rh = residual_report("bochner_harmonic", j.base().name, harmonic, opts.tol, opts.h, opts.seed);
    add_detail(rh, "max_grad_norm_sq", max_grad);
    add_detail(rh, "max_energy_laplacian", max_energy_lap);
    out.push_back(std::move(rh));
  }
  return out;
}

ResidualReport check_scal_bound(const AlmostComplexField& j, std::span<const Point> points,
                                const CheckOptions& opts) {
  const ManifoldChart& m = j.base();
  const BundleForm lap = hodge_laplace(j.field(), opts.h);
  const BundleForm dj = covariant_derivative(j.field(), opts.h);
  std::vector<double> res;
  double max_herm = 0.0, max_harm = 0.0, max_gap = 0.0, max_scal = -INFINITY, max_term2 = -INFINITY;
  double max_grad = 0.0;
  for (const Point& x : points) {
    const Matrix g = checked_metric(m, x);
    const Matrix g_inv = g.inverse();
    const Matrix jm = j.matrix_at(x);
    max_herm = std::max(max_herm, hermitian_defect(jm, g));
    max_harm = std::max(max_harm, metric_norm(lap(x), g, g_inv));
    const FrameCurvature fc(riemann(m, x, opts.h), g, orthonormal_frame(g, opts.frame_seed).vectors);
    const double scal = fc.scalar();
    const double term2 = fc.terms(jm).first;
    const Tensor nj = dj(x);
    const double grad = metric_inner(nj, nj, g, g_inv);
    res.push_back(std::max(std::abs(scal + grad - term2), std::max(0.0, scal - term2)));
    max_gap = std::max(max_gap, std::abs(scal - term2));
    max_scal = std::max(max_scal, scal);
    max_term2 = std::max(max_term2, term2);
    max_grad = std::max(max_grad, grad);
  }
  const double max_r = max_of(res);
  const bool hypotheses = max_herm <= opts.tol && max_harm <= opts.tol;
  CheckStatus status = !hypotheses ? CheckStatus::hypothesis_not_met
                       : max_r <= opts.tol ? CheckStatus::passed
                                           : CheckStatus::failed;
  ResidualReport r = custom_report("scal_bound", m, static_cast<int>(points.size()), opts.h, max_r,
                                   mean_of(res), opts.tol, status != CheckStatus::failed, opts.seed, status);
  add_detail(r, "hermitian_defect", max_herm);
  add_detail(r, "harmonic_defect", max_harm);
  add_detail(r, "max_scalar_curvature", max_scal);
  add_detail(r, "max_term2", max_term2);
  add_detail(r, "max_grad_norm_sq", max_grad);
  add_detail(r, "max_equality_gap", max_gap);
  return r;
}

ResidualReport check_integral_criterion(const AlmostComplexField& j, int grid,
                                        std::span<const Point> points, const CheckOptions& opts) {
  const ManifoldChart& m = j.base();
  const BundleForm dj = covariant_derivative(j.field(), opts.h);
  double integral = 0.0;
  int nodes = 0;
  for_each_torus_node(m, grid, [&](const Point& x, double weight) {
    const Matrix g = checked_metric(m, x);
    const FrameCurvature fc(riemann(m, x, opts.h), g, orthonormal_frame(g, opts.frame_seed).vectors);
    const auto [t2, t3] = fc.terms(j.matrix_at(x));
    const Tensor nj = dj(x);
    integral += weight * (metric_inner(nj, nj, g, g.inverse()) - t2 + t3);
    ++nodes;
  });
  const BundleForm lap = hodge_laplace(j.field(), opts.h);
  double harmonic = 0.0;
  for (const Point& x : points) harmonic = std::max(harmonic, tensor_norm_at(lap(x), checked_metric(m, x)));
  const bool integral_zero = std::abs(integral) <= opts.tol;
  const bool harmonic_zero = harmonic <= opts.tol;
  const bool pass = integral_zero == harmonic_zero;
  ResidualReport r = custom_report("integral_criterion", m, nodes, opts.h, std::abs(integral), std::abs(integral),
                                   opts.tol, pass, opts.seed, pass ? CheckStatus::passed : CheckStatus::failed);
  add_detail(r, "integral", integral);
  add_detail(r, "harmonic_defect", harmonic);
  add_detail(r, "harmonic_samples", static_cast<double>(points.size()));
  return r;
}

AlmostComplexField pointwise_j_sampler(ManifoldPtr m, std::uint64_t seed) {
  const int n = m->dim;
  if (seed == 0) return make_pointwise(std::move(m), standard_block(n));
  switch (seed % 3) {
    case 0:
      return make_pointwise(std::move(m), random_complex_matrix(n, seed, true));
    case 1:
      return make_pointwise(std::move(m), random_complex_matrix(n, seed, false, 0.3));
    default:
      return make_pointwise(std::move(m), random_complex_matrix(n, seed, false, 1.0));
  }
}

ResidualReport s6_obstruction_scan(const ManifoldPtr& m, const JSampler& sampler,
                                   std::span<const std::uint64_t> seeds, std::span<const Point> points,
                                   const ScanOptions& opts) {
  if ((m->name != "round_sphere" && m->name != "perturbed_sphere") || m->dim != 6)
    throw ParameterError("s6_obstruction_scan: needs round_sphere or perturbed_sphere of dimension 6");
  if (seeds.empty() || points.empty()) throw ParameterError("s6_obstruction_scan: empty sample");
  std::vector<AlmostComplexField> js;
  js.reserve(seeds.size());
  for (std::uint64_t s : seeds) js.push_back(sampler(m, s));
  std::vector<BundleForm> grads;
  for (const auto& j : js) grads.push_back(covariant_derivative(j.field(), opts.h));

  double min_gap = INFINITY, min_integrand = INFINITY;
  double min_orth = INFINITY, max_orth = -INFINITY, min_nonorth = INFINITY;
  int orth = 0;
  bool finite = true;
  std::vector<double> shortfall;
  shortfall.reserve(points.size() * js.size());
  for (const Point& x : points) {
    const Matrix g = checked_metric(*m, x);
    const Matrix g_inv = g.inverse();
    const FrameCurvature fc(riemann(*m, x, opts.h), g, orthonormal_frame(g).vectors);
    for (std::size_t s = 0; s < js.size(); ++s) {
      const Matrix jm = js[s].matrix_at(x);
      const auto [t2, t3] = fc.terms(jm);
      const double gap = t3 - t2;
      finite = finite && std::isfinite(gap);
      const Tensor nj = grads[s](x);
      const double integrand = metric_inner(nj, nj, g, g_inv) + gap;
      min_gap = std::min(min_gap, gap);
      min_integrand = std::min(min_integrand, integrand);
      if (hermitian_defect(jm, g) <= 1e-9) {
        ++orth;
        min_orth = std::min(min_orth, gap);
        max_orth = std::max(max_orth, gap);
      } else {
        min_nonorth = std::min(min_nonorth, gap);
      }
      shortfall.push_back(std::max(0.0, opts.margin - gap));
    }
  }
  const double max_short = max_of(shortfall);
  const bool pass = finite && min_gap >= opts.margin && min_gap > 0.0;
  ResidualReport r = custom_report("s6_obstruction", *m, static_cast<int>(shortfall.size()), opts.h, max_short,
                                   mean_of(shortfall), 0.0, pass, opts.seed,
                                   pass ? CheckStatus::passed : CheckStatus::failed);
  add_detail(r, "margin", opts.margin);
  add_detail(r, "min_gap", min_gap);
  add_detail(r, "min_integrand", min_integrand);
  add_detail(r, "orthogonal_samples", orth);
  if (orth > 0) {
    add_detail(r, "min_orthogonal_gap", min_orth);
    add_detail(r, "max_orthogonal_gap", max_orth);
  }
  if (std::isfinite(min_nonorth)) add_detail(r, "min_nonorthogonal_gap", min_nonorth);
  return r;
}

ResidualReport check_trace_theorem(const TangentTensorField& a, std::span<const Point> points,
                                   const CheckOptions& opts) {
  if (a.valence() != 1) throw ValenceError("check_trace_theorem: needs an endomorphism field");
  const BundleForm lap = hodge_laplace(a, opts.h);
  auto trace_a = [&a](const Point& y) { return a(y).to_matrix().trace(); };
  std::vector<double> res;
  for (const Point& x : points) {
    const double trace_lap = lap(x).to_matrix().trace();
    res.push_back(std::abs(trace_lap + function_laplacian(a.base(), trace_a, x, opts.h)));
  }
  return residual_report("trace_theorem", a.base().name, res, opts.tol, opts.h, opts.seed);
}

ResidualReport check_integral_trace(const TangentTensorField& a, int grid, const CheckOptions& opts) {
  if (a.valence() != 1) throw ValenceError("check_integral_trace: needs an endomorphism field");
  const BundleForm lap = hodge_laplace(a, opts.h);
  double integral = 0.0, volume = 0.0, max_abs = 0.0;
  int nodes = 0;
  for_each_torus_node(a.base(), grid, [&](const Point& x, double weight) {
    const double t = lap(x).to_matrix().trace();
    integral += weight * t;
    volume += weight;
    max_abs = std::max(max_abs, std::abs(t));
    ++nodes;
  });
  const std::vector<double> res{std::abs(integral) / volume};
  ResidualReport r = residual_report("integral_trace", a.base().name, res, opts.tol, opts.h, opts.seed);
  r.samples = nodes;
  add_detail(r, "integral", integral);
  add_detail(r, "volume", volume);
  add_detail(r, "max_abs_integrand", max_abs);
  return r;
}

ResidualReport check_integrability(const AlmostComplexField& j, std::span<const Point> points,
                                   const CheckOptions& opts) {
  std::vector<double> res;
  for (const Point& x : points) res.push_back(integrability_defect(j, x, opts.h));
  return residual_report("integrability", j.base().name, res, opts.tol, opts.h, opts.seed);
}

ResidualReport check_kaehler_harmonic(const AlmostComplexField& j, std::span<const Point> points,
                                      const CheckOptions& opts) {
  const BundleForm nabla = covariant_derivative(j.field(), opts.h);
  const BundleForm d = exterior_d(j.field(), opts.h);
  const BundleForm delta = codifferential(j.field(), opts.h);
  const BundleForm lap = hodge_laplace(j.field(), opts.h);
  std::vector<double> res;
  double mn = 0.0, md = 0.0, mdel = 0.0, ml = 0.0;
  for (const Point& x : points) {
    const Matrix g = checked_metric(j.base(), x);
    const double a = tensor_norm_at(nabla(x), g), b = tensor_norm_at(d(x), g);
    const double c = tensor_norm_at(delta(x), g), e = tensor_norm_at(lap(x), g);
    mn = std::max(mn, a);
    md = std::max(md, b);
    mdel = std::max(mdel, c);
    ml = std::max(ml, e);
    res.push_back(std::max({a, b, c, e}));
  }
  ResidualReport r = residual_report("kaehler_harmonic", j.base().name, res, opts.tol, opts.h, opts.seed);
  add_detail(r, "max_nabla_j", mn);
  add_detail(r, "max_d_j", md);
  add_detail(r, "max_delta_j", mdel);
  add_detail(r, "max_laplace_j", ml);
  return r;
}

ResidualReport check_trace_delta_j(const AlmostComplexField& j, std::span<const Point> points,
                                   const CheckOptions& opts) {
  const BundleForm lap = hodge_laplace(j.field(), opts.h);
  std::vector<double> res;
  for (const Point& x : points) res.push_back(std::abs(lap(x).to_matrix().trace()));
  return residual_report("trace_delta_j", j.base().name, res, opts.tol, opts.h, opts.seed);
}

ResidualReport check_curvature_symmetries(const ManifoldChart& m, std::span<const Point> points,
                                          const CheckOptions& opts) {
  const int n = m.dim;
  std::vector<double> res;
  double torsion = 0.0, compat = 0.0, skew12 = 0.0, skew34 = 0.0, pair = 0.0, bianchi = 0.0;
  for (const Point& x : points) {
    const Matrix g = checked_metric(m, x);
    const Tensor gamma = christoffel(m, x, opts.h);
    const Tensor r = riemann(m, x, opts.h);
    const Tensor low = lower_riemann(r, g);
    double t = 0.0, c = 0.0, s12 = 0.0, s34 = 0.0, ps = 0.0, b = 0.0;
    for (int k = 0; k < n; ++k) {
      const Stencil st = central_stencil(x, k, opts.h);
      const Matrix dg = (m.metric(st.plus) - m.metric(st.minus)) / st.width;
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          t = std::max(t, std::abs(gamma({k, i, j}) - gamma({k, j, i})));
          double v = dg(i, j);
          for (int q = 0; q < n; ++q) v -= gamma({q, k, i}) * g(q, j) + gamma({q, k, j}) * g(i, q);
          c = std::max(c, std::abs(v));
        }
    }
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k)
          for (int q = 0; q < n; ++q) {
            const double v = low({i, j, k, q});
            s12 = std::max(s12, std::abs(v + low({j, i, k, q})));
            s34 = std::max(s34, std::abs(v + low({i, j, q, k})));
            ps = std::max(ps, std::abs(v - low({k, q, i, j})));
            b = std::max(b, std::abs(r({q, i, j, k}) + r({q, j, k, i}) + r({q, k, i, j})));
          }
    torsion = std::max(torsion, t);
    compat = std::max(compat, c);
    skew12 = std::max(skew12, s12);
    skew34 = std::max(skew34, s34);
    pair = std::max(pair, ps);
    bianchi = std::max(bianchi, b);
    res.push_back(std::max({t, c, s12, s34, ps, b}));
  }
  ResidualReport rep = residual_report("curvature_symmetries", m.name, res, opts.tol, opts.h, opts.seed);
  add_detail(rep, "torsion", torsion);
  add_detail(rep, "metric_compatibility", compat);
  add_detail(rep, "antisymmetry_12", skew12);
  add_detail(rep, "antisymmetry_34", skew34);
  add_detail(rep, "pair_symmetry", pair);
  add_detail(rep, "bianchi", bianchi);
  return rep;
}

ResidualReport check_energy_bound(const AlmostComplexField& j, std::span<const Point> points,
                                  const CheckOptions& opts) {
  const double half_n = 0.5 * j.dim();
  std::vector<double> res;
  double min_excess = INFINITY, max_herm_excess = 0.0;
  for (const Point& x : points) {
    const Matrix g = checked_metric(j.base(), x);
    const Matrix jm = j.matrix_at(x);
    const double excess = energy_density(jm, g) - half_n;
    min_excess = std::min(min_excess, excess);
    if (hermitian_defect(jm, g) <= 1e-9) {
      max_herm_excess = std::max(max_herm_excess, std::abs(excess));
      res.push_back(std::abs(excess));
    } else {
      res.push_back(std::max(0.0, -excess));
    }
  }
  ResidualReport r = residual_report("energy_bound", j.base().name, res, opts.tol, opts.h, opts.seed);
  add_detail(r, "min_excess", min_excess);
  add_detail(r, "max_hermitian_excess", max_herm_excess);
  return r;
}

ResidualReport check_frame_independence(const AlmostComplexField& j, const BundleForm& w,
                                        std::span<const Point> points, const CheckOptions& opts) {
  const ManifoldChart& m = j.base();
  const std::uint64_t s1 = opts.seed * 2 + 101, s2 = opts.seed * 2 + 102;
  const BundleForm delta = codifferential(w, opts.h);
  const BundleForm s = weitzenboeck_term(w, opts.h);
  std::vector<double> res;
  for (const Point& x : points) {
    const Matrix g = checked_metric(m, x);
    const Tensor r = riemann(m, x, opts.h);
    const Matrix jm = j.matrix_at(x);
    double spread = 0.0;
    std::vector<FrameAt> frames{orthonormal_frame(g), orthonormal_frame(g, s1), orthonormal_frame(g, s2)};
    const FrameCurvature base(r, g, frames[0].vectors);
    const auto [b2, b3] = base.terms(jm);
    const double bs = base.scalar();
    const double ww = inner(w, w, x);
    const Tensor dx = delta(x), sx = s(x);
    for (const FrameAt& f : frames) {
      const FrameCurvature fc(r, g, f.vectors);
      const auto [t2, t3] = fc.terms(jm);
      spread = std::max({spread, std::abs(t2 - b2), std::abs(t3 - b3), std::abs(fc.scalar() - bs)});
      spread = std::max(spread, std::abs(frame_sum::inner(w, w, x, f) - ww));
      spread = std::max(spread, (frame_sum::codifferential(w, x, f, opts.h) - dx).max_abs());
      spread = std::max(spread, (frame_sum::weitzenboeck_term(w, x, f, opts.h) - sx).max_abs());
    }
    res.push_back(spread);
  }
  return residual_report("frame_independence", m.name, res, opts.tol, opts.h, opts.seed);
}

}  // namespace hcs
