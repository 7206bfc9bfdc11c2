#include "hcs/jstructure.hpp"

#include "hcs/errors.hpp"
#include "hcs/random_fields.hpp"

#include <cmath>
#include <sstream>

namespace hcs {

namespace {

constexpr int kProbeCount = 64;

void require_even(int n, const char* who) {
  if (n % 2 != 0) {
    std::ostringstream os;
    os << who << ": dimension " << n << " is odd, no almost complex structure exists";
    throw ParameterError(os.str());
  }
}

// Right division a * b^{-1}.
Matrix right_divide(const Matrix& a, const Matrix& b) {
  return b.transpose().partialPivLu().solve(a.transpose()).transpose();
}

std::vector<Matrix> coefficient_derivatives(const TangentTensorField& j, const Point& x, double h) {
  std::vector<Matrix> d(j.dim());
  for (int a = 0; a < j.dim(); ++a) {
    const Stencil s = central_stencil(x, a, h);
    d[a] = (j(s.plus).to_matrix() - j(s.minus).to_matrix()) / s.width;
  }
  return d;
}

double vector_norm(const Eigen::VectorXd& v, const Matrix& g) { return std::sqrt(std::max(0.0, v.dot(g * v))); }

}  // namespace

AlmostComplexField::AlmostComplexField(TangentTensorField j, std::span<const Point> probes, double tol)
    : j_(std::move(j)) {
  if (j_.valence() != 1) throw ValenceError("almost complex field must have valence 1");
  require_even(j_.dim(), "almost complex field");
  const Matrix id = Matrix::Identity(j_.dim(), j_.dim());
  for (const Point& x : probes) {
    const Matrix m = matrix_at(x);
    const double scale = std::max(1.0, m.squaredNorm());
    if ((m * m + id).cwiseAbs().maxCoeff() > tol * scale)
      throw ParameterError("almost complex field: J^2 != -I at a probe point");
    if (std::abs(m.trace()) > tol * std::sqrt(scale))
      throw ParameterError("almost complex field: trace J != 0 at a probe point");
  }
}

Matrix standard_block(int n) {
  require_even(n, "standard_block");
  Matrix j = Matrix::Zero(n, n);
  for (int b = 0; b < n; b += 2) {
    j(b, b + 1) = -1.0;
    j(b + 1, b) = 1.0;
  }
  return j;
}

AlmostComplexField make_standard(ManifoldPtr m) {
  require_even(m->dim, "make_standard");
  const Tensor j0 = Tensor::from_matrix(standard_block(m->dim));
  const auto probes = sample_points(*m, 4, 0);
  return AlmostComplexField(constant_field(std::move(m), j0), probes);
}

AlmostComplexField make_conjugated(ManifoldPtr m, std::uint64_t seed, const ConjugationOptions& opts) {
  const int n = m->dim;
  require_even(n, "make_conjugated");
  const Matrix j0 = standard_block(n);
  const double unit = frequency_unit(*m);
  std::mt19937_64 rng(seed);
  std::vector<TrigPolynomial> q;
  for (int i = 0; i < n * n; ++i)
    q.push_back(TrigPolynomial::random(n, rng, opts.terms, opts.max_frequency, unit));
  auto q_at = [n, q](const Point& x) {
    Matrix out(n, n);
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) out(a, b) = q[a * n + b](x);
    return out;
  };

  const auto probes = sample_points(*m, kProbeCount, split_seed(seed, 1));
  double eps = opts.epsilon;
  for (int attempt = 0; attempt <= 3; ++attempt) {
    bool singular = false;
    for (const Point& x : probes) {
      const Matrix p = Matrix::Identity(n, n) + eps * q_at(x);
      const Eigen::JacobiSVD<Matrix> svd(p);
      if (svd.singularValues().minCoeff() < 1e-3) {
        singular = true;
        break;
      }
    }
    if (!singular) {
      TangentTensorField field(m, 1, [n, j0, q_at, eps](const Point& x) {
        const Matrix p = Matrix::Identity(n, n) + eps * q_at(x);
        return Tensor::from_matrix(right_divide(p * j0, p));
      });
      return AlmostComplexField(std::move(field), probes);
    }
    eps *= 0.5;
  }
  throw ParameterError("make_conjugated: conjugating matrix singular after 3 retries");
}

AlmostComplexField make_pointwise(ManifoldPtr m, const Matrix& value) {
  const auto probes = sample_points(*m, 1, 0);
  return AlmostComplexField(constant_field(std::move(m), Tensor::from_matrix(value)), probes);
}

Matrix random_complex_matrix(int n, std::uint64_t seed, bool orthogonal, double spread) {
  const Matrix j0 = standard_block(n);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  auto gaussian = [&] {
    Matrix g(n, n);
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) g(a, b) = normal(rng);
    return g;
  };
  if (orthogonal) {
    const Matrix q = Eigen::HouseholderQR<Matrix>(gaussian()).householderQ();
    return q * j0 * q.transpose();
  }
  for (;;) {
    const Matrix p = Matrix::Identity(n, n) + spread * gaussian();
    const Eigen::JacobiSVD<Matrix> svd(p);
    if (svd.singularValues().minCoeff() > 0.05) return right_divide(p * j0, p);
  }
}

Tensor nijenhuis(const AlmostComplexField& j, const Point& x, double h) {
  const int n = j.dim();
  checked_metric(j.base(), x);
  const Matrix jm = j.matrix_at(x);
  const std::vector<Matrix> dj = coefficient_derivatives(j.field(), x, h);
  Tensor out(n, 3);
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int l = 0; l < n; ++l) {
        double v = dj[i](k, l) - dj[l](k, i);
        for (int b = 0; b < n; ++b) {
          double bracket = 0.0;
          for (int a = 0; a < n; ++a) bracket += jm(a, i) * dj[a](b, l) - jm(a, l) * dj[a](b, i);
          v += jm(k, b) * bracket;
        }
        out({k, i, l}) = v;
      }
  return out;
}

double integrability_defect(const AlmostComplexField& j, const Point& x, double h) {
  const int n = j.dim();
  const Matrix g = checked_metric(j.base(), x);
  const Matrix jm = j.matrix_at(x);
  const Tensor dj = exterior_d(j.field(), h)(x);
  const Tensor nj = nijenhuis(j, x, h);
  double worst = 0.0;
  Eigen::VectorXd v(n);
  for (int i = 0; i < n; ++i)
    for (int l = 0; l < n; ++l) {
      for (int k = 0; k < n; ++k) {
        double rotated = 0.0;
        for (int a = 0; a < n; ++a)
          for (int b = 0; b < n; ++b) rotated += dj({k, a, b}) * jm(a, i) * jm(b, l);
        v[k] = dj({k, i, l}) - rotated - nj({k, i, l});
      }
      worst = std::max(worst, vector_norm(v, g));
    }
  return worst;
}

namespace {

struct DerivativeData {
  Matrix g;
  Matrix g_inv;
  Tensor nabla_j;  // [k][a][b] = ((nabla_a J) d_b)^k
};

DerivativeData derivative_data(const AlmostComplexField& j, const Point& x, double h) {
  DerivativeData d;
  d.g = checked_metric(j.base(), x);
  d.g_inv = d.g.inverse();
  d.nabla_j = covariant_derivative(j.field(), h)(x);
  return d;
}

Tensor swap_last_two(const Tensor& t) {
  const int n = t.dim();
  Tensor out(n, 3);
  for (int k = 0; k < n; ++k)
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) out({k, a, b}) = t({k, b, a});
  return out;
}

double antisym_norm(const DerivativeData& d) {
  Tensor a = d.nabla_j - swap_last_two(d.nabla_j);
  a *= 0.5;
  return metric_norm(a, d.g, d.g_inv);
}

double trace_norm(const DerivativeData& d) {
  const int n = d.g.rows();
  Eigen::VectorXd t = Eigen::VectorXd::Zero(n);
  for (int k = 0; k < n; ++k)
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) t[k] += d.g_inv(a, b) * d.nabla_j({k, a, b});
  return vector_norm(t, d.g);
}

}  // namespace

HarmonicResiduals harmonic_residuals(const AlmostComplexField& j, const Point& x, double h) {
  const DerivativeData d = derivative_data(j, x, h);
  HarmonicResiduals r;
  r.sym_defect = antisym_norm(d);
  r.trace_defect = trace_norm(d);
  r.laplace_norm = metric_norm(hodge_laplace(j.field(), h)(x), d.g, d.g_inv);
  return r;
}

double hermitian_defect(const Matrix& j, const Matrix& g) {
  const Matrix hm = j.transpose() * g * j - g;
  const Matrix gh = g.inverse() * hm;
  return std::sqrt(std::max(0.0, (gh * gh).trace()));
}

PointDefects point_defects(const AlmostComplexField& j, const Point& x, double h) {
  const DerivativeData d = derivative_data(j, x, h);
  PointDefects p;
  p.hermitian = hermitian_defect(j.matrix_at(x), d.g);
  p.nearly_kaehler = metric_norm(d.nabla_j + swap_last_two(d.nabla_j), d.g, d.g_inv);
  p.kaehler = metric_norm(d.nabla_j, d.g, d.g_inv);
  p.integrable = metric_norm(nijenhuis(j, x, h), d.g, d.g_inv);
  p.harmonic = metric_norm(hodge_laplace(j.field(), h)(x), d.g, d.g_inv);
  p.sym_defect = antisym_norm(d);
  return p;
}

DefectSummary structure_defects(const AlmostComplexField& j, std::span<const Point> points, double h) {
  if (points.empty()) throw ParameterError("structure_defects: empty sample set");
  DefectSummary s;
  for (const Point& x : points) {
    const PointDefects p = point_defects(j, x, h);
    s.hermitian = std::max(s.hermitian, p.hermitian);
    s.nearly_kaehler = std::max(s.nearly_kaehler, p.nearly_kaehler);
    s.kaehler = std::max(s.kaehler, p.kaehler);
    s.integrable = std::max(s.integrable, p.integrable);
    s.harmonic = std::max(s.harmonic, p.harmonic);
  }
  s.samples = static_cast<int>(points.size());
  return s;
}

double energy_density(const Matrix& j, const Matrix& g) {
  return 0.5 * (g.inverse() * j.transpose() * g * j).trace();
}

double energy_density(const AlmostComplexField& j, const Point& x) {
  return energy_density(j.matrix_at(x), checked_metric(j.base(), x));
}

}  // namespace hcs
