#include "hcs/geometry.hpp"

#include "hcs/errors.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace hcs {

namespace {

void require_domain(const ManifoldChart& m, const Point& x) {
  if (x.size() != m.dim) {
    std::ostringstream os;
    os << m.name << ": point has " << x.size() << " coordinates, expected " << m.dim;
    throw DomainError(os.str());
  }
  if (!x.allFinite() || !m.domain(x)) throw DomainError(m.name + ": point outside chart domain");
}

Tensor fd_christoffel(const ManifoldChart& m, const Point& x, double h) {
  const int n = m.dim;
  const Matrix g = checked_metric(m, x);
  const Matrix g_inv = g.inverse();
  std::vector<Matrix> dg(n);
  for (int l = 0; l < n; ++l) {
    const Stencil s = central_stencil(x, l, h);
    dg[l] = (m.metric(s.plus) - m.metric(s.minus)) / s.width;
  }
  Tensor gamma(n, 3);
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) {
        double acc = 0.0;
        for (int q = 0; q < n; ++q)
          acc += g_inv(k, q) * (dg[i](j, q) + dg[j](i, q) - dg[q](i, j));
        gamma({k, i, j}) = 0.5 * acc;
        gamma({k, j, i}) = 0.5 * acc;
      }
  return gamma;
}

Tensor fd_riemann(const ManifoldChart& m, const Point& x, double h) {
  const int n = m.dim;
  const Tensor gamma = christoffel(m, x, h);
  std::vector<Tensor> dgamma(n);
  for (int l = 0; l < n; ++l) {
    const Stencil s = central_stencil(x, l, h);
    dgamma[l] = christoffel(m, s.plus, h) - christoffel(m, s.minus, h);
    dgamma[l] *= 1.0 / s.width;
  }
  // Standard-sign components, negated at the end.
  Tensor r(n, 4);
  for (int a = 0; a < n; ++a)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
          double v = dgamma[i]({a, j, k}) - dgamma[j]({a, i, k});
          for (int l = 0; l < n; ++l)
            v += gamma({a, i, l}) * gamma({l, j, k}) - gamma({a, j, l}) * gamma({l, i, k});
          r({a, i, j, k}) = -v;
        }
  return r;
}

double read_param(const std::map<std::string, double>& p, const std::string& key, double fallback) {
  auto it = p.find(key);
  return it == p.end() ? fallback : it->second;
}

int read_dimension(const std::map<std::string, double>& p, double fallback) {
  const double n = read_param(p, "n", fallback);
  if (!(n >= 1.0) || n != std::floor(n) || n > 64)
    throw ParameterError("dimension n must be a positive integer");
  return static_cast<int>(n);
}

double conformal_factor(const Point& x) {
  const double s = 1.0 + x.squaredNorm();
  return 4.0 / (s * s);
}

Point sample_ball(std::mt19937_64& rng, int n, double radius) {
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  Point v(n);
  double norm = 0.0;
  do {
    for (int i = 0; i < n; ++i) v[i] = normal(rng);
    norm = v.norm();
  } while (norm < 1e-12);
  return v * (radius * std::pow(unit(rng), 1.0 / n) / norm);
}

// Stereographic chart keeps |x| <= kChartRadius; samples stay in |x| <= kSampleRadius.
constexpr double kChartRadius = 10.0;
constexpr double kSampleRadius = 3.0;

ManifoldPtr make_flat_torus(int n, double period) {
  auto m = std::make_shared<ManifoldChart>();
  m->name = "flat_torus";
  m->dim = n;
  m->metric = [n](const Point&) { return Matrix::Identity(n, n); };
  m->exact_christoffel = [n](const Point&) { return Tensor(n, 3); };
  m->exact_riemann = [n](const Point&) { return Tensor(n, 4); };
  m->domain = [](const Point& x) { return x.allFinite(); };
  m->sampler = [n, period](std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.0, period);
    Point x(n);
    for (int i = 0; i < n; ++i) x[i] = u(rng);
    return x;
  };
  m->quadrature = TorusQuadrature{period};
  m->params = {{"n", n}, {"L", period}};
  return m;
}

void attach_sphere_chart(ManifoldChart& m, int n) {
  m.dim = n;
  m.domain = [](const Point& x) { return x.norm() <= kChartRadius; };
  m.sampler = [n](std::mt19937_64& rng) { return sample_ball(rng, n, kSampleRadius); };
}

ManifoldPtr make_round_sphere(int n) {
  auto m = std::make_shared<ManifoldChart>();
  m->name = "round_sphere";
  attach_sphere_chart(*m, n);
  m->metric = [n](const Point& x) { return Matrix(conformal_factor(x) * Matrix::Identity(n, n)); };
  // g = e^{2u} delta with u = log 2 - log(1 + |x|^2).
  m->exact_christoffel = [n](const Point& x) {
    const double s = 1.0 + x.squaredNorm();
    const Point du = -2.0 * x / s;
    Tensor gamma(n, 3);
    for (int k = 0; k < n; ++k)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          double v = 0.0;
          if (i == k) v += du[j];
          if (j == k) v += du[i];
          if (i == j) v -= du[k];
          gamma({k, i, j}) = v;
        }
    return gamma;
  };
  // Unit sectional curvature: R(X, Y)Z = <X, Z> Y - <Y, Z> X.
  m->exact_riemann = [n](const Point& x) {
    const double phi = conformal_factor(x);
    Tensor r(n, 4);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        if (i == j) continue;
        r({j, i, j, i}) += phi;  // g_ik delta^m_j with k = i, m = j
        r({i, i, j, j}) -= phi;  // g_jk delta^m_i with k = j, m = i
      }
    return r;
  };
  m->params = {{"n", n}};
  return m;
}

ManifoldPtr make_perturbed_sphere(int n, double eps, std::uint64_t seed) {
  constexpr int kTerms = 4;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> wave(-1.0, 1.0);
  std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
  std::uniform_real_distribution<double> weight(0.2, 1.0);
  // Bump is a function of the embedded point y in S^n of R^{n+1}.
  std::vector<Point> k(kTerms, Point(n + 1));
  std::vector<double> amp(kTerms), shift(kTerms);
  double total = 0.0;
  for (int t = 0; t < kTerms; ++t) {
    for (int i = 0; i <= n; ++i) k[t][i] = wave(rng);
    shift[t] = phase(rng);
    amp[t] = weight(rng);
    total += amp[t];
  }
  for (double& a : amp) a /= total;  // sum |a_t| = 1 so |b| <= 1

  auto m = std::make_shared<ManifoldChart>();
  m->name = "perturbed_sphere";
  attach_sphere_chart(*m, n);
  m->metric = [n, eps, k, amp, shift](const Point& x) {
    const double r2 = x.squaredNorm();
    Point y(n + 1);
    y.head(n) = 2.0 * x / (1.0 + r2);
    y[n] = (r2 - 1.0) / (1.0 + r2);
    double b = 0.0;
    for (int t = 0; t < kTerms; ++t) b += amp[t] * std::cos(k[t].dot(y) + shift[t]);
    return Matrix((1.0 + eps * b) * conformal_factor(x) * Matrix::Identity(n, n));
  };
  m->params = {{"n", n}, {"epsilon", eps}, {"seed", static_cast<double>(seed)}};
  return m;
}

}  // namespace

Stencil central_stencil(const Point& x, int direction, double h) {
  Stencil s{x, x, 0.0};
  s.plus[direction] += h;
  s.minus[direction] -= h;
  s.width = s.plus[direction] - s.minus[direction];
  return s;
}

Matrix checked_metric(const ManifoldChart& m, const Point& x) {
  require_domain(m, x);
  Matrix g = m.metric(x);
  if (g.rows() != m.dim || g.cols() != m.dim || !g.allFinite())
    throw DegenerateMetricError(m.name + ": metric has wrong shape or non-finite entries");
  const double scale = g.cwiseAbs().maxCoeff();
  if ((g - g.transpose()).cwiseAbs().maxCoeff() > 1e-12 * std::max(scale, 1.0))
    throw DegenerateMetricError(m.name + ": metric is not symmetric");
  Eigen::LLT<Matrix> llt(g);
  if (llt.info() != Eigen::Success || llt.matrixLLT().diagonal().minCoeff() <= 1e-150)
    throw DegenerateMetricError(m.name + ": metric is not positive definite");
  return g;
}

Tensor christoffel(const ManifoldChart& m, const Point& x, double h) {
  if (!(h > 0.0)) throw ParameterError("step size must be positive");
  if (m.exact_christoffel) {
    checked_metric(m, x);
    return m.exact_christoffel(x);
  }
  return fd_christoffel(m, x, h);
}

Tensor riemann(const ManifoldChart& m, const Point& x, double h) {
  if (!(h > 0.0)) throw ParameterError("step size must be positive");
  if (m.exact_riemann) {
    checked_metric(m, x);
    return m.exact_riemann(x);
  }
  return fd_riemann(m, x, h);
}

Tensor lower_riemann(const Tensor& r, const Matrix& g) {
  const int n = r.dim();
  Tensor out(n, 4);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int q = 0; q < n; ++q) {
          double acc = 0.0;
          for (int l = 0; l < n; ++l) acc += g(q, l) * r({l, i, j, k});
          out({i, j, k, q}) = acc;
        }
  return out;
}

Matrix curvature_endomorphism(const Tensor& r, const Eigen::VectorXd& x_vec,
                              const Eigen::VectorXd& y_vec) {
  const int n = r.dim();
  Matrix e = Matrix::Zero(n, n);
  for (int q = 0; q < n; ++q)
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) {
        const double w = x_vec[a] * y_vec[b];
        if (w == 0.0) continue;
        for (int c = 0; c < n; ++c) e(q, c) += w * r({q, a, b, c});
      }
  return e;
}

FrameAt orthonormal_frame(const Matrix& g, std::optional<std::uint64_t> seed) {
  const int n = static_cast<int>(g.rows());
  Matrix basis = Matrix::Identity(n, n);
  if (seed) {
    std::mt19937_64 rng(*seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) basis(i, j) = normal(rng);
  }
  FrameAt frame{Matrix::Zero(n, n)};
  for (int j = 0; j < n; ++j) {
    Eigen::VectorXd v = basis.col(j);
    // Two passes of modified Gram-Schmidt.
    for (int pass = 0; pass < 2; ++pass)
      for (int i = 0; i < j; ++i) {
        const Eigen::VectorXd e = frame.vectors.col(i);
        v -= (e.dot(g * v)) * e;
      }
    const double len2 = v.dot(g * v);
    if (!(len2 > 1e-24)) throw DegenerateMetricError("orthonormal_frame: degenerate metric or basis");
    frame.vectors.col(j) = v / std::sqrt(len2);
  }
  return frame;
}

FrameAt orthonormal_frame(const ManifoldChart& m, const Point& x,
                          std::optional<std::uint64_t> seed) {
  return orthonormal_frame(checked_metric(m, x), seed);
}

double scalar_curvature(const ManifoldChart& m, const Point& x, double h,
                        std::optional<std::uint64_t> frame_seed) {
  const Matrix g = checked_metric(m, x);
  const Tensor r = riemann(m, x, h);
  const Matrix e = orthonormal_frame(g, frame_seed).vectors;
  double acc = 0.0;
  for (int i = 0; i < m.dim; ++i)
    for (int j = 0; j < m.dim; ++j) {
      const Eigen::VectorXd v = curvature_endomorphism(r, e.col(i), e.col(j)) * e.col(i);
      acc += v.dot(g * e.col(j));
    }
  return acc;
}

ManifoldPtr builtin(const std::string& name, const std::map<std::string, double>& params) {
  if (name == "flat_torus") {
    const int n = read_dimension(params, 2);
    const double period = read_param(params, "L", 2.0 * std::numbers::pi);
    if (!(period > 0.0) || !std::isfinite(period)) throw ParameterError("flat_torus: L must be positive");
    return make_flat_torus(n, period);
  }
  if (name == "round_sphere") return make_round_sphere(read_dimension(params, 2));
  if (name == "perturbed_sphere") {
    const int n = read_dimension(params, 6);
    const double eps = read_param(params, "epsilon", 0.0);
    if (!(eps >= 0.0 && eps <= 0.2)) throw ParameterError("perturbed_sphere: epsilon must lie in [0, 0.2]");
    const double seed = read_param(params, "seed", 0.0);
    if (!(seed >= 0.0) || seed != std::floor(seed)) throw ParameterError("perturbed_sphere: bad seed");
    return make_perturbed_sphere(n, eps, static_cast<std::uint64_t>(seed));
  }
  throw ParameterError("unknown manifold '" + name + "'");
}

std::vector<std::string> builtin_names() { return {"flat_torus", "round_sphere", "perturbed_sphere"}; }

ManifoldPtr without_exact_connection(const ManifoldChart& m) {
  auto copy = std::make_shared<ManifoldChart>(m);
  copy->exact_christoffel = nullptr;
  copy->exact_riemann = nullptr;
  return copy;
}

std::vector<Point> sample_points(const ManifoldChart& m, int count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<Point> pts;
  pts.reserve(count);
  for (int i = 0; i < count; ++i) pts.push_back(m.sampler(rng));
  return pts;
}

}  // namespace hcs
