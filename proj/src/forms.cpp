#include "hcs/forms.hpp"

#include "hcs/errors.hpp"

#include <stdexcept>
#include <string>
#include <vector>

namespace hcs {

TangentTensorField::TangentTensorField(ManifoldPtr base, int valence, Coeff coeff)
    : base_(std::move(base)), valence_(valence), coeff_(std::move(coeff)) {
  if (!base_) throw std::invalid_argument("field: null manifold");
  if (valence_ < 0) throw ValenceError("field: negative valence");
  if (!coeff_) throw std::invalid_argument("field: empty coefficient function");
}

Tensor TangentTensorField::operator()(const Point& x) const {
  Tensor t = coeff_(x);
  if (t.dim() != base_->dim || t.rank() != valence_ + 1)
    throw ValenceError("field: coefficient function returned a tensor of the wrong shape");
  return t;
}

TangentTensorField constant_field(ManifoldPtr base, const Tensor& value) {
  const int valence = value.rank() - 1;
  return TangentTensorField(std::move(base), valence, [value](const Point&) { return value; });
}

TangentTensorField linear_combination(double a, const TangentTensorField& u, double b,
                                      const TangentTensorField& v) {
  if (u.valence() != v.valence() || u.dim() != v.dim())
    throw ValenceError("linear_combination: fields differ in valence or dimension");
  return TangentTensorField(u.base_ptr(), u.valence(), [a, u, b, v](const Point& x) {
    Tensor out = u(x);
    out *= a;
    out.axpy(b, v(x));
    return out;
  });
}

namespace {

// Gamma_j(k, m) = Gamma^k_{jm}.
Matrix connection_matrix(const Tensor& gamma, int j) {
  const int n = gamma.dim();
  Matrix c(n, n);
  for (int k = 0; k < n; ++k)
    for (int m = 0; m < n; ++m) c(k, m) = gamma({k, j, m});
  return c;
}

// Tensor of rank r+1 with a new slot inserted at position 1, filled from
// per-direction slices: out[k, j, rest] = slices[j][k, rest].
Tensor stack_at_slot1(const std::vector<Tensor>& slices) {
  const int n = static_cast<int>(slices.size());
  const Tensor& first = slices.front();
  Tensor out(n, first.rank() + 1);
  const std::size_t tail = first.size() / static_cast<std::size_t>(n);
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k)
      for (std::size_t r = 0; r < tail; ++r)
        out[(static_cast<std::size_t>(k) * n + j) * tail + r] = slices[j][k * tail + r];
  return out;
}

Tensor covariant_derivative_at(const TangentTensorField& t, const Point& x, double h) {
  const ManifoldChart& m = t.base();
  const int n = m.dim;
  const Tensor gamma = christoffel(m, x, h);
  const Tensor tx = t(x);
  std::vector<Tensor> slices;
  slices.reserve(n);
  for (int j = 0; j < n; ++j) {
    const Stencil s = central_stencil(x, j, h);
    Tensor d = t(s.plus) - t(s.minus);
    d *= 1.0 / s.width;
    const Matrix cj = connection_matrix(gamma, j);
    d += apply_to_slot(tx, 0, cj);
    const Matrix cjt = cj.transpose();
    for (int a = 1; a < tx.rank(); ++a) d -= apply_to_slot(tx, a, cjt);
    slices.push_back(std::move(d));
  }
  return stack_at_slot1(slices);
}

Tensor contract_slot1(const Tensor& t, const Eigen::VectorXd& v);

// g^{ab} (nabla_a u)_{b ...}, contracting before the connection acts on the remaining slots.
Tensor traced_derivative_at(const TangentTensorField& u, const Point& x, double h) {
  const ManifoldChart& m = u.base();
  const int n = m.dim;
  const Matrix g_inv = checked_metric(m, x).inverse();
  const Tensor gamma = christoffel(m, x, h);
  const Tensor ux = u(x);
  Tensor out(n, ux.rank() - 1);
  Eigen::VectorXd slot1 = Eigen::VectorXd::Zero(n);
  for (int j = 0; j < n; ++j) {
    const Stencil s = central_stencil(x, j, h);
    const Eigen::VectorXd gj = g_inv.col(j);
    Tensor d = contract_slot1(u(s.plus) - u(s.minus), gj);
    d *= 1.0 / s.width;
    const Matrix cj = connection_matrix(gamma, j);
    const Tensor v = contract_slot1(ux, gj);
    d += apply_to_slot(v, 0, cj);
    const Matrix cjt = cj.transpose();
    for (int a = 1; a < v.rank(); ++a) d -= apply_to_slot(v, a, cjt);
    slot1 += cj * gj;
    out += d;
  }
  out -= contract_slot1(ux, slot1);
  return out;
}

// Advances a row-major multi-index; entries range over 0..n-1.
void advance(std::vector<int>& idx, int n) {
  for (int i = static_cast<int>(idx.size()) - 1; i >= 0; --i) {
    if (++idx[i] < n) return;
    idx[i] = 0;
  }
}

Tensor alternate_derivative(const Tensor& dw) {
  // dw has index order (k, j, i1..ip); result (k, c0..cp).
  const int n = dw.dim();
  const int p = dw.rank() - 2;
  Tensor out(n, p + 2);
  std::vector<int> idx(p + 2, 0);
  std::vector<std::size_t> st(p + 2);
  for (int i = 0; i < p + 2; ++i) st[i] = dw.stride(i);
  for (std::size_t f = 0; f < out.size(); ++f, advance(idx, n)) {
    double acc = 0.0;
    for (int s = 0; s <= p; ++s) {
      std::size_t off = idx[0] * st[0] + idx[1 + s] * st[1];
      int pos = 2;
      for (int c = 0; c <= p; ++c)
        if (c != s) off += idx[1 + c] * st[pos++];
      acc += ((s % 2 == 0) ? 1.0 : -1.0) * dw[off];
    }
    out[f] = acc;
  }
  return out;
}

Tensor curvature_action_tensor(const Tensor& w, const Matrix& e) {
  Tensor out = apply_to_slot(w, 0, e);
  const Matrix et = e.transpose();
  for (int s = 1; s < w.rank(); ++s) out -= apply_to_slot(w, s, et);
  return out;
}

// Contracts covariant slot 1 of t with the vector v.
Tensor contract_slot1(const Tensor& t, const Eigen::VectorXd& v) {
  const int n = t.dim();
  Tensor out(n, t.rank() - 1);
  const std::size_t tail = out.size() / static_cast<std::size_t>(n);
  for (int k = 0; k < n; ++k)
    for (std::size_t r = 0; r < tail; ++r) {
      double acc = 0.0;
      for (int b = 0; b < n; ++b) acc += v[b] * t[(static_cast<std::size_t>(k) * n + b) * tail + r];
      out[k * tail + r] = acc;
    }
  return out;
}

// out[k, c1..cp] = sum_K (-1)^K slices[c_K][k, c1..^cK..cp], K = 1..p.
Tensor alternate_insert(const std::vector<Tensor>& slices, int p) {
  const int n = static_cast<int>(slices.size());
  Tensor out(n, p + 1);
  if (p == 0) return out;
  std::vector<int> idx(p + 1, 0);
  std::vector<std::size_t> st(p);
  for (int i = 0; i < p; ++i) st[i] = slices.front().stride(i);
  for (std::size_t f = 0; f < out.size(); ++f, advance(idx, n)) {
    double acc = 0.0;
    for (int kk = 1; kk <= p; ++kk) {
      std::size_t off = idx[0] * st[0];
      int pos = 1;
      for (int c = 1; c <= p; ++c)
        if (c != kk) off += idx[c] * st[pos++];
      acc += ((kk % 2 == 0) ? 1.0 : -1.0) * slices[idx[kk]][off];
    }
    out[f] = acc;
  }
  return out;
}

}  // namespace

TangentTensorField covariant_derivative(const TangentTensorField& t, double h) {
  return TangentTensorField(t.base_ptr(), t.valence() + 1,
                            [t, h](const Point& x) { return covariant_derivative_at(t, x, h); });
}

BundleForm exterior_d(const BundleForm& w, double h) {
  if (w.valence() >= w.dim())
    throw ValenceError("exterior_d: degree " + std::to_string(w.valence()) +
                       " must be below the dimension");
  const BundleForm dw = covariant_derivative(w, h);
  return BundleForm(w.base_ptr(), w.valence() + 1,
                    [dw](const Point& x) { return alternate_derivative(dw(x)); });
}

BundleForm codifferential(const BundleForm& w, double h) {
  if (w.valence() < 1) throw ValenceError("codifferential: degree must be at least 1");
  return BundleForm(w.base_ptr(), w.valence() - 1, [w, h](const Point& x) {
    Tensor out = traced_derivative_at(w, x, h);
    out *= -1.0;
    return out;
  });
}

BundleForm hodge_laplace(const BundleForm& w, double h) {
  const int p = w.valence();
  const int n = w.dim();
  if (p > n) throw ValenceError("hodge_laplace: degree exceeds dimension");
  if (p == 0) return codifferential(exterior_d(w, h), h);
  if (p == n) return exterior_d(codifferential(w, h), h);
  const BundleForm a = exterior_d(codifferential(w, h), h);
  const BundleForm b = codifferential(exterior_d(w, h), h);
  return linear_combination(1.0, a, 1.0, b);
}

TangentTensorField rough_laplacian(const TangentTensorField& t, double h) {
  const TangentTensorField dt = covariant_derivative(t, h);
  return TangentTensorField(t.base_ptr(), t.valence(),
                            [dt, h](const Point& x) { return traced_derivative_at(dt, x, h); });
}

Tensor curvature_action(const BundleForm& w, const Eigen::VectorXd& x_vec,
                        const Eigen::VectorXd& y_vec, const Point& x, double h) {
  const Tensor r = riemann(w.base(), x, h);
  return curvature_action_tensor(w(x), curvature_endomorphism(r, x_vec, y_vec));
}

Tensor curvature_action(const BundleForm& w, int i, int j, const FrameAt& frame, const Point& x,
                        double h) {
  return curvature_action(w, frame.vectors.col(i), frame.vectors.col(j), x, h);
}

BundleForm weitzenboeck_term(const BundleForm& w, double h) {
  return BundleForm(w.base_ptr(), w.valence(), [w, h](const Point& x) {
    const ManifoldChart& m = w.base();
    const int n = m.dim;
    const int p = w.valence();
    if (p == 0) return Tensor(n, 1);
    const Matrix g_inv = checked_metric(m, x).inverse();
    const Tensor r = riemann(m, x, h);
    const Tensor wx = w(x);
    // slices[c] = g^{ab} (R(d_a, d_c) w)(d_b, ...)
    std::vector<Tensor> slices(n, Tensor(n, p));
    Eigen::VectorXd ea = Eigen::VectorXd::Zero(n), ec = Eigen::VectorXd::Zero(n);
    for (int c = 0; c < n; ++c) {
      ec.setZero();
      ec[c] = 1.0;
      for (int a = 0; a < n; ++a) {
        ea.setZero();
        ea[a] = 1.0;
        const Tensor act = curvature_action_tensor(wx, curvature_endomorphism(r, ea, ec));
        slices[c] += contract_slot1(act, g_inv.col(a));
      }
    }
    return alternate_insert(slices, p);
  });
}

BundleForm d_squared_defect(const BundleForm& w, double h) {
  if (w.valence() + 2 > w.dim()) throw ValenceError("d_squared_defect: needs p + 2 <= n");
  return exterior_d(exterior_d(w, h), h);
}

double inner(const BundleForm& w, const BundleForm& eta, const Point& x) {
  if (w.valence() != eta.valence() || w.dim() != eta.dim())
    throw ValenceError("inner: fields differ in valence or dimension");
  const Matrix g = checked_metric(w.base(), x);
  return metric_inner(w(x), eta(x), g, g.inverse());
}

double pointwise_norm(const BundleForm& w, const Point& x) {
  const Matrix g = checked_metric(w.base(), x);
  return metric_norm(w(x), g, g.inverse());
}

namespace frame_sum {

Tensor codifferential(const BundleForm& w, const Point& x, const FrameAt& frame, double h) {
  if (w.valence() < 1) throw ValenceError("codifferential: degree must be at least 1");
  const Tensor dw = covariant_derivative_at(w, x, h);
  const int n = w.dim();
  Tensor out(n, w.valence());
  for (int i = 0; i < n; ++i) {
    const Eigen::VectorXd e = frame.vectors.col(i);
    out -= contract_slot1(contract_slot1(dw, e), e);
  }
  return out;
}

Tensor weitzenboeck_term(const BundleForm& w, const Point& x, const FrameAt& frame, double h) {
  const ManifoldChart& m = w.base();
  const int n = m.dim;
  const int p = w.valence();
  if (p == 0) return Tensor(n, 1);
  const Tensor r = riemann(m, x, h);
  const Tensor wx = w(x);
  std::vector<Tensor> slices(n, Tensor(n, p));
  Eigen::VectorXd ec = Eigen::VectorXd::Zero(n);
  for (int c = 0; c < n; ++c) {
    ec.setZero();
    ec[c] = 1.0;
    for (int i = 0; i < n; ++i) {
      const Eigen::VectorXd e = frame.vectors.col(i);
      const Tensor act = curvature_action_tensor(wx, curvature_endomorphism(r, e, ec));
      slices[c] += contract_slot1(act, e);
    }
  }
  return alternate_insert(slices, p);
}

double inner(const BundleForm& w, const BundleForm& eta, const Point& x, const FrameAt& frame) {
  if (w.valence() != eta.valence() || w.dim() != eta.dim())
    throw ValenceError("inner: fields differ in valence or dimension");
  const Matrix g = checked_metric(w.base(), x);
  const Matrix et = frame.vectors.transpose();
  Tensor a = w(x), b = eta(x);
  for (int s = 1; s < a.rank(); ++s) {
    a = apply_to_slot(a, s, et);
    b = apply_to_slot(b, s, et);
  }
  b = apply_to_slot(b, 0, g);
  double acc = 0.0;
  for (std::size_t f = 0; f < a.size(); ++f) acc += a[f] * b[f];
  return acc;
}

}  // namespace frame_sum

}  // namespace hcs
