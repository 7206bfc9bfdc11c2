#pragma once

#include "hcs/geometry.hpp"

#include <functional>

namespace hcs {

// Field of tangent-valued covariant q-tensors x -> T^k_{i1..iq}, given by a
// coefficient function in chart coordinates. Tangent-valued p-forms are the
// fields whose covariant slots are antisymmetric; the operators below that
// take a BundleForm assume (but do not enforce) that antisymmetry.
class TangentTensorField {
 public:
  using Coeff = std::function<Tensor(const Point&)>;

  TangentTensorField(ManifoldPtr base, int valence, Coeff coeff);

  int valence() const { return valence_; }
  int dim() const { return base_->dim; }
  const ManifoldChart& base() const { return *base_; }
  const ManifoldPtr& base_ptr() const { return base_; }

  Tensor operator()(const Point& x) const;

 private:
  ManifoldPtr base_;
  int valence_;
  Coeff coeff_;
};

using BundleForm = TangentTensorField;

TangentTensorField constant_field(ManifoldPtr base, const Tensor& value);
TangentTensorField linear_combination(double a, const TangentTensorField& u, double b,
                                      const TangentTensorField& v);

// (nabla T)^k_{j; i1..iq}; the derivative slot is the first covariant slot.
TangentTensorField covariant_derivative(const TangentTensorField& t, double h = kDefaultStep);

// d w (X0..Xp) = sum_k (-1)^k (nabla_{Xk} w)(X0, .., ^Xk, .., Xp). Requires p < n.
BundleForm exterior_d(const BundleForm& w, double h = kDefaultStep);

// delta w (X1..X_{p-1}) = -(nabla_{e_i} w)(e_i, X1, ..), as a metric trace. Requires p >= 1.
BundleForm codifferential(const BundleForm& w, double h = kDefaultStep);

// d delta + delta d; only delta d for p = 0 and only d delta for p = n.
BundleForm hodge_laplace(const BundleForm& w, double h = kDefaultStep);

// g^{ab} (nabla nabla T)_{a b ...}.
TangentTensorField rough_laplacian(const TangentTensorField& t, double h = kDefaultStep);

// Coordinate components of R(X, Y) w at x for tangent vectors X, Y at x.
Tensor curvature_action(const BundleForm& w, const Eigen::VectorXd& x_vec,
                        const Eigen::VectorXd& y_vec, const Point& x, double h = kDefaultStep);
// Same with X = e_i, Y = e_j of the given frame.
Tensor curvature_action(const BundleForm& w, int i, int j, const FrameAt& frame, const Point& x,
                        double h = kDefaultStep);

// Zeroth-order curvature term
//   S(X1..Xp) = sum_k (-1)^k (R(e_i, Xk) w)(e_i, X1, .., ^Xk, .., Xp).
BundleForm weitzenboeck_term(const BundleForm& w, double h = kDefaultStep);

BundleForm d_squared_defect(const BundleForm& w, double h = kDefaultStep);

// Pointwise metric inner product sum over an orthonormal frame of
// g(w(e_I), eta(e_I)); evaluated through metric traces.
double inner(const BundleForm& w, const BundleForm& eta, const Point& x);
double pointwise_norm(const BundleForm& w, const Point& x);

// Literal orthonormal-frame evaluations, kept as cross-checks for the
// metric-trace implementations above.
namespace frame_sum {

Tensor codifferential(const BundleForm& w, const Point& x, const FrameAt& frame,
                      double h = kDefaultStep);
Tensor weitzenboeck_term(const BundleForm& w, const Point& x, const FrameAt& frame,
                         double h = kDefaultStep);
double inner(const BundleForm& w, const BundleForm& eta, const Point& x, const FrameAt& frame);

}  // namespace frame_sum

}  // namespace hcs
