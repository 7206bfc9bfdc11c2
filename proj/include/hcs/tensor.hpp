#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace hcs {

using Point = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

// Dense array with `rank` indices, each ranging over 0..dim-1, stored
// row-major. A tangent-valued covariant q-tensor T^k_{i1..iq} has rank q+1
// with the contravariant index k first.
class Tensor {
 public:
  Tensor() = default;
  Tensor(int dim, int rank);

  int dim() const { return dim_; }
  int rank() const { return rank_; }
  std::size_t size() const { return data_.size(); }

  double& operator[](std::size_t flat) { return data_[flat]; }
  double operator[](std::size_t flat) const { return data_[flat]; }

  double& operator()(std::initializer_list<int> idx) { return data_[offset(idx)]; }
  double operator()(std::initializer_list<int> idx) const { return data_[offset(idx)]; }

  std::size_t offset(std::initializer_list<int> idx) const;
  std::size_t offset(std::span<const int> idx) const;
  // Decodes a flat offset into rank() indices.
  void unravel(std::size_t flat, std::span<int> idx) const;
  std::size_t stride(int slot) const { return strides_[slot]; }

  std::span<double> data() { return data_; }
  std::span<const double> data() const { return data_; }

  Tensor& operator+=(const Tensor& other);
  Tensor& operator-=(const Tensor& other);
  Tensor& operator*=(double s);
  void axpy(double a, const Tensor& x);

  double max_abs() const;
  bool same_shape(const Tensor& other) const {
    return dim_ == other.dim_ && rank_ == other.rank_;
  }

  // Rank-2 tensors <-> matrices; entry (k, i) = T^k_i.
  static Tensor from_matrix(const Matrix& m);
  Matrix to_matrix() const;

 private:
  int dim_ = 0;
  int rank_ = 0;
  std::vector<std::size_t> strides_;
  std::vector<double> data_;
};

Tensor operator+(Tensor a, const Tensor& b);
Tensor operator-(Tensor a, const Tensor& b);
Tensor operator*(double s, Tensor a);

// Contracts `slot` of `t` against the first index of `m`:
//   out[.., i_slot, ..] = sum_m m(i_slot, m) * t[.., m, ..].
Tensor apply_to_slot(const Tensor& t, int slot, const Matrix& m);

// Metric inner product of two tensors of equal shape whose slot 0 is
// contravariant and remaining slots covariant:
//   g_kl g^{i1 j1} ... g^{iq jq} a^k_{i..} b^l_{j..}.
double metric_inner(const Tensor& a, const Tensor& b, const Matrix& g, const Matrix& g_inv);
double metric_norm(const Tensor& t, const Matrix& g, const Matrix& g_inv);

// Same, for purely covariant tensors (no contravariant slot).
double covariant_norm(const Tensor& t, const Matrix& g_inv);

// Maximum violation of antisymmetry over all pairs of covariant slots
// (slots 1..rank-1).
double antisymmetry_defect(const Tensor& t);

}  // namespace hcs
