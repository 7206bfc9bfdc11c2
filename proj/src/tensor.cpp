#include "hcs/tensor.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <stdexcept>

namespace hcs {

Tensor::Tensor(int dim, int rank) : dim_(dim), rank_(rank), strides_(rank) {
  if (dim <= 0 || rank < 0) throw std::invalid_argument("tensor: bad shape");
  std::size_t s = 1;
  for (int r = rank - 1; r >= 0; --r) {
    strides_[r] = s;
    s *= static_cast<std::size_t>(dim);
  }
  data_.assign(s, 0.0);
}

std::size_t Tensor::offset(std::initializer_list<int> idx) const {
  return offset(std::span<const int>(idx.begin(), idx.size()));
}

std::size_t Tensor::offset(std::span<const int> idx) const {
  assert(static_cast<int>(idx.size()) == rank_);
  std::size_t off = 0;
  for (int r = 0; r < rank_; ++r) off += strides_[r] * static_cast<std::size_t>(idx[r]);
  return off;
}

void Tensor::unravel(std::size_t flat, std::span<int> idx) const {
  for (int r = 0; r < rank_; ++r) {
    idx[r] = static_cast<int>(flat / strides_[r]);
    flat %= strides_[r];
  }
}

Tensor& Tensor::operator+=(const Tensor& other) {
  assert(same_shape(other));
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += other.data_[i];
  return *this;
}

Tensor& Tensor::operator-=(const Tensor& other) {
  assert(same_shape(other));
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= other.data_[i];
  return *this;
}

Tensor& Tensor::operator*=(double s) {
  for (double& v : data_) v *= s;
  return *this;
}

void Tensor::axpy(double a, const Tensor& x) {
  assert(same_shape(x));
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += a * x.data_[i];
}

double Tensor::max_abs() const {
  double m = 0.0;
  for (double v : data_) m = std::max(m, std::abs(v));
  return m;
}

Tensor Tensor::from_matrix(const Matrix& m) {
  assert(m.rows() == m.cols());
  Tensor t(static_cast<int>(m.rows()), 2);
  for (int k = 0; k < m.rows(); ++k)
    for (int i = 0; i < m.cols(); ++i) t({k, i}) = m(k, i);
  return t;
}

Matrix Tensor::to_matrix() const {
  if (rank_ != 2) throw std::logic_error("tensor: to_matrix needs rank 2");
  Matrix m(dim_, dim_);
  for (int k = 0; k < dim_; ++k)
    for (int i = 0; i < dim_; ++i) m(k, i) = data_[k * dim_ + i];
  return m;
}

Tensor operator+(Tensor a, const Tensor& b) { return a += b; }
Tensor operator-(Tensor a, const Tensor& b) { return a -= b; }
Tensor operator*(double s, Tensor a) { return a *= s; }

Tensor apply_to_slot(const Tensor& t, int slot, const Matrix& m) {
  using RowBlock = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  const int n = t.dim();
  Tensor out(n, t.rank());
  const auto st = static_cast<Eigen::Index>(t.stride(slot));
  const auto block = st * n;
  const auto outer = static_cast<Eigen::Index>(t.size()) / block;
  const double* src = t.data().data();
  double* dst = out.data().data();
  if (st == 1) {
    Eigen::Map<RowBlock>(dst, outer, n).noalias() = Eigen::Map<const RowBlock>(src, outer, n) * m.transpose();
    return out;
  }
  for (Eigen::Index o = 0; o < outer; ++o)
    Eigen::Map<RowBlock>(dst + o * block, n, st).noalias() = m * Eigen::Map<const RowBlock>(src + o * block, n, st);
  return out;
}

double metric_inner(const Tensor& a, const Tensor& b, const Matrix& g, const Matrix& g_inv) {
  assert(a.same_shape(b) && a.rank() >= 1);
  Tensor raised = apply_to_slot(b, 0, g);
  for (int s = 1; s < b.rank(); ++s) raised = apply_to_slot(raised, s, g_inv);
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * raised[i];
  return acc;
}

double metric_norm(const Tensor& t, const Matrix& g, const Matrix& g_inv) {
  return std::sqrt(std::max(0.0, metric_inner(t, t, g, g_inv)));
}

double covariant_norm(const Tensor& t, const Matrix& g_inv) {
  Tensor raised = t;
  for (int s = 0; s < t.rank(); ++s) raised = apply_to_slot(raised, s, g_inv);
  double acc = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i) acc += t[i] * raised[i];
  return std::sqrt(std::max(0.0, acc));
}

double antisymmetry_defect(const Tensor& t) {
  double worst = 0.0;
  std::vector<int> idx(t.rank());
  for (int s1 = 1; s1 < t.rank(); ++s1) {
    for (int s2 = s1 + 1; s2 < t.rank(); ++s2) {
      for (std::size_t f = 0; f < t.size(); ++f) {
        t.unravel(f, idx);
        std::swap(idx[s1], idx[s2]);
        worst = std::max(worst, std::abs(t[f] + t[t.offset(idx)]));
      }
    }
  }
  return worst;
}

}  // namespace hcs
