#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace sturm {

/// Shape of a third-order tensor, (I1, I2, I3).
using Dims3 = std::array<std::size_t, 3>;

std::string dims_to_string(const Dims3& d);

/// Dense real third-order tensor.
///
/// Storage is tube-contiguous: the mode-3 index varies fastest, so the tube
/// A(i1,i2,:) occupies I3 consecutive doubles. Indices are 0-based.
/// Constructors reject non-finite entries; vectorize()/tensorize3() use the
/// same linearization as the raw storage. Sharing through const references
/// across threads is safe; there is no hidden mutable state.
class Tensor3 {
 public:
  Tensor3() : dims_{0, 0, 0} {}

  /// Zero tensor of the given shape. All extents must be positive.
  explicit Tensor3(const Dims3& dims);
  Tensor3(std::size_t i1, std::size_t i2, std::size_t i3)
      : Tensor3(Dims3{i1, i2, i3}) {}

  /// Wraps existing data (tube-contiguous order). Throws if the length does
  /// not match the shape or any entry is non-finite.
  Tensor3(const Dims3& dims, std::vector<double> data);

  const Dims3& dims() const { return dims_; }
  std::size_t size() const { return data_.size(); }

  double operator()(std::size_t i1, std::size_t i2, std::size_t i3) const {
    return data_[offset(i1, i2, i3)];
  }
  double& operator()(std::size_t i1, std::size_t i2, std::size_t i3) {
    return data_[offset(i1, i2, i3)];
  }

  const std::vector<double>& data() const { return data_; }
  std::vector<double>& data() { return data_; }

  /// The mode-3 vector A(i1,i2,:), a contiguous view into storage.
  std::span<const double> tube(std::size_t i1, std::size_t i2) const {
    return {data_.data() + offset(i1, i2, 0), dims_[2]};
  }

  /// Copy of the I1 x I2 matrix A(:,:,i3).
  Eigen::MatrixXd frontal_slice(std::size_t i3) const;

  std::size_t offset(std::size_t i1, std::size_t i2, std::size_t i3) const {
    return (i1 * dims_[1] + i2) * dims_[2] + i3;
  }

  bool same_dims(const Tensor3& other) const { return dims_ == other.dims_; }
  bool all_finite() const;

  Tensor3& operator+=(const Tensor3& rhs);
  Tensor3& operator-=(const Tensor3& rhs);
  Tensor3& operator*=(double s);

  friend Tensor3 operator+(Tensor3 a, const Tensor3& b) { return a += b; }
  friend Tensor3 operator-(Tensor3 a, const Tensor3& b) { return a -= b; }
  friend Tensor3 operator*(Tensor3 a, double s) { return a *= s; }
  friend Tensor3 operator*(double s, Tensor3 a) { return a *= s; }

 private:
  Dims3 dims_;
  std::vector<double> data_;
};

/// Sum of elementwise products of two same-shape tensors.
double inner_product(const Tensor3& a, const Tensor3& b);

/// Sum of absolute values of all entries.
double l1_norm(const Tensor3& a);

/// Frobenius norm, sqrt(inner_product(a, a)).
double fro_norm(const Tensor3& a);

/// Flattens a tensor into a vector in storage (tube-contiguous) order.
std::vector<double> vectorize(const Tensor3& a);

/// Folds a vector back into a tensor; inverse of vectorize for matching dims.
Tensor3 tensorize3(const std::vector<double>& v, const Dims3& dims);

/// Training set: M same-shape feature tensors with labels in {-1, +1}.
class LabeledDataset {
 public:
  LabeledDataset(std::vector<Tensor3> samples, std::vector<int> labels);

  std::size_t sample_count() const { return samples_.size(); }
  const Dims3& sample_dims() const { return samples_.front().dims(); }
  const std::vector<Tensor3>& samples() const { return samples_; }
  const std::vector<int>& labels() const { return labels_; }

 private:
  std::vector<Tensor3> samples_;
  std::vector<int> labels_;
};

}  // namespace sturm
