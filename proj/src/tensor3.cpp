#include "sturm/tensor3.hpp"

#include <cmath>
#include <numeric>
#include <sstream>

namespace sturm {

std::string dims_to_string(const Dims3& d) {
  std::ostringstream os;
  os << d[0] << "x" << d[1] << "x" << d[2];
  return os.str();
}

namespace {

std::size_t checked_size(const Dims3& dims) {
  if (dims[0] == 0 || dims[1] == 0 || dims[2] == 0) {
    throw std::invalid_argument("Tensor3: all extents must be positive, got " +
                                dims_to_string(dims));
  }
  return dims[0] * dims[1] * dims[2];
}

}  // namespace

Tensor3::Tensor3(const Dims3& dims) : dims_(dims), data_(checked_size(dims), 0.0) {}

Tensor3::Tensor3(const Dims3& dims, std::vector<double> data)
    : dims_(dims), data_(std::move(data)) {
  const std::size_t expect = checked_size(dims);
  if (data_.size() != expect) {
    throw std::invalid_argument("Tensor3: data length " + std::to_string(data_.size()) +
                                " does not match shape " + dims_to_string(dims) + " (" +
                                std::to_string(expect) + " entries)");
  }
  if (!all_finite()) {
    throw std::invalid_argument("Tensor3: non-finite entry in shape " + dims_to_string(dims));
  }
}

Eigen::MatrixXd Tensor3::frontal_slice(std::size_t i3) const {
  Eigen::MatrixXd slice(dims_[0], dims_[1]);
  for (std::size_t i1 = 0; i1 < dims_[0]; ++i1)
    for (std::size_t i2 = 0; i2 < dims_[1]; ++i2)
      slice(static_cast<Eigen::Index>(i1), static_cast<Eigen::Index>(i2)) =
          data_[offset(i1, i2, i3)];
  return slice;
}

bool Tensor3::all_finite() const {
  for (double v : data_) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

namespace {

void require_same_dims(const Tensor3& a, const Tensor3& b, const char* op) {
  if (!a.same_dims(b)) {
    throw std::invalid_argument(std::string(op) + ": shape mismatch, " +
                                dims_to_string(a.dims()) + " vs " + dims_to_string(b.dims()));
  }
}

}  // namespace

Tensor3& Tensor3::operator+=(const Tensor3& rhs) {
  require_same_dims(*this, rhs, "Tensor3::operator+=");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += rhs.data_[i];
  return *this;
}

Tensor3& Tensor3::operator-=(const Tensor3& rhs) {
  require_same_dims(*this, rhs, "Tensor3::operator-=");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= rhs.data_[i];
  return *this;
}

Tensor3& Tensor3::operator*=(double s) {
  for (double& v : data_) v *= s;
  return *this;
}

double inner_product(const Tensor3& a, const Tensor3& b) {
  require_same_dims(a, b, "inner_product");
  double acc = 0.0;
  const auto& da = a.data();
  const auto& db = b.data();
  for (std::size_t i = 0; i < da.size(); ++i) acc += da[i] * db[i];
  return acc;
}

double l1_norm(const Tensor3& a) {
  double acc = 0.0;
  for (double v : a.data()) acc += std::abs(v);
  return acc;
}

double fro_norm(const Tensor3& a) { return std::sqrt(inner_product(a, a)); }

std::vector<double> vectorize(const Tensor3& a) { return a.data(); }

Tensor3 tensorize3(const std::vector<double>& v, const Dims3& dims) {
  return Tensor3(dims, v);
}

LabeledDataset::LabeledDataset(std::vector<Tensor3> samples, std::vector<int> labels)
    : samples_(std::move(samples)), labels_(std::move(labels)) {
  if (samples_.empty()) {
    throw std::invalid_argument("LabeledDataset: need at least one sample");
  }
  if (labels_.size() != samples_.size()) {
    throw std::invalid_argument("LabeledDataset: " + std::to_string(samples_.size()) +
                                " samples but " + std::to_string(labels_.size()) + " labels");
  }
  const Dims3& d = samples_.front().dims();
  for (std::size_t m = 1; m < samples_.size(); ++m) {
    if (samples_[m].dims() != d) {
      throw std::invalid_argument("LabeledDataset: sample " + std::to_string(m) + " has shape " +
                                  dims_to_string(samples_[m].dims()) + ", expected " +
                                  dims_to_string(d));
    }
  }
  for (std::size_t m = 0; m < labels_.size(); ++m) {
    if (labels_[m] != 1 && labels_[m] != -1) {
      throw std::invalid_argument("LabeledDataset: label at index " + std::to_string(m) +
                                  " is " + std::to_string(labels_[m]) + ", must be +1 or -1");
    }
  }
}

}  // namespace sturm
