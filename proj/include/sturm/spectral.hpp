#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "sturm/tensor3.hpp"

namespace sturm {

/// Mode-3 DFT image of a Tensor3. Same tube-contiguous layout, complex
/// entries. Index k along mode 3 is the frequency index.
class SpectralTensor3 {
 public:
  SpectralTensor3() : dims_{0, 0, 0} {}
  explicit SpectralTensor3(const Dims3& dims);

  const Dims3& dims() const { return dims_; }
  std::size_t size() const { return data_.size(); }

  std::complex<double> operator()(std::size_t i1, std::size_t i2, std::size_t k) const {
    return data_[offset(i1, i2, k)];
  }
  std::complex<double>& operator()(std::size_t i1, std::size_t i2, std::size_t k) {
    return data_[offset(i1, i2, k)];
  }

  const std::vector<std::complex<double>>& data() const { return data_; }
  std::vector<std::complex<double>>& data() { return data_; }

  std::size_t offset(std::size_t i1, std::size_t i2, std::size_t k) const {
    return (i1 * dims_[1] + i2) * dims_[2] + k;
  }

  /// Copy of the k-th frontal slice as an I1 x I2 complex matrix.
  Eigen::MatrixXcd frontal_slice(std::size_t k) const;
  void set_frontal_slice(std::size_t k, const Eigen::MatrixXcd& slice);

  double max_abs() const;

 private:
  Dims3 dims_;
  std::vector<std::complex<double>> data_;
};

/// Unnormalized forward DFT along mode 3:
///   S(i1,i2,k) = sum_t a(i1,i2,t) * exp(-2*pi*i*k*t/I3).
SpectralTensor3 dft_mode3(const Tensor3& a);

/// Inverse transform with 1/I3 normalization. The spectrum must be
/// conjugate-symmetric along mode 3 up to roundoff; the imaginary residual
/// tolerance scales with the spectrum magnitude (1e-10 * max(1, max|S|)).
/// Throws NumericError if any imaginary residual exceeds it.
Tensor3 idft_mode3(const SpectralTensor3& s);

/// Largest |Im| left over by the inverse transform, without rounding to a
/// real tensor. Used by idft_mode3 and exposed for diagnostics.
double idft_mode3_imag_residual(const SpectralTensor3& s);

}  // namespace sturm
