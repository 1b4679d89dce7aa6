#include "sturm/spectral.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <mutex>

#include "sturm/errors.hpp"

namespace sturm {

SpectralTensor3::SpectralTensor3(const Dims3& dims) : dims_(dims) {
  if (dims[0] == 0 || dims[1] == 0 || dims[2] == 0) {
    throw std::invalid_argument("SpectralTensor3: all extents must be positive, got " +
                                dims_to_string(dims));
  }
  data_.assign(dims[0] * dims[1] * dims[2], {0.0, 0.0});
}

Eigen::MatrixXcd SpectralTensor3::frontal_slice(std::size_t k) const {
  Eigen::MatrixXcd slice(dims_[0], dims_[1]);
  for (std::size_t i1 = 0; i1 < dims_[0]; ++i1)
    for (std::size_t i2 = 0; i2 < dims_[1]; ++i2)
      slice(static_cast<Eigen::Index>(i1), static_cast<Eigen::Index>(i2)) =
          data_[offset(i1, i2, k)];
  return slice;
}

void SpectralTensor3::set_frontal_slice(std::size_t k, const Eigen::MatrixXcd& slice) {
  for (std::size_t i1 = 0; i1 < dims_[0]; ++i1)
    for (std::size_t i2 = 0; i2 < dims_[1]; ++i2)
      data_[offset(i1, i2, k)] =
          slice(static_cast<Eigen::Index>(i1), static_cast<Eigen::Index>(i2));
}

double SpectralTensor3::max_abs() const {
  double m = 0.0;
  for (const auto& z : data_) m = std::max(m, std::abs(z));
  return m;
}

namespace {

// FFTW plan creation/destruction is not thread-safe; execution of distinct
// plans is.
std::mutex& plan_mutex() {
  static std::mutex m;
  return m;
}

// In-place batched 1-D transform over all tubes. The tube-contiguous layout
// makes every tube a unit-stride run of length `len`.
void transform_tubes(std::complex<double>* buf, std::size_t n_tubes, std::size_t len, int sign) {
  if (len == 1) return;
  auto* p = reinterpret_cast<fftw_complex*>(buf);
  int n = static_cast<int>(len);
  fftw_plan plan;
  {
    std::lock_guard<std::mutex> lock(plan_mutex());
    plan = fftw_plan_many_dft(1, &n, static_cast<int>(n_tubes), p, nullptr, 1, n, p, nullptr, 1,
                              n, sign, FFTW_ESTIMATE);
  }
  if (plan == nullptr) {
    throw NumericError("dft_mode3: FFTW failed to build a plan for length " +
                       std::to_string(len));
  }
  fftw_execute(plan);
  {
    std::lock_guard<std::mutex> lock(plan_mutex());
    fftw_destroy_plan(plan);
  }
}

}  // namespace

SpectralTensor3 dft_mode3(const Tensor3& a) {
  const Dims3& d = a.dims();
  SpectralTensor3 s(d);
  const auto& src = a.data();
  auto& dst = s.data();
  for (std::size_t i = 0; i < src.size(); ++i) dst[i] = {src[i], 0.0};
  transform_tubes(dst.data(), d[0] * d[1], d[2], FFTW_FORWARD);
  return s;
}

namespace {

// Inverse transform into a complex buffer, normalized by 1/I3.
std::vector<std::complex<double>> inverse_buffer(const SpectralTensor3& s) {
  const Dims3& d = s.dims();
  std::vector<std::complex<double>> buf = s.data();
  transform_tubes(buf.data(), d[0] * d[1], d[2], FFTW_BACKWARD);
  const double scale = 1.0 / static_cast<double>(d[2]);
  for (auto& z : buf) z *= scale;
  return buf;
}

}  // namespace

double idft_mode3_imag_residual(const SpectralTensor3& s) {
  double worst = 0.0;
  for (const auto& z : inverse_buffer(s)) worst = std::max(worst, std::abs(z.imag()));
  return worst;
}

Tensor3 idft_mode3(const SpectralTensor3& s) {
  const Dims3& d = s.dims();
  const std::vector<std::complex<double>> buf = inverse_buffer(s);
  const double tol = 1e-10 * std::max(1.0, s.max_abs());
  Tensor3 out(d);
  auto& dst = out.data();
  for (std::size_t i = 0; i < buf.size(); ++i) {
    const double im = buf[i].imag();
    if (std::abs(im) > tol) {
      throw NumericError("idft_mode3: spectrum is not conjugate-symmetric (imag residual " +
                         std::to_string(std::abs(im)) + " > " + std::to_string(tol) + ")");
    }
    dst[i] = buf[i].real();
  }
  return out;
}

}  // namespace sturm
