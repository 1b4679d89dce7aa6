#include "sturm/tsvd.hpp"

#include <Eigen/Dense>
#include <Eigen/SVD>

#include <cmath>

#include "sturm/errors.hpp"

namespace sturm {

Tensor3 t_product(const Tensor3& a, const Tensor3& b) {
  const Dims3& da = a.dims();
  const Dims3& db = b.dims();
  if (da[1] != db[0] || da[2] != db[2]) {
    throw std::invalid_argument("t_product: shapes " + dims_to_string(da) + " and " +
                                dims_to_string(db) +
                                " do not conform (need a.I2 == b.I1 and equal I3)");
  }
  const std::size_t i3 = da[2];
  const SpectralTensor3 sa = dft_mode3(a);
  const SpectralTensor3 sb = dft_mode3(b);
  SpectralTensor3 sc(Dims3{da[0], db[1], i3});
  for (std::size_t k = 0; 2 * k <= i3; ++k) {
    const Eigen::MatrixXcd prod = sa.frontal_slice(k) * sb.frontal_slice(k);
    sc.set_frontal_slice(k, prod);
    if (!self_conjugate(k, i3)) sc.set_frontal_slice(mirror_index(k, i3), prod.conjugate());
  }
  return idft_mode3(sc);
}

Tensor3 conj_transpose(const Tensor3& a) {
  const Dims3& d = a.dims();
  Tensor3 out(Dims3{d[1], d[0], d[2]});
  for (std::size_t t = 0; t < d[2]; ++t) {
    const std::size_t src = (d[2] - t) % d[2];
    for (std::size_t i1 = 0; i1 < d[0]; ++i1)
      for (std::size_t i2 = 0; i2 < d[1]; ++i2) out(i2, i1, t) = a(i1, i2, src);
  }
  return out;
}

Tensor3 identity_tensor(std::size_t i, std::size_t i3) {
  Tensor3 out(Dims3{i, i, i3});
  for (std::size_t j = 0; j < i; ++j) out(j, j, 0) = 1.0;
  return out;
}

namespace {

void check_slice_finite(const Eigen::MatrixXcd& u, const Eigen::VectorXd& s,
                        const Eigen::MatrixXcd& v, std::size_t k) {
  if (!u.allFinite() || !s.allFinite() || !v.allFinite()) {
    throw NumericError("t_svd: SVD failed on spectral slice " + std::to_string(k));
  }
}

}  // namespace

TsvdFactors t_svd(const Tensor3& a) {
  const Dims3& d = a.dims();
  const std::size_t i3 = d[2];
  const SpectralTensor3 sa = dft_mode3(a);

  SpectralTensor3 su(Dims3{d[0], d[0], i3});
  SpectralTensor3 ss(Dims3{d[0], d[1], i3});
  SpectralTensor3 sv(Dims3{d[1], d[1], i3});

  for (std::size_t k = 0; 2 * k <= i3; ++k) {
    Eigen::MatrixXcd uk, vk;
    Eigen::VectorXd sk;
    if (self_conjugate(k, i3)) {
      // Real spectrum at k = 0 and Nyquist: a real SVD keeps the factors
      // exactly real there, which conjugate symmetry requires.
      Eigen::BDCSVD<Eigen::MatrixXd> svd(sa.frontal_slice(k).real(),
                                         Eigen::ComputeFullU | Eigen::ComputeFullV);
      uk = svd.matrixU().cast<std::complex<double>>();
      vk = svd.matrixV().cast<std::complex<double>>();
      sk = svd.singularValues();
    } else {
      Eigen::BDCSVD<Eigen::MatrixXcd> svd(sa.frontal_slice(k),
                                          Eigen::ComputeFullU | Eigen::ComputeFullV);
      uk = svd.matrixU();
      vk = svd.matrixV();
      sk = svd.singularValues();
    }
    check_slice_finite(uk, sk, vk, k);

    Eigen::MatrixXcd diag = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(d[0]),
                                                   static_cast<Eigen::Index>(d[1]));
    for (Eigen::Index i = 0; i < sk.size(); ++i) diag(i, i) = sk(i);

    su.set_frontal_slice(k, uk);
    ss.set_frontal_slice(k, diag);
    sv.set_frontal_slice(k, vk);
    if (!self_conjugate(k, i3)) {
      const std::size_t km = mirror_index(k, i3);
      su.set_frontal_slice(km, uk.conjugate());
      ss.set_frontal_slice(km, diag);
      sv.set_frontal_slice(km, vk.conjugate());
    }
  }

  return TsvdFactors{idft_mode3(su), idft_mode3(ss), idft_mode3(sv)};
}

namespace {

// Singular values of every spectral slice, mirrored pairs computed once.
// spectra[k] holds the descending singular values of slice k.
std::vector<Eigen::VectorXd> spectral_singular_values(const Tensor3& a) {
  const std::size_t i3 = a.dims()[2];
  const SpectralTensor3 sa = dft_mode3(a);
  std::vector<Eigen::VectorXd> spectra(i3);
  for (std::size_t k = 0; 2 * k <= i3; ++k) {
    Eigen::BDCSVD<Eigen::MatrixXcd> svd(sa.frontal_slice(k));
    if (!svd.singularValues().allFinite()) {
      throw NumericError("spectral SVD failed on slice " + std::to_string(k));
    }
    spectra[k] = svd.singularValues();
    if (!self_conjugate(k, i3)) spectra[mirror_index(k, i3)] = spectra[k];
  }
  return spectra;
}

}  // namespace

std::size_t tubal_rank(const Tensor3& a, double tol) {
  if (tol < 0.0) throw std::invalid_argument("tubal_rank: tolerance must be non-negative");
  const Dims3& d = a.dims();
  const auto spectra = spectral_singular_values(a);

  double s_max = 0.0;
  for (const auto& sk : spectra)
    if (sk.size() > 0) s_max = std::max(s_max, sk(0));

  // Parseval along each singular tube: ||S(i,i,:)||_F^2 = (1/I3) sum_k s_k(i)^2.
  const std::size_t r_max = std::min(d[0], d[1]);
  std::size_t rank = 0;
  for (std::size_t i = 0; i < r_max; ++i) {
    double sq = 0.0;
    for (const auto& sk : spectra) {
      const double si = sk(static_cast<Eigen::Index>(i));
      sq += si * si;
    }
    const double tube_norm = std::sqrt(sq / static_cast<double>(d[2]));
    if (tube_norm > tol * s_max) ++rank;
  }
  return rank;
}

double tnn(const Tensor3& a) {
  const auto spectra = spectral_singular_values(a);
  double total = 0.0;
  for (const auto& sk : spectra) total += sk.sum();
  return total / static_cast<double>(a.dims()[2]);
}

}  // namespace sturm
