#include "sturm/prox.hpp"

#include <Eigen/Dense>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>

#include "sturm/errors.hpp"
#include "sturm/spectral.hpp"
#include "sturm/tsvd.hpp"

namespace sturm {

Tensor3 prox_tnn(const Tensor3& t, double mu) {
  if (mu < 0.0) throw std::invalid_argument("prox_tnn: mu must be non-negative");
  if (mu == 0.0) return t;

  const Dims3& d = t.dims();
  const std::size_t i3 = d[2];
  SpectralTensor3 st = dft_mode3(t);

  for (std::size_t k = 0; 2 * k <= i3; ++k) {
    Eigen::BDCSVD<Eigen::MatrixXcd> svd(st.frontal_slice(k),
                                        Eigen::ComputeThinU | Eigen::ComputeThinV);
    Eigen::VectorXd s = svd.singularValues();
    if (!s.allFinite()) {
      throw NumericError("prox_tnn: SVD failed on spectral slice " + std::to_string(k));
    }
    for (Eigen::Index i = 0; i < s.size(); ++i) s(i) = std::max(s(i) - mu, 0.0);
    const Eigen::MatrixXcd shrunk =
        svd.matrixU() * s.asDiagonal() * svd.matrixV().adjoint();
    st.set_frontal_slice(k, shrunk);
    if (!self_conjugate(k, i3)) st.set_frontal_slice(mirror_index(k, i3), shrunk.conjugate());
  }
  return idft_mode3(st);
}

Tensor3 prox_l1(const Tensor3& t, double mu) {
  if (mu < 0.0) throw std::invalid_argument("prox_l1: mu must be non-negative");
  Tensor3 out = t;
  for (double& v : out.data()) {
    const double mag = std::abs(v) - mu;
    v = mag > 0.0 ? (v > 0.0 ? mag : -mag) : 0.0;
  }
  return out;
}

}  // namespace sturm
