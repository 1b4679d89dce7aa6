#pragma once

#include "sturm/spectral.hpp"
#include "sturm/tensor3.hpp"

namespace sturm {

/// Frequency index paired with k by conjugate symmetry of a real signal.
inline std::size_t mirror_index(std::size_t k, std::size_t i3) { return (i3 - k) % i3; }

/// True when slice k is its own conjugate partner (k = 0, or the Nyquist
/// slice for even I3). Those slices have real spectra for real inputs.
inline bool self_conjugate(std::size_t k, std::size_t i3) { return mirror_index(k, i3) == k; }

/// t-SVD factors: a = u * s * conj_transpose(v), u and v orthogonal,
/// s f-diagonal with non-increasing singular values in every spectral slice.
struct TsvdFactors {
  Tensor3 u;  // I1 x I1 x I3
  Tensor3 s;  // I1 x I2 x I3
  Tensor3 v;  // I2 x I2 x I3
};

/// Tensor-tensor product: tube (i1,j4) of the result is the sum over i2 of
/// circular convolutions a(i1,i2,:) (*) b(i2,j4,:). Computed as per-slice
/// matrix products in the mode-3 Fourier domain.
Tensor3 t_product(const Tensor3& a, const Tensor3& b);

/// Transposes every frontal slice and reverses the order of slices 2..I3.
Tensor3 conj_transpose(const Tensor3& a);

/// First frontal slice is the i x i identity, the rest are zero.
/// Neutral element of the t-product.
Tensor3 identity_tensor(std::size_t i, std::size_t i3);

/// Factorizes via per-slice SVD in the Fourier domain. Conjugate slice pairs
/// share one SVD so the factors stay exactly conjugate-symmetric (and hence
/// exactly real after the inverse transform).
TsvdFactors t_svd(const Tensor3& a);

constexpr double kTubalRankTol = 1e-10;

/// Number of singular tubes whose Frobenius norm exceeds tol times the
/// largest spectral singular value. Zero tensor has rank 0.
std::size_t tubal_rank(const Tensor3& a, double tol = kTubalRankTol);

/// Tubal tensor nuclear norm: mean over spectral slices of the matrix
/// nuclear norm, (1/I3) * sum_k ||A_hat^(k)||_*.
double tnn(const Tensor3& a);

}  // namespace sturm
