#pragma once

#include "sturm/tensor3.hpp"

namespace sturm {

/// Proximal operator of mu * TNN: per-slice singular value shrinkage
/// (s - mu)_+ in the mode-3 Fourier domain. Minimizes
///   mu * tnn(z) + 0.5 * ||z - t||_F^2.
Tensor3 prox_tnn(const Tensor3& t, double mu);

/// Proximal operator of mu * l1: elementwise sign(t) * max(|t| - mu, 0).
Tensor3 prox_l1(const Tensor3& t, double mu);

}  // namespace sturm
