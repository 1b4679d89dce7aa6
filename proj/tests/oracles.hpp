// Independent reference computations for tests. Everything here sticks to
// definition-level routes: triple loops, naive O(I3^2) transforms, literal
// circular convolution, and eigendecomposition-based singular values, so a
// bug in the library's FFT/SVD path cannot hide in the expected values.
#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "sturm/rng.hpp"
#include "sturm/spectral.hpp"
#include "sturm/tensor3.hpp"

namespace oracle {

using sturm::Dims3;
using sturm::Rng;
using sturm::SpectralTensor3;
using sturm::Tensor3;

Tensor3 random_tensor(const Dims3& dims, Rng& rng);

// Triple-loop reductions.
double inner_product(const Tensor3& a, const Tensor3& b);
double l1_norm(const Tensor3& a);
double fro_norm(const Tensor3& a);

// Naive O(I3^2) transforms, summed straight from the definition.
SpectralTensor3 dft_mode3(const Tensor3& a);
std::vector<std::complex<double>> idft_mode3(const SpectralTensor3& s);

// Literal tube-wise circular convolution.
Tensor3 t_product(const Tensor3& a, const Tensor3& b);

// Descending singular values via the eigendecomposition of A^H A.
Eigen::VectorXd singular_values(const Eigen::MatrixXcd& m);

// Naive-DFT + eigendecomposition tubal nuclear norm.
double tnn(const Tensor3& a);

// Projection of a matrix onto the spectral-norm ball of radius mu,
// singular vectors recovered from the Gram eigendecomposition.
Eigen::MatrixXcd project_spectral_ball(const Eigen::MatrixXcd& a, double mu);

// TNN proximal point by projected gradient on the dual (per spectral slice,
// the dual is a spectral-ball projection problem), run to a certified fixed
// point. Shares no transform or SVD code with the library route.
Tensor3 prox_tnn(const Tensor3& t, double mu, double fix_tol = 1e-10, int max_iters = 64);

// Objective of the TNN proximal problem, all oracle routes.
double prox_tnn_objective(const Tensor3& z, const Tensor3& t, double mu);

// Dense direct solve of (X^T X + rho I) v = r.
Eigen::VectorXd dense_ridge_solve(const Eigen::MatrixXd& x, double rho,
                                  const Eigen::VectorXd& r);

// Three-operator (Davis-Yin) splitting for
//   min (alpha^2/2)||y - X w||^2 + tau ||W||_* + gamma ||W||_1
// over matrices (the I3 = 1 case). Returns the best objective seen.
double matrix_regression_best_objective(const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                                        double alpha, double tau, double gamma,
                                        Eigen::Index rows, Eigen::Index cols, int iters);

}  // namespace oracle
