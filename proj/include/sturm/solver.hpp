#pragma once

#include <optional>
#include <vector>

#include <Eigen/Cholesky>
#include <Eigen/Dense>

#include "sturm/tensor3.hpp"

namespace sturm {

/// Hyperparameters of the tubal-regularized sparse regression fit.
struct SturmConfig {
  double tau = 0.0;    // TNN weight, >= 0
  double gamma = 0.0;  // l1 weight, >= 0
  double rho = 1.0;    // augmented-Lagrangian constant, > 0

  /// Loss-scaling factor. Enters as alpha^2 on the squared loss, i.e. the
  /// design matrix rows and labels are scaled by alpha. Unset means
  /// sqrt(max(I1,I2) * I3) for the sample shape at hand.
  std::optional<double> alpha;

  int max_iters = 200;
  double primal_tol = 1e-4;  // 0 disables early stopping (fixed-iteration run)

  bool record_trace = false;     // per-iteration objective (costs one spectral SVD pass)
  bool check_normal_eq = false;  // per-iteration residual of the data-solve normal equations

  void validate() const;
};

double resolve_alpha(const SturmConfig& config, const Dims3& dims);

struct FitResult {
  Tensor3 w;

  /// Objective value after each iteration; empty unless record_trace.
  std::vector<double> objective_trace;
  /// ||A - W||_F and ||B - W||_F after each iteration (unnormalized).
  std::vector<double> residual_a_trace;
  std::vector<double> residual_b_trace;

  bool converged = false;
  int iterations_run = 0;
  double wall_time_seconds = 0.0;

  /// Largest relative normal-equation residual seen across iterations;
  /// present only when check_normal_eq was set.
  std::optional<double> max_normal_eq_residual;
};

/// Pre-factored solver for (X^T X + rho I) v = r, where X is the M x I design
/// matrix of alpha-scaled vectorized samples. For M < I the factorization is
/// of the M x M matrix rho I + X X^T and solves go through the inversion
/// lemma, so memory stays O(IM + M^2). For M >= I the I x I matrix is
/// factored directly.
class DataSolveHandle {
 public:
  DataSolveHandle(const LabeledDataset& data, double rho, double alpha = 1.0);

  Eigen::VectorXd solve(const Eigen::VectorXd& r) const;

  const Eigen::MatrixXd& design() const { return x_; }     // alpha-scaled X
  const Eigen::VectorXd& labels() const { return y_; }     // alpha-scaled y
  const Eigen::VectorXd& design_t_labels() const { return xty_; }
  double rho() const { return rho_; }
  bool uses_inversion_lemma() const { return woodbury_; }

  /// Relative residual ||(X^T X + rho I) v - r|| / max(1, ||r||).
  double normal_eq_residual(const Eigen::VectorXd& v, const Eigen::VectorXd& r) const;

 private:
  Eigen::MatrixXd x_;
  Eigen::VectorXd y_;
  Eigen::VectorXd xty_;
  double rho_;
  bool woodbury_;
  Eigen::LLT<Eigen::MatrixXd> llt_;
};

DataSolveHandle precompute_data_solve(const LabeledDataset& data, double rho,
                                      double alpha = 1.0);

/// One least-squares block update: fold of
///   (X^T X + rho I)^{-1} (X^T y + rho * vec(w - p_scaled)).
Tensor3 update_A(const DataSolveHandle& handle, const Tensor3& w, const Tensor3& p_scaled);

/// Alternating-direction solve of
///   min_W (alpha^2/2) sum_m (y_m - <X_m, W>)^2 + tau * tnn(W) + gamma * ||W||_1
/// with consensus splitting across a least-squares block, a TNN block, and an
/// l1 block, scaled dual ascent, and dual-criterion stopping (primal
/// residuals normalized by max(1, ||W||_F) against primal_tol, capped at
/// max_iters).
FitResult fit_sturm(const LabeledDataset& data, const SturmConfig& config);

/// Sign rule: +1 when <x, w> >= 0, else -1. Exact zero maps to +1.
int predict(const Tensor3& w, const Tensor3& x);

/// Objective at w: (alpha^2/2) sum_m (y_m - <X_m, w>)^2 + tau*tnn + gamma*l1.
double objective_value(const Tensor3& w, const LabeledDataset& data, const SturmConfig& config);

}  // namespace sturm
