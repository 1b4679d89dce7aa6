#pragma once

#include <cstdint>
#include <vector>

#include "sturm/solver.hpp"
#include "sturm/tensor3.hpp"

namespace sturm {

/// Recipe for a synthetic regression problem with known ground truth:
/// W* is a t-product of two random tensors (tubal rank <= true_tubal_rank),
/// masked down to `density` nonzeros and normalized to unit Frobenius norm
/// (sign labels are scale-invariant); labels are signs of noisy inner
/// products. Fully deterministic per seed.
struct SynthSpec {
  Dims3 dims{0, 0, 0};
  std::size_t sample_count = 0;
  std::size_t true_tubal_rank = 1;
  double density = 1.0;      // fraction of entries of W* kept nonzero
  double noise_sigma = 0.0;  // stddev of label noise before the sign
  std::uint64_t seed = 0;

  void validate() const;
};

struct SyntheticData {
  LabeledDataset dataset;
  Tensor3 w_star;
};

SyntheticData generate_synthetic(const SynthSpec& spec);

/// Shrinks each mode to ceil(beta * extent) by trilinear interpolation with
/// edge clamping. beta = 1 returns the input exactly.
Tensor3 resize_tensor(const Tensor3& a, double beta);

/// 0/1 mask selecting the ceil(eta% * size / 100) largest-magnitude entries.
/// Ties break toward the lower linear (tube-contiguous) index.
Tensor3 select_top_features(const Tensor3& w, double eta_percent);

/// Fraction of entries with |w| <= tol. Exact zeros by default, since the
/// l1 proximal step produces exact zeros.
double sparsity(const Tensor3& w, double tol = 0.0);

std::vector<double> default_regularization_grid();  // 1e-3 .. 1e3, 13 points

/// Nested cross-validation plan. Grid defaults follow the standard protocol:
/// 13-point tau/gamma grids, resize factors {0.3,0.5,0.7}, selection
/// percentages {1,5,10,50,100}. Solver settings apply to every fit.
struct CvPlan {
  int outer_folds = 10;
  int inner_folds = 9;
  std::vector<double> tau_grid = default_regularization_grid();
  std::vector<double> gamma_grid = default_regularization_grid();
  std::vector<double> beta_grid{0.3, 0.5, 0.7};
  std::vector<double> eta_grid{1.0, 5.0, 10.0, 50.0, 100.0};

  double rho = 1.0;
  int max_iters = 200;
  double primal_tol = 1e-4;

  void validate() const;
};

struct CvFoldOutcome {
  int fold = 0;
  double tau = 0.0;
  double gamma = 0.0;
  double beta = 1.0;
  double eta = 100.0;
  double accuracy = 0.0;  // fraction correct on the outer test fold
  double sparsity = 0.0;  // of the masked refit coefficients
  int iterations = 0;     // iterations of the winning refit
};

/// Which samples a fit touched; lets tests audit that hyperparameter choices
/// never saw the outer test fold.
struct FitAuditRecord {
  enum class Stage { kInnerFit, kOuterRefit };
  int outer_fold = 0;
  Stage stage = Stage::kInnerFit;
  std::vector<std::size_t> training_indices;  // global sample indices
};

struct CvReport {
  std::vector<CvFoldOutcome> folds;
  double mean_accuracy = 0.0;
  double std_accuracy = 0.0;
  double mean_sparsity = 0.0;
  double std_sparsity = 0.0;
  std::vector<std::vector<std::size_t>> outer_fold_indices;
  std::vector<FitAuditRecord> audit;
};

/// Stratified nested cross-validation: outer folds preserve class
/// proportions within one sample; each outer fold picks (beta, tau, gamma,
/// eta) by inner-CV accuracy, refits on the outer-training set, and scores
/// the held-out fold. Accuracy ties break toward larger sparsity, then
/// smaller tau, gamma, beta, eta.
CvReport run_nested_cv(const LabeledDataset& data, const CvPlan& plan, std::uint64_t seed);

/// Mean wall time of one solver iteration at the given problem size,
/// measured as (time of `iters` iterations - time of 1 iteration) /
/// (iters - 1) so setup and warm-up drop out.
struct BenchResult {
  Dims3 dims{0, 0, 0};
  std::size_t sample_count = 0;
  int iters = 0;
  double per_iter_seconds = 0.0;
};

BenchResult bench_fit(const Dims3& dims, std::size_t sample_count, int iters,
                      std::uint64_t seed = 0);

}  // namespace sturm
