#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>

#include "oracles.hpp"
#include "sturm/harness.hpp"
#include "sturm/rng.hpp"
#include "sturm/solver.hpp"
#include "sturm/tsvd.hpp"

using sturm::Dims3;
using sturm::LabeledDataset;
using sturm::Rng;
using sturm::SturmConfig;
using sturm::Tensor3;

namespace {

LabeledDataset random_dataset(const Dims3& dims, std::size_t m, Rng& rng) {
  std::vector<Tensor3> samples;
  std::vector<int> labels;
  for (std::size_t i = 0; i < m; ++i) {
    samples.push_back(oracle::random_tensor(dims, rng));
    labels.push_back(rng.uniform() < 0.5 ? -1 : 1);
  }
  return LabeledDataset(std::move(samples), std::move(labels));
}

Eigen::MatrixXd design_matrix(const LabeledDataset& data, double alpha) {
  const auto m = static_cast<Eigen::Index>(data.sample_count());
  const auto n = static_cast<Eigen::Index>(data.samples().front().size());
  Eigen::MatrixXd x(m, n);
  for (Eigen::Index i = 0; i < m; ++i) {
    const auto& d = data.samples()[static_cast<std::size_t>(i)].data();
    for (Eigen::Index j = 0; j < n; ++j) x(i, j) = alpha * d[static_cast<std::size_t>(j)];
  }
  return x;
}

// Samples scaled so that <X_m, w0> is exactly +1 or -1: a noiseless system
// the unregularized fit can reproduce.
LabeledDataset consistent_dataset(const Dims3& dims, std::size_t m, const Tensor3& w0,
                                  Rng& rng) {
  std::vector<Tensor3> samples;
  std::vector<int> labels;
  while (samples.size() < m) {
    Tensor3 x = oracle::random_tensor(dims, rng);
    const double c = sturm::inner_product(x, w0);
    if (std::abs(c) < 0.2) continue;
    samples.push_back(x * (1.0 / std::abs(c)));
    labels.push_back(c > 0.0 ? 1 : -1);
  }
  return LabeledDataset(std::move(samples), std::move(labels));
}

}  // namespace

TEST_CASE("data solve on the scalar basis-vector case") {
  Tensor3 e1(Dims3{3, 3, 3});
  e1(0, 0, 0) = 1.0;
  const LabeledDataset data({e1}, {1});
  const sturm::DataSolveHandle handle(data, 1.0);

  Eigen::VectorXd r = Eigen::VectorXd::Zero(27);
  r(0) = 1.0;
  const Eigen::VectorXd v = handle.solve(r);
  CHECK(v(0) == doctest::Approx(0.5));
  for (Eigen::Index i = 1; i < 27; ++i) CHECK(v(i) == doctest::Approx(0.0));
}

TEST_CASE("inversion-lemma route matches a dense direct solve") {
  Rng rng(51);
  const LabeledDataset data = random_dataset({3, 3, 3}, 5, rng);
  const double rho = 0.7;
  const sturm::DataSolveHandle handle(data, rho);
  CHECK(handle.uses_inversion_lemma());

  Eigen::VectorXd r(27);
  for (Eigen::Index i = 0; i < 27; ++i) r(i) = rng.normal();

  const Eigen::VectorXd got = handle.solve(r);
  const Eigen::VectorXd want = oracle::dense_ridge_solve(design_matrix(data, 1.0), rho, r);
  CHECK((got - want).norm() / want.norm() < 1e-9);
}

TEST_CASE("dense route engages when samples outnumber features") {
  Rng rng(52);
  const LabeledDataset data = random_dataset({2, 2, 2}, 12, rng);
  const sturm::DataSolveHandle handle(data, 1.3);
  CHECK_FALSE(handle.uses_inversion_lemma());

  Eigen::VectorXd r(8);
  for (Eigen::Index i = 0; i < 8; ++i) r(i) = rng.normal();
  const Eigen::VectorXd want = oracle::dense_ridge_solve(design_matrix(data, 1.0), 1.3, r);
  CHECK((handle.solve(r) - want).norm() / want.norm() < 1e-9);
}

TEST_CASE("zero right-hand side solves to zero") {
  Rng rng(53);
  const LabeledDataset data = random_dataset({2, 3, 2}, 4, rng);
  const sturm::DataSolveHandle handle(data, 1.0);
  CHECK(handle.solve(Eigen::VectorXd::Zero(12)).norm() == 0.0);
}

TEST_CASE("update_A collapses to W - P' when all samples are zero") {
  std::vector<Tensor3> samples(3, Tensor3(Dims3{2, 2, 3}));
  const LabeledDataset data(samples, {1, -1, 1});
  const sturm::DataSolveHandle handle(data, 2.0);

  Rng rng(54);
  const Tensor3 w = oracle::random_tensor({2, 2, 3}, rng);
  const Tensor3 p = oracle::random_tensor({2, 2, 3}, rng);
  const Tensor3 a = sturm::update_A(handle, w, p);
  CHECK(sturm::fro_norm(a - (w - p)) < 1e-12);
}

TEST_CASE("update_A closed form for a single unit-norm sample") {
  Rng rng(55);
  Tensor3 x = oracle::random_tensor({3, 2, 2}, rng);
  x *= 1.0 / sturm::fro_norm(x);
  const LabeledDataset data({x}, {1});
  const sturm::DataSolveHandle handle(data, 1.0, 1.0);

  const Tensor3 zero(Dims3{3, 2, 2});
  const Tensor3 a = sturm::update_A(handle, zero, zero);
  CHECK(sturm::fro_norm(a - 0.5 * x) < 1e-10);

  // dense oracle agrees
  const Eigen::VectorXd r = design_matrix(data, 1.0).transpose() * Eigen::VectorXd::Ones(1);
  const Eigen::VectorXd want = oracle::dense_ridge_solve(design_matrix(data, 1.0), 1.0, r);
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a.data()[i] == doctest::Approx(want(static_cast<Eigen::Index>(i))).epsilon(1e-9));
  }
}

TEST_CASE("update_A satisfies its normal equations on a larger instance") {
  Rng rng(56);
  const LabeledDataset data = random_dataset({8, 8, 8}, 10, rng);
  const double alpha = sturm::resolve_alpha(SturmConfig{}, data.sample_dims());
  const sturm::DataSolveHandle handle(data, 1.0, alpha);

  const Tensor3 w = oracle::random_tensor({8, 8, 8}, rng);
  const Tensor3 p = oracle::random_tensor({8, 8, 8}, rng);
  const Tensor3 a = sturm::update_A(handle, w, p);

  const Eigen::Map<const Eigen::VectorXd> av(a.data().data(),
                                             static_cast<Eigen::Index>(a.size()));
  const Tensor3 shift = w - p;
  const Eigen::Map<const Eigen::VectorXd> sv(shift.data().data(),
                                             static_cast<Eigen::Index>(shift.size()));
  const Eigen::VectorXd rhs = handle.design_t_labels() + handle.rho() * sv;
  CHECK(handle.normal_eq_residual(av, rhs) < 1e-8);
}

TEST_CASE("config validation") {
  SturmConfig c;
  c.tau = -1.0;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c = SturmConfig{};
  c.rho = 0.0;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c = SturmConfig{};
  c.max_iters = 0;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c = SturmConfig{};
  c.alpha = -2.0;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
}

TEST_CASE("balanced contradictory labels drive W to zero") {
  // Each sample appears with both labels, so X^T y = 0 and the regularized
  // optimum is the zero tensor.
  Rng rng(57);
  std::vector<Tensor3> samples;
  std::vector<int> labels;
  for (int i = 0; i < 5; ++i) {
    const Tensor3 x = oracle::random_tensor({3, 3, 2}, rng);
    samples.push_back(x);
    labels.push_back(1);
    samples.push_back(x);
    labels.push_back(-1);
  }
  const LabeledDataset data(std::move(samples), std::move(labels));

  SturmConfig config;
  config.tau = 0.5;
  config.gamma = 0.5;
  config.max_iters = 300;
  config.primal_tol = 1e-7;
  const sturm::FitResult result = sturm::fit_sturm(data, config);
  CHECK(sturm::fro_norm(result.w) < 1e-6);
}

TEST_CASE("unregularized fit reproduces a consistent noiseless system") {
  Rng rng(58);
  const Dims3 dims{3, 3, 3};
  const Tensor3 w0 = oracle::random_tensor(dims, rng);
  const LabeledDataset data = consistent_dataset(dims, 30, w0, rng);

  SturmConfig config;
  config.tau = 0.0;
  config.gamma = 0.0;
  config.max_iters = 500;
  config.primal_tol = 0.0;
  const sturm::FitResult result = sturm::fit_sturm(data, config);
  CHECK(result.iterations_run == 500);

  for (std::size_t m = 0; m < data.sample_count(); ++m) {
    const double pred = sturm::inner_product(data.samples()[m], result.w);
    CHECK(std::abs(pred - static_cast<double>(data.labels()[m])) < 1e-4);
  }
}

TEST_CASE("tubal regularization helps on a low-tubal-rank ground truth") {
  sturm::SynthSpec spec;
  spec.dims = {10, 10, 10};
  spec.sample_count = 100;
  spec.true_tubal_rank = 2;
  spec.density = 0.2;
  spec.noise_sigma = 0.1;
  spec.seed = 42;
  const sturm::SyntheticData synth = sturm::generate_synthetic(spec);

  SturmConfig sturm_config;
  sturm_config.tau = 0.05;
  sturm_config.gamma = 0.01;
  sturm_config.max_iters = 150;
  sturm_config.primal_tol = 1e-6;

  SturmConfig lasso_config = sturm_config;  // matched gamma and budget
  lasso_config.tau = 0.0;

  const Tensor3 w_sturm = sturm::fit_sturm(synth.dataset, sturm_config).w;
  const Tensor3 w_lasso = sturm::fit_sturm(synth.dataset, lasso_config).w;

  const double base = sturm::fro_norm(synth.w_star);
  const double err_sturm = sturm::fro_norm(w_sturm - synth.w_star) / base;
  const double err_lasso = sturm::fro_norm(w_lasso - synth.w_star) / base;
  CHECK(err_sturm <= err_lasso);
}

TEST_CASE("fit is deterministic") {
  Rng rng(59);
  const LabeledDataset data = random_dataset({4, 4, 4}, 20, rng);
  SturmConfig config;
  config.tau = 0.01;
  config.gamma = 0.01;
  config.max_iters = 50;
  config.primal_tol = 0.0;
  config.record_trace = true;

  const sturm::FitResult r1 = sturm::fit_sturm(data, config);
  const sturm::FitResult r2 = sturm::fit_sturm(data, config);
  CHECK(r1.w.data() == r2.w.data());
  CHECK(r1.objective_trace == r2.objective_trace);
  CHECK(r1.residual_a_trace == r2.residual_a_trace);
  CHECK(r1.residual_b_trace == r2.residual_b_trace);
}

TEST_CASE("matrix-variate case agrees with a three-operator splitting solver") {
  Rng rng(60);
  const Dims3 dims{5, 5, 1};
  const LabeledDataset data = random_dataset(dims, 20, rng);

  SturmConfig config;
  config.tau = 0.5;
  config.gamma = 0.3;
  config.alpha = 1.0;
  config.max_iters = 4000;
  config.primal_tol = 0.0;
  const sturm::FitResult result = sturm::fit_sturm(data, config);
  const double f_admm = sturm::objective_value(result.w, data, config);

  Eigen::VectorXd y(20);
  for (Eigen::Index i = 0; i < 20; ++i) {
    y(i) = static_cast<double>(data.labels()[static_cast<std::size_t>(i)]);
  }
  // The tube-contiguous vectorization reads a 5x5x1 tensor row-major, so the
  // oracle's column-major matrix variable is the transpose; nuclear and l1
  // norms are transpose-invariant, making the objectives comparable.
  const double f_oracle = oracle::matrix_regression_best_objective(
      design_matrix(data, 1.0), y, 1.0, config.tau, config.gamma, 5, 5, 20000);

  CHECK(std::abs(f_admm - f_oracle) / f_oracle < 1e-3);
}

TEST_CASE("predict applies the sign rule with ties to +1") {
  Rng rng(61);
  const Tensor3 x = oracle::random_tensor({2, 3, 2}, rng);
  CHECK(sturm::predict(Tensor3(Dims3{2, 3, 2}), x) == 1);
  CHECK(sturm::predict(x, x) == 1);
  CHECK(sturm::predict(-1.0 * x, x) == -1);
  CHECK_THROWS_AS(sturm::predict(Tensor3(Dims3{2, 2, 2}), x), std::invalid_argument);
}

TEST_CASE("objective value") {
  Rng rng(62);
  const LabeledDataset data = random_dataset({3, 4, 2}, 6, rng);

  SUBCASE("zero coefficients leave only the label term") {
    SturmConfig config;
    config.tau = 0.3;
    config.gamma = 0.2;
    const double alpha = sturm::resolve_alpha(config, data.sample_dims());
    double want = 0.0;
    for (int label : data.labels()) want += static_cast<double>(label * label);
    want *= 0.5 * alpha * alpha;
    CHECK(sturm::objective_value(Tensor3(Dims3{3, 4, 2}), data, config) ==
          doctest::Approx(want));
  }

  SUBCASE("perfect fit with no regularization is near zero") {
    const Dims3 dims{3, 3, 3};
    Rng rng2(63);
    const Tensor3 w0 = oracle::random_tensor(dims, rng2);
    const LabeledDataset consistent = consistent_dataset(dims, 10, w0, rng2);
    SturmConfig config;
    config.alpha = 1.0;
    CHECK(sturm::objective_value(w0, consistent, config) < 1e-12);
  }

  SUBCASE("matches a composition of oracle routes") {
    SturmConfig config;
    config.tau = 0.7;
    config.gamma = 0.4;
    const Tensor3 w = oracle::random_tensor({3, 4, 2}, rng);
    const double alpha = sturm::resolve_alpha(config, data.sample_dims());
    double loss = 0.0;
    for (std::size_t m = 0; m < data.sample_count(); ++m) {
      const double r =
          static_cast<double>(data.labels()[m]) - oracle::inner_product(data.samples()[m], w);
      loss += r * r;
    }
    const double want =
        0.5 * alpha * alpha * loss + config.tau * oracle::tnn(w) + config.gamma * oracle::l1_norm(w);
    CHECK(sturm::objective_value(w, data, config) == doctest::Approx(want).epsilon(1e-10));
  }
}

TEST_CASE("residual traces reflect the stopping rule") {
  Rng rng(64);
  const LabeledDataset data = random_dataset({4, 4, 3}, 15, rng);
  SturmConfig config;
  config.tau = 0.01;
  config.gamma = 0.01;
  config.max_iters = 400;
  config.primal_tol = 1e-5;
  const sturm::FitResult result = sturm::fit_sturm(data, config);
  REQUIRE(result.iterations_run >= 1);
  CHECK(static_cast<int>(result.residual_a_trace.size()) == result.iterations_run);
  CHECK(static_cast<int>(result.residual_b_trace.size()) == result.iterations_run);
  if (result.converged) {
    const double scale = std::max(1.0, sturm::fro_norm(result.w));
    CHECK(result.residual_a_trace.back() / scale < config.primal_tol);
    CHECK(result.residual_b_trace.back() / scale < config.primal_tol);
  }
}
