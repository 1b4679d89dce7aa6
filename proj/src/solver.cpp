#include "sturm/solver.hpp"

#include <chrono>
#include <cmath>

#include "sturm/errors.hpp"
#include "sturm/prox.hpp"
#include "sturm/tsvd.hpp"

namespace sturm {

void SturmConfig::validate() const {
  if (tau < 0.0) throw std::invalid_argument("SturmConfig: tau must be >= 0");
  if (gamma < 0.0) throw std::invalid_argument("SturmConfig: gamma must be >= 0");
  if (rho <= 0.0) throw std::invalid_argument("SturmConfig: rho must be > 0");
  if (alpha && *alpha <= 0.0) throw std::invalid_argument("SturmConfig: alpha must be > 0");
  if (max_iters < 1) throw std::invalid_argument("SturmConfig: max_iters must be >= 1");
  if (primal_tol < 0.0) throw std::invalid_argument("SturmConfig: primal_tol must be >= 0");
}

double resolve_alpha(const SturmConfig& config, const Dims3& dims) {
  if (config.alpha) return *config.alpha;
  return std::sqrt(static_cast<double>(std::max(dims[0], dims[1]) * dims[2]));
}

namespace {

Eigen::Map<const Eigen::VectorXd> as_vector(const Tensor3& t) {
  return {t.data().data(), static_cast<Eigen::Index>(t.size())};
}

}  // namespace

DataSolveHandle::DataSolveHandle(const LabeledDataset& data, double rho, double alpha)
    : rho_(rho) {
  if (rho <= 0.0) throw std::invalid_argument("DataSolveHandle: rho must be > 0");
  if (alpha <= 0.0) throw std::invalid_argument("DataSolveHandle: alpha must be > 0");

  const auto m = static_cast<Eigen::Index>(data.sample_count());
  const auto n = static_cast<Eigen::Index>(data.samples().front().size());

  x_.resize(m, n);
  y_.resize(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    x_.row(i) = alpha * as_vector(data.samples()[static_cast<std::size_t>(i)]).transpose();
    y_(i) = alpha * static_cast<double>(data.labels()[static_cast<std::size_t>(i)]);
  }
  xty_ = x_.transpose() * y_;

  woodbury_ = m < n;
  if (woodbury_) {
    Eigen::MatrixXd gram = x_ * x_.transpose();
    gram.diagonal().array() += rho_;
    llt_.compute(gram);
  } else {
    Eigen::MatrixXd normal = x_.transpose() * x_;
    normal.diagonal().array() += rho_;
    llt_.compute(normal);
  }
  if (llt_.info() != Eigen::Success) {
    throw NumericError("DataSolveHandle: Cholesky factorization failed (non-finite input?)");
  }
}

Eigen::VectorXd DataSolveHandle::solve(const Eigen::VectorXd& r) const {
  if (r.size() != x_.cols()) {
    throw std::invalid_argument("DataSolveHandle::solve: rhs length " +
                                std::to_string(r.size()) + ", expected " +
                                std::to_string(x_.cols()));
  }
  if (woodbury_) {
    // (X^T X + rho I)^{-1} r = (r - X^T (rho I + X X^T)^{-1} X r) / rho
    return (r - x_.transpose() * llt_.solve(x_ * r)) / rho_;
  }
  return llt_.solve(r);
}

double DataSolveHandle::normal_eq_residual(const Eigen::VectorXd& v,
                                           const Eigen::VectorXd& r) const {
  const Eigen::VectorXd lhs = x_.transpose() * (x_ * v) + rho_ * v;
  return (lhs - r).norm() / std::max(1.0, r.norm());
}

DataSolveHandle precompute_data_solve(const LabeledDataset& data, double rho, double alpha) {
  return DataSolveHandle(data, rho, alpha);
}

Tensor3 update_A(const DataSolveHandle& handle, const Tensor3& w, const Tensor3& p_scaled) {
  const Tensor3 shift = w - p_scaled;
  const Eigen::VectorXd rhs = handle.design_t_labels() + handle.rho() * as_vector(shift);
  const Eigen::VectorXd a = handle.solve(rhs);
  return tensorize3(std::vector<double>(a.data(), a.data() + a.size()), w.dims());
}

int predict(const Tensor3& w, const Tensor3& x) {
  return inner_product(x, w) >= 0.0 ? 1 : -1;
}

double objective_value(const Tensor3& w, const LabeledDataset& data,
                       const SturmConfig& config) {
  const double alpha = resolve_alpha(config, data.sample_dims());
  double loss = 0.0;
  for (std::size_t m = 0; m < data.sample_count(); ++m) {
    const double r = static_cast<double>(data.labels()[m]) - inner_product(data.samples()[m], w);
    loss += r * r;
  }
  double value = 0.5 * alpha * alpha * loss;
  if (config.tau > 0.0) value += config.tau * tnn(w);
  if (config.gamma > 0.0) value += config.gamma * l1_norm(w);
  return value;
}

FitResult fit_sturm(const LabeledDataset& data, const SturmConfig& config) {
  config.validate();
  const auto start = std::chrono::steady_clock::now();

  const Dims3 dims = data.sample_dims();
  const double alpha = resolve_alpha(config, dims);
  const double rho = config.rho;
  const DataSolveHandle handle(data, rho, alpha);

  Tensor3 a(dims), b(dims), w(dims), p(dims), q(dims);

  FitResult result;
  result.residual_a_trace.reserve(static_cast<std::size_t>(config.max_iters));
  result.residual_b_trace.reserve(static_cast<std::size_t>(config.max_iters));
  if (config.check_normal_eq) result.max_normal_eq_residual = 0.0;

  for (int k = 0; k < config.max_iters; ++k) {
    a = update_A(handle, w, p);
    if (config.check_normal_eq) {
      const Eigen::VectorXd rhs = handle.design_t_labels() + rho * as_vector(w - p);
      const double res = handle.normal_eq_residual(as_vector(a), rhs);
      result.max_normal_eq_residual = std::max(*result.max_normal_eq_residual, res);
    }

    b = prox_tnn(w - q, config.tau / rho);
    w = prox_l1((a + p + b + q) * 0.5, config.gamma / (2.0 * rho));
    p += a - w;
    q += b - w;

    const double res_a = fro_norm(a - w);
    const double res_b = fro_norm(b - w);
    const double w_norm = fro_norm(w);
    if (!std::isfinite(res_a) || !std::isfinite(res_b) || !std::isfinite(w_norm)) {
      throw NumericError("fit_sturm: non-finite state at iteration " + std::to_string(k + 1));
    }

    result.residual_a_trace.push_back(res_a);
    result.residual_b_trace.push_back(res_b);
    if (config.record_trace) {
      result.objective_trace.push_back(objective_value(w, data, config));
    }
    result.iterations_run = k + 1;

    const double scale = std::max(1.0, w_norm);
    if (config.primal_tol > 0.0 && res_a / scale < config.primal_tol &&
        res_b / scale < config.primal_tol) {
      result.converged = true;
      break;
    }
  }

  result.w = std::move(w);
  result.wall_time_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

}  // namespace sturm
