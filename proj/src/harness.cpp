#include "sturm/harness.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "sturm/rng.hpp"
#include "sturm/tsvd.hpp"

namespace sturm {

void SynthSpec::validate() const {
  if (dims[0] == 0 || dims[1] == 0 || dims[2] == 0) {
    throw std::invalid_argument("SynthSpec: all extents must be positive");
  }
  if (sample_count == 0) throw std::invalid_argument("SynthSpec: sample_count must be >= 1");
  if (true_tubal_rank == 0 || true_tubal_rank > std::min(dims[0], dims[1])) {
    throw std::invalid_argument("SynthSpec: true_tubal_rank must be in [1, min(I1,I2)]");
  }
  if (!(density > 0.0 && density <= 1.0)) {
    throw std::invalid_argument("SynthSpec: density must be in (0, 1]");
  }
  if (noise_sigma < 0.0) throw std::invalid_argument("SynthSpec: noise_sigma must be >= 0");
}

namespace {

void fill_normal(Tensor3& t, Rng& rng) {
  for (double& v : t.data()) v = rng.normal();
}

}  // namespace

SyntheticData generate_synthetic(const SynthSpec& spec) {
  spec.validate();
  Rng rng(spec.seed);

  // Draw order is frozen: the two t-product factors, the density mask, then
  // per sample its entries followed by one noise draw. Runs that differ only
  // in sample_count share a common prefix of samples.
  Tensor3 g1(spec.dims[0], spec.true_tubal_rank, spec.dims[2]);
  Tensor3 g2(spec.true_tubal_rank, spec.dims[1], spec.dims[2]);
  fill_normal(g1, rng);
  fill_normal(g2, rng);
  Tensor3 w_star = t_product(g1, g2);

  if (spec.density < 1.0) {
    const std::size_t total = w_star.size();
    const auto kept =
        std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(spec.density *
                                                                       static_cast<double>(total))));
    std::vector<std::size_t> order(total);
    std::iota(order.begin(), order.end(), 0);
    for (std::size_t j = 0; j < kept; ++j) {
      const std::size_t pick = j + static_cast<std::size_t>(rng.below(total - j));
      std::swap(order[j], order[pick]);
    }
    std::vector<bool> keep(total, false);
    for (std::size_t j = 0; j < kept; ++j) keep[order[j]] = true;
    auto& data = w_star.data();
    for (std::size_t i = 0; i < total; ++i) {
      if (!keep[i]) data[i] = 0.0;
    }
  }

  // Sign labels cannot identify the scale of W*, so pin it: unit Frobenius
  // norm. This also makes noise_sigma a noise level relative to the score
  // scale <X, W*> ~ N(0, 1).
  const double w_norm = fro_norm(w_star);
  if (w_norm > 0.0) w_star *= 1.0 / w_norm;

  std::vector<Tensor3> samples;
  std::vector<int> labels;
  samples.reserve(spec.sample_count);
  labels.reserve(spec.sample_count);
  for (std::size_t m = 0; m < spec.sample_count; ++m) {
    Tensor3 x(spec.dims);
    fill_normal(x, rng);
    const double eps = rng.normal();
    const double score = inner_product(x, w_star) + spec.noise_sigma * eps;
    labels.push_back(score >= 0.0 ? 1 : -1);
    samples.push_back(std::move(x));
  }

  return SyntheticData{LabeledDataset(std::move(samples), std::move(labels)),
                       std::move(w_star)};
}

namespace {

struct AxisInterp {
  std::vector<std::size_t> lo;
  std::vector<std::size_t> hi;
  std::vector<double> w;  // weight of hi
};

AxisInterp make_axis(std::size_t in, std::size_t out) {
  AxisInterp ax;
  ax.lo.resize(out);
  ax.hi.resize(out);
  ax.w.resize(out);
  const double scale = static_cast<double>(in) / static_cast<double>(out);
  for (std::size_t j = 0; j < out; ++j) {
    double c = (static_cast<double>(j) + 0.5) * scale - 0.5;
    c = std::clamp(c, 0.0, static_cast<double>(in - 1));
    const auto i0 = static_cast<std::size_t>(c);
    ax.lo[j] = i0;
    ax.hi[j] = std::min(i0 + 1, in - 1);
    ax.w[j] = c - static_cast<double>(i0);
  }
  return ax;
}

}  // namespace

Tensor3 resize_tensor(const Tensor3& a, double beta) {
  if (!(beta > 0.0 && beta <= 1.0)) {
    throw std::invalid_argument("resize_tensor: beta must be in (0, 1], got " +
                                std::to_string(beta));
  }
  const Dims3& in = a.dims();
  Dims3 out;
  for (int n = 0; n < 3; ++n) {
    out[static_cast<std::size_t>(n)] = static_cast<std::size_t>(
        std::ceil(beta * static_cast<double>(in[static_cast<std::size_t>(n)])));
  }
  if (out == in) return a;

  const AxisInterp a1 = make_axis(in[0], out[0]);
  const AxisInterp a2 = make_axis(in[1], out[1]);
  const AxisInterp a3 = make_axis(in[2], out[2]);

  Tensor3 r(out);
  for (std::size_t j1 = 0; j1 < out[0]; ++j1) {
    for (std::size_t j2 = 0; j2 < out[1]; ++j2) {
      for (std::size_t j3 = 0; j3 < out[2]; ++j3) {
        const double w1 = a1.w[j1], w2 = a2.w[j2], w3 = a3.w[j3];
        auto tube = [&](std::size_t i1, std::size_t i2) {
          return a(i1, i2, a3.lo[j3]) * (1.0 - w3) + a(i1, i2, a3.hi[j3]) * w3;
        };
        const double lo = tube(a1.lo[j1], a2.lo[j2]) * (1.0 - w2) +
                          tube(a1.lo[j1], a2.hi[j2]) * w2;
        const double hi = tube(a1.hi[j1], a2.lo[j2]) * (1.0 - w2) +
                          tube(a1.hi[j1], a2.hi[j2]) * w2;
        r(j1, j2, j3) = lo * (1.0 - w1) + hi * w1;
      }
    }
  }
  return r;
}

Tensor3 select_top_features(const Tensor3& w, double eta_percent) {
  if (!(eta_percent > 0.0 && eta_percent <= 100.0)) {
    throw std::invalid_argument("select_top_features: eta must be in (0, 100], got " +
                                std::to_string(eta_percent));
  }
  const std::size_t total = w.size();
  auto count = static_cast<std::size_t>(
      std::ceil(eta_percent * static_cast<double>(total) / 100.0));
  count = std::min(count, total);

  std::vector<std::size_t> order(total);
  std::iota(order.begin(), order.end(), 0);
  const auto& data = w.data();
  const auto by_magnitude = [&](std::size_t a, std::size_t b) {
    const double ma = std::abs(data[a]);
    const double mb = std::abs(data[b]);
    return ma != mb ? ma > mb : a < b;
  };
  if (count < total) {
    std::nth_element(order.begin(),
                     order.begin() + static_cast<std::ptrdiff_t>(count), order.end(),
                     by_magnitude);
  }

  Tensor3 mask(w.dims());
  for (std::size_t j = 0; j < count; ++j) mask.data()[order[j]] = 1.0;
  return mask;
}

double sparsity(const Tensor3& w, double tol) {
  if (tol < 0.0) throw std::invalid_argument("sparsity: tol must be >= 0");
  std::size_t zeros = 0;
  for (double v : w.data()) {
    if (std::abs(v) <= tol) ++zeros;
  }
  return static_cast<double>(zeros) / static_cast<double>(w.size());
}

std::vector<double> default_regularization_grid() {
  return {1e-3, 5e-3, 1e-2, 5e-2, 1e-1, 5e-1, 1.0, 5.0, 10.0, 50.0, 100.0, 500.0, 1000.0};
}

void CvPlan::validate() const {
  if (outer_folds < 2 || inner_folds < 2) {
    throw std::invalid_argument("CvPlan: folds must be >= 2");
  }
  if (tau_grid.empty() || gamma_grid.empty() || beta_grid.empty() || eta_grid.empty()) {
    throw std::invalid_argument("CvPlan: grids must be non-empty");
  }
  for (double b : beta_grid) {
    if (!(b > 0.0 && b <= 1.0)) throw std::invalid_argument("CvPlan: beta values must be in (0, 1]");
  }
  for (double e : eta_grid) {
    if (!(e > 0.0 && e <= 100.0)) {
      throw std::invalid_argument("CvPlan: eta values must be in (0, 100]");
    }
  }
  if (rho <= 0.0 || max_iters < 1 || primal_tol < 0.0) {
    throw std::invalid_argument("CvPlan: invalid solver settings");
  }
}

namespace {

// Per-class shuffle and round-robin deal. Every fold ends up within one
// sample of the class proportions; a class with fewer members than folds
// leaves some fold without it, which is an error.
std::vector<std::vector<std::size_t>> stratified_partition(const std::vector<int>& labels,
                                                           const std::vector<std::size_t>& indices,
                                                           int n_folds, Rng& rng,
                                                           const char* which) {
  std::vector<std::size_t> pos, neg;
  for (std::size_t idx : indices) {
    (labels[idx] == 1 ? pos : neg).push_back(idx);
  }
  const auto shuffle = [&rng](std::vector<std::size_t>& v) {
    for (std::size_t j = v.size(); j > 1; --j) {
      std::swap(v[j - 1], v[static_cast<std::size_t>(rng.below(j))]);
    }
  };
  shuffle(pos);
  shuffle(neg);

  std::vector<std::vector<std::size_t>> folds(static_cast<std::size_t>(n_folds));
  const auto deal = [&folds, n_folds](const std::vector<std::size_t>& v) {
    for (std::size_t i = 0; i < v.size(); ++i) {
      folds[i % static_cast<std::size_t>(n_folds)].push_back(v[i]);
    }
  };
  deal(pos);
  deal(neg);

  for (std::size_t f = 0; f < folds.size(); ++f) {
    int cpos = 0, cneg = 0;
    for (std::size_t idx : folds[f]) (labels[idx] == 1 ? cpos : cneg)++;
    if (cpos == 0 || cneg == 0) {
      throw std::invalid_argument(std::string("run_nested_cv: class ") +
                                  (cpos == 0 ? "+1" : "-1") + " absent from " + which +
                                  " fold " + std::to_string(f + 1) + " of " +
                                  std::to_string(n_folds) + "; use fewer folds");
    }
    std::sort(folds[f].begin(), folds[f].end());
  }
  return folds;
}

LabeledDataset subset(const std::vector<Tensor3>& samples, const std::vector<int>& labels,
                      const std::vector<std::size_t>& indices) {
  std::vector<Tensor3> s;
  std::vector<int> l;
  s.reserve(indices.size());
  l.reserve(indices.size());
  for (std::size_t idx : indices) {
    s.push_back(samples[idx]);
    l.push_back(labels[idx]);
  }
  return LabeledDataset(std::move(s), std::move(l));
}

double masked_accuracy(const Tensor3& w_masked, const std::vector<Tensor3>& samples,
                       const std::vector<int>& labels, const std::vector<std::size_t>& eval) {
  std::size_t correct = 0;
  for (std::size_t idx : eval) {
    if (predict(w_masked, samples[idx]) == labels[idx]) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(eval.size());
}

struct GridCandidate {
  std::size_t beta_index = 0;
  double beta = 1.0, tau = 0.0, gamma = 0.0, eta = 100.0;
  double accuracy = -1.0;
  double sparsity = -1.0;
};

// Total order for winner selection: accuracy desc, sparsity desc, then
// smaller tau, gamma, beta, eta.
bool improves(const GridCandidate& cand, const GridCandidate& best) {
  if (cand.accuracy != best.accuracy) return cand.accuracy > best.accuracy;
  if (cand.sparsity != best.sparsity) return cand.sparsity > best.sparsity;
  if (cand.tau != best.tau) return cand.tau < best.tau;
  if (cand.gamma != best.gamma) return cand.gamma < best.gamma;
  if (cand.beta != best.beta) return cand.beta < best.beta;
  return cand.eta < best.eta;
}

std::pair<double, double> mean_and_std(const std::vector<double>& xs) {
  const double n = static_cast<double>(xs.size());
  const double mean = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
  if (xs.size() < 2) return {mean, 0.0};
  double ss = 0.0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  return {mean, std::sqrt(ss / (n - 1.0))};
}

}  // namespace

CvReport run_nested_cv(const LabeledDataset& data, const CvPlan& plan, std::uint64_t seed) {
  plan.validate();
  const std::size_t m_total = data.sample_count();
  if (m_total < static_cast<std::size_t>(plan.outer_folds)) {
    throw std::invalid_argument("run_nested_cv: " + std::to_string(m_total) +
                                " samples cannot fill " + std::to_string(plan.outer_folds) +
                                " outer folds");
  }

  const std::vector<int>& labels = data.labels();
  std::vector<std::size_t> all(m_total);
  std::iota(all.begin(), all.end(), 0);

  Rng outer_rng(seed);
  CvReport report;
  report.outer_fold_indices =
      stratified_partition(labels, all, plan.outer_folds, outer_rng, "outer");

  // One resize pass per beta; every fold indexes into these.
  std::vector<std::vector<Tensor3>> resized(plan.beta_grid.size());
  for (std::size_t bi = 0; bi < plan.beta_grid.size(); ++bi) {
    resized[bi].reserve(m_total);
    for (const Tensor3& x : data.samples()) {
      resized[bi].push_back(resize_tensor(x, plan.beta_grid[bi]));
    }
  }

  const auto make_config = [&plan](double tau, double gamma) {
    SturmConfig c;
    c.tau = tau;
    c.gamma = gamma;
    c.rho = plan.rho;
    c.max_iters = plan.max_iters;
    c.primal_tol = plan.primal_tol;
    return c;
  };

  for (int f = 0; f < plan.outer_folds; ++f) {
    const std::vector<std::size_t>& test_idx = report.outer_fold_indices[static_cast<std::size_t>(f)];
    std::vector<std::size_t> train_idx;
    for (std::size_t idx : all) {
      if (!std::binary_search(test_idx.begin(), test_idx.end(), idx)) train_idx.push_back(idx);
    }

    Rng inner_rng(seed + 0x9E3779B97F4A7C15ULL * static_cast<std::uint64_t>(f + 1));
    const auto inner_parts =
        stratified_partition(labels, train_idx, plan.inner_folds, inner_rng, "inner");

    GridCandidate best;
    for (std::size_t bi = 0; bi < plan.beta_grid.size(); ++bi) {
      for (double tau : plan.tau_grid) {
        for (double gamma : plan.gamma_grid) {
          // One fit per inner fold serves every eta.
          std::vector<double> acc_sum(plan.eta_grid.size(), 0.0);
          std::vector<double> spars_sum(plan.eta_grid.size(), 0.0);
          for (const auto& val_idx : inner_parts) {
            std::vector<std::size_t> fit_idx;
            for (std::size_t idx : train_idx) {
              if (!std::binary_search(val_idx.begin(), val_idx.end(), idx)) {
                fit_idx.push_back(idx);
              }
            }
            report.audit.push_back(
                {f, FitAuditRecord::Stage::kInnerFit, fit_idx});
            const FitResult fit =
                fit_sturm(subset(resized[bi], labels, fit_idx), make_config(tau, gamma));
            for (std::size_t ei = 0; ei < plan.eta_grid.size(); ++ei) {
              Tensor3 masked = fit.w;
              const Tensor3 mask = select_top_features(fit.w, plan.eta_grid[ei]);
              for (std::size_t i = 0; i < masked.size(); ++i) {
                masked.data()[i] *= mask.data()[i];
              }
              acc_sum[ei] += masked_accuracy(masked, resized[bi], labels, val_idx);
              spars_sum[ei] += sparsity(masked);
            }
          }
          const double n_inner = static_cast<double>(inner_parts.size());
          for (std::size_t ei = 0; ei < plan.eta_grid.size(); ++ei) {
            GridCandidate cand;
            cand.beta_index = bi;
            cand.beta = plan.beta_grid[bi];
            cand.tau = tau;
            cand.gamma = gamma;
            cand.eta = plan.eta_grid[ei];
            cand.accuracy = acc_sum[ei] / n_inner;
            cand.sparsity = spars_sum[ei] / n_inner;
            if (improves(cand, best)) best = cand;
          }
        }
      }
    }

    report.audit.push_back({f, FitAuditRecord::Stage::kOuterRefit, train_idx});
    const FitResult refit =
        fit_sturm(subset(resized[best.beta_index], labels, train_idx),
                  make_config(best.tau, best.gamma));
    Tensor3 masked = refit.w;
    const Tensor3 mask = select_top_features(refit.w, best.eta);
    for (std::size_t i = 0; i < masked.size(); ++i) masked.data()[i] *= mask.data()[i];

    CvFoldOutcome outcome;
    outcome.fold = f;
    outcome.tau = best.tau;
    outcome.gamma = best.gamma;
    outcome.beta = best.beta;
    outcome.eta = best.eta;
    outcome.accuracy = masked_accuracy(masked, resized[best.beta_index], labels, test_idx);
    outcome.sparsity = sparsity(masked);
    outcome.iterations = refit.iterations_run;
    report.folds.push_back(outcome);
  }

  std::vector<double> accs, spars;
  for (const auto& fo : report.folds) {
    accs.push_back(fo.accuracy);
    spars.push_back(fo.sparsity);
  }
  std::tie(report.mean_accuracy, report.std_accuracy) = mean_and_std(accs);
  std::tie(report.mean_sparsity, report.std_sparsity) = mean_and_std(spars);
  return report;
}

BenchResult bench_fit(const Dims3& dims, std::size_t sample_count, int iters,
                      std::uint64_t seed) {
  if (iters < 2) throw std::invalid_argument("bench_fit: need at least 2 iterations");
  SynthSpec spec;
  spec.dims = dims;
  spec.sample_count = sample_count;
  spec.true_tubal_rank = std::min<std::size_t>(2, std::min(dims[0], dims[1]));
  spec.density = 1.0;
  spec.noise_sigma = 0.1;
  spec.seed = seed;
  const SyntheticData synth = generate_synthetic(spec);

  SturmConfig config;
  config.tau = 0.01;
  config.gamma = 0.01;
  config.primal_tol = 0.0;  // fixed iteration count

  config.max_iters = 1;
  const double t1 = fit_sturm(synth.dataset, config).wall_time_seconds;
  config.max_iters = iters;
  const double tk = fit_sturm(synth.dataset, config).wall_time_seconds;

  BenchResult r;
  r.dims = dims;
  r.sample_count = sample_count;
  r.iters = iters;
  r.per_iter_seconds = (tk - t1) / static_cast<double>(iters - 1);
  return r;
}

}  // namespace sturm
