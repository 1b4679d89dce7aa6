// Command-line front end: synthetic data generation, fitting, prediction,
// nested cross-validation, and per-iteration timing.
//
// Exit codes: 0 success, 1 usage error, 2 file/format error,
// 3 invalid configuration, 4 numerical failure.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "sturm/errors.hpp"
#include "sturm/harness.hpp"
#include "sturm/io.hpp"
#include "sturm/solver.hpp"
#include "sturm/tensor3.hpp"

namespace {

sturm::Dims3 parse_dims(const std::string& text) {
  sturm::Dims3 dims{0, 0, 0};
  unsigned long long a = 0, b = 0, c = 0;
  char extra = 0;
  if (std::sscanf(text.c_str(), "%llux%llux%llu%c", &a, &b, &c, &extra) != 3 || a == 0 ||
      b == 0 || c == 0) {
    throw std::invalid_argument("dims must look like I1xI2xI3, got \"" + text + "\"");
  }
  dims = {static_cast<std::size_t>(a), static_cast<std::size_t>(b),
          static_cast<std::size_t>(c)};
  return dims;
}

std::string tensors_path(const std::string& prefix) { return prefix + ".strm"; }
std::string labels_path(const std::string& prefix) { return prefix + ".labels"; }
std::string truth_path(const std::string& prefix) { return prefix + ".wstar.strm"; }

struct SynthArgs {
  std::string dims;
  std::size_t m = 0;
  std::size_t rank = 1;
  double density = 1.0;
  double noise = 0.0;
  std::uint64_t seed = 0;
  std::string out;
};

struct FitArgs {
  std::string data;
  double tau = 0.0;
  double gamma = 0.0;
  double rho = 1.0;
  double alpha = 0.0;
  bool alpha_set = false;
  int max_iters = 200;
  double tol = 1e-4;
  std::string out;
  std::string trace;
};

struct PredictArgs {
  std::string model;
  std::string data;
  std::string out;
};

struct CvArgs {
  std::string data;
  std::string plan;
  std::uint64_t seed = 0;
  std::string out;
};

struct BenchArgs {
  std::vector<std::string> dims;
  std::size_t m = 20;
  int iters = 10;
  std::uint64_t seed = 0;
};

void run_synth(const SynthArgs& args) {
  sturm::SynthSpec spec;
  spec.dims = parse_dims(args.dims);
  spec.sample_count = args.m;
  spec.true_tubal_rank = args.rank;
  spec.density = args.density;
  spec.noise_sigma = args.noise;
  spec.seed = args.seed;

  const sturm::SyntheticData synth = sturm::generate_synthetic(spec);
  sturm::write_dataset(synth.dataset, tensors_path(args.out), labels_path(args.out));
  sturm::write_single_tensor(truth_path(args.out), synth.w_star);
  std::cout << "synth: wrote " << args.m << " samples of " << args.dims << " to "
            << tensors_path(args.out) << ", labels to " << labels_path(args.out)
            << ", ground truth to " << truth_path(args.out) << "\n";
}

void run_fit(const FitArgs& args) {
  const sturm::LabeledDataset data =
      sturm::read_dataset(tensors_path(args.data), labels_path(args.data));

  sturm::SturmConfig config;
  config.tau = args.tau;
  config.gamma = args.gamma;
  config.rho = args.rho;
  if (args.alpha_set) config.alpha = args.alpha;
  config.max_iters = args.max_iters;
  config.primal_tol = args.tol;
  config.record_trace = !args.trace.empty();

  const sturm::FitResult result = sturm::fit_sturm(data, config);
  sturm::write_single_tensor(args.out, result.w);
  if (!args.trace.empty()) sturm::write_trace_csv(args.trace, result);

  std::printf("fit: %d iterations (%s), objective %.6g, sparsity %.4f, %.2f s\n",
              result.iterations_run, result.converged ? "converged" : "budget exhausted",
              sturm::objective_value(result.w, data, config), sturm::sparsity(result.w),
              result.wall_time_seconds);
}

void run_predict(const PredictArgs& args) {
  const sturm::Tensor3 w = sturm::read_single_tensor(args.model);
  const std::vector<sturm::Tensor3> samples = sturm::read_tensors(tensors_path(args.data));

  std::vector<int> preds;
  preds.reserve(samples.size());
  for (const auto& x : samples) {
    if (x.dims() != w.dims()) {
      throw std::invalid_argument("predict: sample shape " + sturm::dims_to_string(x.dims()) +
                                  " does not match model shape " +
                                  sturm::dims_to_string(w.dims()));
    }
    preds.push_back(sturm::predict(w, x));
  }
  sturm::write_labels(args.out, preds);

  if (std::filesystem::exists(labels_path(args.data))) {
    const std::vector<int> truth = sturm::read_labels(labels_path(args.data));
    if (truth.size() == preds.size()) {
      std::size_t correct = 0;
      for (std::size_t i = 0; i < preds.size(); ++i) {
        if (preds[i] == truth[i]) ++correct;
      }
      std::fprintf(stderr, "accuracy %.4f\n",
                   static_cast<double>(correct) / static_cast<double>(preds.size()));
    }
  }
}

void run_cv(const CvArgs& args) {
  const sturm::LabeledDataset data =
      sturm::read_dataset(tensors_path(args.data), labels_path(args.data));
  const sturm::CvPlan plan =
      args.plan.empty() ? sturm::CvPlan{} : sturm::read_plan_json(args.plan);

  const sturm::CvReport report = sturm::run_nested_cv(data, plan, args.seed);
  sturm::write_report_json(args.out, report);
  std::printf("cv: accuracy %.2f %% ± %.2f, sparsity %.3f ± %.3f, report written to %s\n",
              100.0 * report.mean_accuracy, 100.0 * report.std_accuracy, report.mean_sparsity,
              report.std_sparsity, args.out.c_str());
}

void run_bench(const BenchArgs& args) {
  std::printf("%-14s %10s %6s %7s %12s\n", "dims", "entries", "M", "iters", "ms/iter");
  for (const std::string& ds : args.dims) {
    const sturm::Dims3 dims = parse_dims(ds);
    const sturm::BenchResult r = sturm::bench_fit(dims, args.m, args.iters, args.seed);
    std::printf("%-14s %10zu %6zu %7d %12.3f\n", ds.c_str(), dims[0] * dims[1] * dims[2],
                args.m, args.iters, 1e3 * r.per_iter_seconds);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sparse tubal-regularized multilinear regression"};
  app.require_subcommand(1);

  SynthArgs synth_args;
  auto* synth = app.add_subcommand("synth", "Generate a synthetic dataset with known W*");
  synth->add_option("--dims", synth_args.dims, "Tensor shape I1xI2xI3")->required();
  synth->add_option("--m", synth_args.m, "Number of samples")->required();
  synth->add_option("--rank", synth_args.rank, "Tubal rank of W*")->required();
  synth->add_option("--density", synth_args.density, "Fraction of nonzeros in W*")
      ->default_val(1.0);
  synth->add_option("--noise", synth_args.noise, "Label noise sigma")->default_val(0.0);
  synth->add_option("--seed", synth_args.seed, "RNG seed")->default_val(0);
  synth->add_option("--out", synth_args.out, "Output path prefix")->required();

  FitArgs fit_args;
  auto* fit = app.add_subcommand("fit", "Fit the regression model");
  fit->add_option("--data", fit_args.data, "Dataset path prefix")->required();
  fit->add_option("--tau", fit_args.tau, "TNN regularization weight")->required();
  fit->add_option("--gamma", fit_args.gamma, "l1 regularization weight")->required();
  fit->add_option("--rho", fit_args.rho, "Augmented-Lagrangian constant")->default_val(1.0);
  auto* alpha_opt =
      fit->add_option("--alpha", fit_args.alpha, "Loss scaling (default sqrt(max(I1,I2)*I3))");
  fit->add_option("--max-iters", fit_args.max_iters, "Iteration budget")->default_val(200);
  fit->add_option("--tol", fit_args.tol, "Primal residual tolerance (0 = fixed budget)")
      ->default_val(1e-4);
  fit->add_option("--out", fit_args.out, "Model output file")->required();
  fit->add_option("--trace", fit_args.trace, "Per-iteration CSV trace output");

  PredictArgs predict_args;
  auto* predict = app.add_subcommand("predict", "Predict labels with a fitted model");
  predict->add_option("--model", predict_args.model, "Model file")->required();
  predict->add_option("--data", predict_args.data, "Dataset path prefix")->required();
  predict->add_option("--out", predict_args.out, "Predictions output file")->required();

  CvArgs cv_args;
  auto* cv = app.add_subcommand("cv", "Nested cross-validation with grid search");
  cv->add_option("--data", cv_args.data, "Dataset path prefix")->required();
  cv->add_option("--plan", cv_args.plan, "Plan JSON (absent keys take defaults)");
  cv->add_option("--seed", cv_args.seed, "Fold shuffling seed")->default_val(0);
  cv->add_option("--out", cv_args.out, "Report JSON output")->required();

  BenchArgs bench_args;
  auto* bench = app.add_subcommand("bench", "Per-iteration timing at given problem sizes");
  bench->add_option("--dims", bench_args.dims, "Tensor shape I1xI2xI3 (repeatable)")
      ->required();
  bench->add_option("--m", bench_args.m, "Number of samples")->default_val(20);
  bench->add_option("--iters", bench_args.iters, "Iterations to time")->default_val(10);
  bench->add_option("--seed", bench_args.seed, "RNG seed")->default_val(0);

  try {
    app.parse(argc, argv);
    fit_args.alpha_set = alpha_opt->count() > 0;

    if (*synth) run_synth(synth_args);
    if (*fit) run_fit(fit_args);
    if (*predict) run_predict(predict_args);
    if (*cv) run_cv(cv_args);
    if (*bench) run_bench(bench_args);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "sturm: error: " << e.what() << "\n";
    return 1;
  } catch (const sturm::IoError& e) {
    std::cerr << "sturm: error: " << e.what() << "\n";
    return 2;
  } catch (const sturm::NumericError& e) {
    std::cerr << "sturm: error: " << e.what() << "\n";
    return 4;
  } catch (const std::invalid_argument& e) {
    std::cerr << "sturm: error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "sturm: error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
