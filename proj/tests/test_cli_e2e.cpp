// End-to-end checks of the command-line surface. Drives the built binary
// (path passed as argv[1]) through temp files and verifies outputs, exit
// codes, and the documented error behavior.
#define DOCTEST_CONFIG_IMPLEMENT
#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "sturm/harness.hpp"
#include "sturm/io.hpp"
#include "sturm/rng.hpp"
#include "sturm/tensor3.hpp"

namespace {

std::string g_binary;
std::filesystem::path g_dir;

struct CmdResult {
  int code = -1;
  std::string out;
  std::string err;
};

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

CmdResult run(const std::string& args) {
  const auto out_path = g_dir / "stdout.txt";
  const auto err_path = g_dir / "stderr.txt";
  const std::string cmd =
      g_binary + " " + args + " > " + out_path.string() + " 2> " + err_path.string();
  const int status = std::system(cmd.c_str());
  CmdResult r;
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = slurp(out_path);
  r.err = slurp(err_path);
  return r;
}

std::string at(const std::string& name) { return (g_dir / name).string(); }

}  // namespace

TEST_CASE("help exits zero") {
  CHECK(run("--help").code == 0);
  CHECK(run("fit --help").code == 0);
}

TEST_CASE("synth, fit, predict round trip on separable data") {
  const CmdResult synth =
      run("synth --dims 6x6x4 --m 60 --rank 2 --density 0.5 --noise 0 --seed 3 --out " +
          at("sep"));
  REQUIRE(synth.code == 0);
  CHECK(std::filesystem::exists(at("sep") + ".strm"));
  CHECK(std::filesystem::exists(at("sep") + ".labels"));
  CHECK(std::filesystem::exists(at("sep") + ".wstar.strm"));

  const CmdResult fit = run("fit --data " + at("sep") +
                            " --tau 0.001 --gamma 0.001 --max-iters 150 --out " +
                            at("sep_model.strm") + " --trace " + at("sep_trace.csv"));
  REQUIRE(fit.code == 0);
  CHECK(fit.out.find("fit:") != std::string::npos);

  const CmdResult pred = run("predict --model " + at("sep_model.strm") + " --data " + at("sep") +
                             " --out " + at("sep_preds.txt"));
  REQUIRE(pred.code == 0);
  CHECK(pred.err.find("accuracy") != std::string::npos);

  const std::vector<int> preds = sturm::read_labels(at("sep_preds.txt"));
  const std::vector<int> truth = sturm::read_labels(at("sep") + ".labels");
  REQUIRE(preds.size() == truth.size());
  std::size_t correct = 0;
  for (std::size_t i = 0; i < preds.size(); ++i) correct += (preds[i] == truth[i]);
  CHECK(static_cast<double>(correct) / static_cast<double>(preds.size()) >= 0.9);
}

TEST_CASE("unregularized fit drives the objective to the noise floor") {
  // A consistent system: scale each sample so its response is exactly +-1.
  sturm::Rng rng(5);
  const sturm::Dims3 dims{3, 3, 3};
  sturm::Tensor3 w0(dims);
  for (double& v : w0.data()) v = rng.normal();

  std::vector<sturm::Tensor3> samples;
  std::vector<int> labels;
  while (samples.size() < 30) {
    sturm::Tensor3 x(dims);
    for (double& v : x.data()) v = rng.normal();
    const double c = sturm::inner_product(x, w0);
    if (std::abs(c) < 0.2) continue;
    samples.push_back(x * (1.0 / std::abs(c)));
    labels.push_back(c > 0.0 ? 1 : -1);
  }
  sturm::write_dataset(sturm::LabeledDataset(samples, labels), at("cons.strm"),
                       at("cons.labels"));

  const CmdResult fit = run("fit --data " + at("cons") +
                            " --tau 0 --gamma 0 --tol 0 --max-iters 500 --out " +
                            at("cons_model.strm") + " --trace " + at("cons_trace.csv"));
  REQUIRE(fit.code == 0);

  std::ifstream trace(at("cons_trace.csv"));
  std::string line;
  std::getline(trace, line);  // header
  double first_obj = -1.0, last_obj = -1.0;
  bool first_row = true;
  while (std::getline(trace, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string iter, obj;
    std::getline(row, iter, ',');
    std::getline(row, obj, ',');
    last_obj = std::stod(obj);
    if (first_row) {
      first_obj = last_obj;
      first_row = false;
    }
  }
  REQUIRE(first_obj > 0.0);
  CHECK(last_obj <= 1e-6 * first_obj);
}

TEST_CASE("cv writes a coherent report") {
  const CmdResult synth =
      run("synth --dims 4x4x3 --m 40 --rank 2 --density 0.5 --noise 0 --seed 9 --out " +
          at("cvdata"));
  REQUIRE(synth.code == 0);

  std::ofstream(at("plan.json"))
      << R"({"outer_folds": 5, "inner_folds": 3, "tau_grid": [0.001], "gamma_grid": [0.001],)"
      << R"( "beta_grid": [1.0], "eta_grid": [100.0], "max_iters": 60})";

  const CmdResult cv = run("cv --data " + at("cvdata") + " --plan " + at("plan.json") +
                           " --seed 7 --out " + at("report.json"));
  REQUIRE(cv.code == 0);
  CHECK(cv.out.find("cv:") != std::string::npos);

  const nlohmann::json report = nlohmann::json::parse(slurp(at("report.json")));
  REQUIRE(report["folds"].size() == 5);
  double mean = 0.0;
  for (const auto& fold : report["folds"]) {
    mean += fold["accuracy"].get<double>();
    CHECK(fold["tau"].get<double>() == 0.001);
    CHECK(fold["beta"].get<double>() == 1.0);
  }
  mean /= 5.0;
  CHECK(report["summary"]["mean_accuracy"].get<double>() == doctest::Approx(mean));
}

TEST_CASE("commands are deterministic given flags and seeds") {
  REQUIRE(run("synth --dims 4x4x3 --m 20 --rank 2 --density 0.5 --noise 0.1 --seed 11 --out " +
              at("det_a"))
              .code == 0);
  REQUIRE(run("synth --dims 4x4x3 --m 20 --rank 2 --density 0.5 --noise 0.1 --seed 11 --out " +
              at("det_b"))
              .code == 0);
  CHECK(slurp(at("det_a.strm")) == slurp(at("det_b.strm")));
  CHECK(slurp(at("det_a.labels")) == slurp(at("det_b.labels")));
  CHECK(slurp(at("det_a.wstar.strm")) == slurp(at("det_b.wstar.strm")));

  REQUIRE(run("fit --data " + at("det_a") + " --tau 0.01 --gamma 0.01 --max-iters 50 --out " +
              at("det_m1.strm"))
              .code == 0);
  REQUIRE(run("fit --data " + at("det_a") + " --tau 0.01 --gamma 0.01 --max-iters 50 --out " +
              at("det_m2.strm"))
              .code == 0);
  CHECK(slurp(at("det_m1.strm")) == slurp(at("det_m2.strm")));
}

TEST_CASE("bench prints a timing table") {
  const CmdResult bench = run("bench --dims 6x6x4 --dims 12x6x4 --m 8 --iters 4");
  REQUIRE(bench.code == 0);
  CHECK(bench.out.find("ms/iter") != std::string::npos);
  CHECK(bench.out.find("12x6x4") != std::string::npos);
}

TEST_CASE("failures map to the documented exit codes") {
  SUBCASE("unknown flag is a usage error") {
    CHECK(run("fit --no-such-flag").code == 1);
  }
  SUBCASE("missing subcommand is a usage error") {
    CHECK(run("").code == 1);
  }
  SUBCASE("missing data file is an io error") {
    CHECK(run("fit --data " + at("missing") + " --tau 0.1 --gamma 0.1 --out " +
              at("m.strm"))
              .code == 2);
  }
  SUBCASE("malformed dims string is a configuration error") {
    CHECK(run("synth --dims banana --m 5 --rank 1 --out " + at("x")).code == 3);
  }
  SUBCASE("bad plan file is an io error") {
    std::ofstream(at("badplan.json")) << R"({"tau": 0.1})";
    run("synth --dims 4x4x3 --m 40 --rank 2 --seed 1 --out " + at("pd"));
    CHECK(run("cv --data " + at("pd") + " --plan " + at("badplan.json") + " --out " +
              at("r.json"))
              .code == 2);
  }
  SUBCASE("infeasible plan is a configuration error") {
    run("synth --dims 4x4x3 --m 8 --rank 2 --seed 1 --out " + at("tiny"));
    std::ofstream(at("bigplan.json")) << R"({"outer_folds": 20})";
    CHECK(run("cv --data " + at("tiny") + " --plan " + at("bigplan.json") + " --out " +
              at("r2.json"))
              .code == 3);
  }
  SUBCASE("negative hyperparameter is a configuration error") {
    run("synth --dims 4x4x3 --m 10 --rank 2 --seed 1 --out " + at("neg"));
    CHECK(run("fit --data " + at("neg") + " --tau -1 --gamma 0 --out " + at("n.strm")).code ==
          3);
  }
}

int main(int argc, char** argv) {
  if (argc < 2) {
    std::fprintf(stderr, "usage: test_cli_e2e <path-to-sturm-binary>\n");
    return 2;
  }
  g_binary = argv[1];
  g_dir = std::filesystem::temp_directory_path() /
          ("sturm_cli_test_" + std::to_string(::getpid()));
  std::filesystem::create_directories(g_dir);

  doctest::Context context;
  context.applyCommandLine(1, argv);
  const int rc = context.run();

  std::filesystem::remove_all(g_dir);
  return rc;
}
