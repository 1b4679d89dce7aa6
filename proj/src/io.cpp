#include "sturm/io.hpp"

#include <bit>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "sturm/errors.hpp"

namespace sturm {

namespace {

constexpr char kMagic[4] = {'S', 'T', 'R', 'M'};
constexpr std::uint32_t kVersion = 1;
constexpr std::size_t kHeaderBytes = 28;

void put_u32_le(std::string& buf, std::uint32_t v) {
  buf.push_back(static_cast<char>(v & 0xFF));
  buf.push_back(static_cast<char>((v >> 8) & 0xFF));
  buf.push_back(static_cast<char>((v >> 16) & 0xFF));
  buf.push_back(static_cast<char>((v >> 24) & 0xFF));
}

void put_f64_le(std::string& buf, double d) {
  auto bits = std::bit_cast<std::uint64_t>(d);
  for (int i = 0; i < 8; ++i) buf.push_back(static_cast<char>((bits >> (8 * i)) & 0xFF));
}

std::uint32_t get_u32_le(const unsigned char* p) {
  return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

double get_f64_le(const unsigned char* p) {
  std::uint64_t bits = 0;
  for (int i = 7; i >= 0; --i) bits = (bits << 8) | p[i];
  return std::bit_cast<double>(bits);
}

// Write-temp-then-rename so readers never observe a partial file.
void atomic_write(const std::string& path, const std::string& contents) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + tmp + " for writing");
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    if (!out) throw IoError("short write to " + tmp);
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw IoError("cannot rename " + tmp + " to " + path + ": " + ec.message());
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace

void write_tensors(const std::string& path, const std::vector<Tensor3>& tensors) {
  if (tensors.empty()) throw std::invalid_argument("write_tensors: need at least one tensor");
  const Dims3& d = tensors.front().dims();
  for (std::size_t i = 1; i < tensors.size(); ++i) {
    if (tensors[i].dims() != d) {
      throw std::invalid_argument("write_tensors: tensor " + std::to_string(i) +
                                  " has shape " + dims_to_string(tensors[i].dims()) +
                                  ", expected " + dims_to_string(d));
    }
  }

  std::string buf;
  buf.reserve(kHeaderBytes + tensors.size() * tensors.front().size() * 8);
  buf.append(kMagic, 4);
  put_u32_le(buf, kVersion);
  put_u32_le(buf, 3);
  for (std::size_t n = 0; n < 3; ++n) put_u32_le(buf, static_cast<std::uint32_t>(d[n]));
  put_u32_le(buf, static_cast<std::uint32_t>(tensors.size()));
  for (const Tensor3& t : tensors) {
    for (double v : t.data()) put_f64_le(buf, v);
  }
  atomic_write(path, buf);
}

std::vector<Tensor3> read_tensors(const std::string& path) {
  const std::string raw = read_file(path);
  if (raw.size() < kHeaderBytes) {
    throw IoError(path + ": truncated header, " + std::to_string(raw.size()) +
                  " bytes but need " + std::to_string(kHeaderBytes));
  }
  const auto* p = reinterpret_cast<const unsigned char*>(raw.data());

  if (!std::equal(kMagic, kMagic + 4, raw.data())) {
    throw IoError(path + ": bad magic at byte 0, expected \"STRM\"");
  }
  const std::uint32_t version = get_u32_le(p + 4);
  if (version != kVersion) {
    throw IoError(path + ": unsupported version " + std::to_string(version) + " at byte 4");
  }
  const std::uint32_t ndims = get_u32_le(p + 8);
  if (ndims != 3) {
    throw IoError(path + ": ndims must be 3, got " + std::to_string(ndims) + " at byte 8");
  }
  Dims3 dims;
  for (std::size_t n = 0; n < 3; ++n) {
    dims[n] = get_u32_le(p + 12 + 4 * n);
    if (dims[n] == 0) {
      throw IoError(path + ": zero extent at byte " + std::to_string(12 + 4 * n));
    }
  }
  const std::uint32_t count = get_u32_le(p + 24);
  if (count == 0) throw IoError(path + ": tensor count is zero at byte 24");

  const std::size_t per_tensor = dims[0] * dims[1] * dims[2];
  const std::size_t expected = kHeaderBytes + static_cast<std::size_t>(count) * per_tensor * 8;
  if (raw.size() != expected) {
    throw IoError(path + ": payload length " + std::to_string(raw.size() - kHeaderBytes) +
                  " bytes, expected " + std::to_string(expected - kHeaderBytes) +
                  " (file should be " + std::to_string(expected) + " bytes)");
  }

  std::vector<Tensor3> tensors;
  tensors.reserve(count);
  std::size_t off = kHeaderBytes;
  for (std::uint32_t t = 0; t < count; ++t) {
    std::vector<double> data(per_tensor);
    for (std::size_t i = 0; i < per_tensor; ++i, off += 8) data[i] = get_f64_le(p + off);
    try {
      tensors.emplace_back(dims, std::move(data));
    } catch (const std::invalid_argument& e) {
      throw IoError(path + ": tensor " + std::to_string(t) + ": " + e.what());
    }
  }
  return tensors;
}

void write_single_tensor(const std::string& path, const Tensor3& t) {
  write_tensors(path, {t});
}

Tensor3 read_single_tensor(const std::string& path) {
  std::vector<Tensor3> ts = read_tensors(path);
  if (ts.size() != 1) {
    throw IoError(path + ": expected exactly one tensor, found " + std::to_string(ts.size()));
  }
  return std::move(ts.front());
}

void write_labels(const std::string& path, const std::vector<int>& labels) {
  std::string buf;
  for (int l : labels) {
    if (l != 1 && l != -1) {
      throw std::invalid_argument("write_labels: label must be +1 or -1, got " +
                                  std::to_string(l));
    }
    buf += (l == 1 ? "+1\n" : "-1\n");
  }
  atomic_write(path, buf);
}

std::vector<int> read_labels(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  std::vector<int> labels;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() && in.eof()) break;
    if (line == "+1") {
      labels.push_back(1);
    } else if (line == "-1") {
      labels.push_back(-1);
    } else {
      throw IoError(path + ": invalid label \"" + line + "\" on line " +
                    std::to_string(line_no) + ", expected +1 or -1");
    }
  }
  if (labels.empty()) throw IoError(path + ": no labels found");
  return labels;
}

LabeledDataset read_dataset(const std::string& tensor_path, const std::string& labels_path) {
  std::vector<Tensor3> tensors = read_tensors(tensor_path);
  std::vector<int> labels = read_labels(labels_path);
  if (labels.size() != tensors.size()) {
    throw IoError(labels_path + ": " + std::to_string(labels.size()) + " labels but " +
                  tensor_path + " holds " + std::to_string(tensors.size()) + " tensors");
  }
  return LabeledDataset(std::move(tensors), std::move(labels));
}

void write_dataset(const LabeledDataset& data, const std::string& tensor_path,
                   const std::string& labels_path) {
  write_tensors(tensor_path, data.samples());
  write_labels(labels_path, data.labels());
}

void write_trace_csv(const std::string& path, const FitResult& result) {
  const std::size_t n = result.residual_a_trace.size();
  if (result.objective_trace.size() != n) {
    throw std::invalid_argument(
        "write_trace_csv: objective trace missing; fit with record_trace enabled");
  }
  std::string buf = "iter,objective,resid_A,resid_B\n";
  char line[160];
  for (std::size_t k = 0; k < n; ++k) {
    std::snprintf(line, sizeof(line), "%zu,%.17g,%.17g,%.17g\n", k + 1,
                  result.objective_trace[k], result.residual_a_trace[k],
                  result.residual_b_trace[k]);
    buf += line;
  }
  atomic_write(path, buf);
}

std::string report_to_json(const CvReport& report) {
  nlohmann::json folds = nlohmann::json::array();
  for (const auto& fo : report.folds) {
    folds.push_back({{"fold", fo.fold},
                     {"tau", fo.tau},
                     {"gamma", fo.gamma},
                     {"beta", fo.beta},
                     {"eta", fo.eta},
                     {"accuracy", fo.accuracy},
                     {"sparsity", fo.sparsity},
                     {"iterations", fo.iterations}});
  }
  nlohmann::json j{{"folds", folds},
                   {"summary",
                    {{"mean_accuracy", report.mean_accuracy},
                     {"std_accuracy", report.std_accuracy},
                     {"mean_sparsity", report.mean_sparsity},
                     {"std_sparsity", report.std_sparsity}}}};
  return j.dump(2) + "\n";
}

void write_report_json(const std::string& path, const CvReport& report) {
  atomic_write(path, report_to_json(report));
}

CvPlan plan_from_json_text(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw IoError(std::string("plan: invalid JSON: ") + e.what());
  }
  if (!j.is_object()) throw IoError("plan: top level must be a JSON object");

  CvPlan plan;
  for (const auto& [key, value] : j.items()) {
    try {
      if (key == "outer_folds") {
        plan.outer_folds = value.get<int>();
      } else if (key == "inner_folds") {
        plan.inner_folds = value.get<int>();
      } else if (key == "tau_grid") {
        plan.tau_grid = value.get<std::vector<double>>();
      } else if (key == "gamma_grid") {
        plan.gamma_grid = value.get<std::vector<double>>();
      } else if (key == "beta_grid") {
        plan.beta_grid = value.get<std::vector<double>>();
      } else if (key == "eta_grid") {
        plan.eta_grid = value.get<std::vector<double>>();
      } else if (key == "rho") {
        plan.rho = value.get<double>();
      } else if (key == "max_iters") {
        plan.max_iters = value.get<int>();
      } else if (key == "primal_tol") {
        plan.primal_tol = value.get<double>();
      } else {
        throw IoError("plan: unknown key \"" + key + "\"");
      }
    } catch (const nlohmann::json::exception& e) {
      throw IoError("plan: bad value for \"" + key + "\": " + e.what());
    }
  }
  plan.validate();
  return plan;
}

CvPlan read_plan_json(const std::string& path) { return plan_from_json_text(read_file(path)); }

}  // namespace sturm
