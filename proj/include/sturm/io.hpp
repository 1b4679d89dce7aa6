#pragma once

#include <string>
#include <vector>

#include "sturm/harness.hpp"
#include "sturm/solver.hpp"
#include "sturm/tensor3.hpp"

namespace sturm {

/// STRM container: a fixed little-endian header followed by `count` tensors
/// of identical shape, each stored as I1*I2*I3 64-bit floats in
/// tube-contiguous order.
///
///   offset 0   magic   "STRM"
///   offset 4   u32     version, currently 1
///   offset 8   u32     ndims, always 3
///   offset 12  u32[3]  I1, I2, I3
///   offset 24  u32     count
///   offset 28  payload
///
/// All integers little-endian. Writes go through a temp file plus rename.
void write_tensors(const std::string& path, const std::vector<Tensor3>& tensors);
std::vector<Tensor3> read_tensors(const std::string& path);

void write_single_tensor(const std::string& path, const Tensor3& t);
Tensor3 read_single_tensor(const std::string& path);

/// Labels sidecar: one "+1" or "-1" per line, strictly parsed.
void write_labels(const std::string& path, const std::vector<int>& labels);
std::vector<int> read_labels(const std::string& path);

LabeledDataset read_dataset(const std::string& tensor_path, const std::string& labels_path);
void write_dataset(const LabeledDataset& data, const std::string& tensor_path,
                   const std::string& labels_path);

/// Per-iteration trace with header "iter,objective,resid_A,resid_B".
/// Requires a fit run with record_trace.
void write_trace_csv(const std::string& path, const FitResult& result);

void write_report_json(const std::string& path, const CvReport& report);
std::string report_to_json(const CvReport& report);

/// Missing keys keep their defaults; unknown keys are rejected.
CvPlan read_plan_json(const std::string& path);
CvPlan plan_from_json_text(const std::string& text);

}  // namespace sturm
