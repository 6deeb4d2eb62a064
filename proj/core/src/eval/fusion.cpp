// Copyright 2026 The ASC Toolkit Authors. All rights reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "asc/eval/fusion.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <unordered_map>

#include "asc/error.hpp"

namespace asc::eval {
namespace {

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> cols;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) cols.push_back(cell);
  if (!line.empty() && line.back() == ',') cols.emplace_back();
  return cols;
}

// Known tags first in the published table order, then the rest alphabetically.
int device_rank(const std::string& d) {
  static const char* kOrder[] = {"A", "B", "C", "S1", "S2", "S3", "S4", "S5", "S6"};
  for (int i = 0; i < 9; ++i) {
    if (d == kOrder[i]) return i;
  }
  return 9;
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

}  // namespace

ProbMatrix::ProbMatrix(std::size_t s, std::size_t n, std::size_t m)
    : n_systems(s), n_samples(n), n_classes(m), probs(s * n * m, 0.0), system_names(s), sample_ids(n) {}

void ProbMatrix::validate() const {
  if (n_systems == 0) fail(ErrorCode::kValidationError, "fusion needs at least one system");
  if (n_classes == 0) fail(ErrorCode::kValidationError, "no classes");
  if (probs.size() != n_systems * n_samples * n_classes) {
    fail(ErrorCode::kLengthMismatch, "probability array does not match S x N x M");
  }
  for (std::size_t s = 0; s < n_systems; ++s) {
    for (std::size_t n = 0; n < n_samples; ++n) {
      double sum = 0.0;
      for (std::size_t m = 0; m < n_classes; ++m) {
        const double p = at(s, n, m);
        if (!(p >= 0.0 && p <= 1.0)) fail(ErrorCode::kValidationError, "probability outside [0, 1]");
        sum += p;
      }
      if (std::abs(sum - 1.0) > 1e-6) {
        fail(ErrorCode::kValidationError, "probability row does not sum to 1 (system " + std::to_string(s) +
                                              ", sample " + std::to_string(n) + ")");
      }
    }
  }
}

std::vector<double> prod_fusion(const ProbMatrix& pm, double floor) {
  pm.validate();
  const std::size_t N = pm.n_samples, M = pm.n_classes;
  // exp(log(p)) is not bit-exact; a single system passes through untouched.
  if (pm.n_systems == 1) return std::vector<double>(pm.probs.begin(), pm.probs.begin() + N * M);
  std::vector<double> logs(N * M, 0.0);
  for (std::size_t s = 0; s < pm.n_systems; ++s) {
    for (std::size_t i = 0; i < N * M; ++i) logs[i] += std::log(std::max(pm.probs[s * N * M + i], floor));
  }
  const double scale = 1.0 / static_cast<double>(pm.n_systems);
  for (auto& v : logs) v = std::exp(v) * scale;
  return logs;
}

std::vector<int> predict_label(std::span<const double> fused, std::size_t n_classes) {
  if (n_classes == 0 || fused.size() % n_classes != 0) {
    fail(ErrorCode::kLengthMismatch, "fused scores are not a whole number of rows");
  }
  std::vector<int> labels(fused.size() / n_classes);
  for (std::size_t n = 0; n < labels.size(); ++n) {
    const double* row = fused.data() + n * n_classes;
    std::size_t best = 0;
    for (std::size_t m = 1; m < n_classes; ++m) {
      if (row[m] > row[best] * (1.0 + kTieTolerance)) best = m;
    }
    labels[n] = static_cast<int>(best);
  }
  return labels;
}

bool device_before(const std::string& a, const std::string& b) {
  const int ra = device_rank(a), rb = device_rank(b);
  return ra != rb ? ra < rb : a < b;
}

double EvalReport::device_accuracy(const std::string& device) const {
  for (const auto& r : rows) {
    if (r.device == device) return r.accuracy;
  }
  fail(ErrorCode::kValidationError, "no report row for device " + device);
}

EvalReport accuracy_by_device(std::span<const int> preds, std::span<const int> truth,
                              std::span<const std::string> devices, std::size_t n_classes) {
  if (preds.size() != truth.size() || preds.size() != devices.size()) {
    fail(ErrorCode::kLengthMismatch, "predictions, labels and devices differ in length");
  }
  EvalReport rep;
  rep.n_classes = n_classes;
  rep.confusion.assign(n_classes * n_classes, 0);
  std::map<std::string, DeviceRow, decltype(&device_before)> by_device(&device_before);
  for (std::size_t i = 0; i < preds.size(); ++i) {
    if (truth[i] < 0 || static_cast<std::size_t>(truth[i]) >= n_classes || preds[i] < 0 ||
        static_cast<std::size_t>(preds[i]) >= n_classes) {
      fail(ErrorCode::kValidationError, "label outside [0, " + std::to_string(n_classes) + ")");
    }
    auto& row = by_device[devices[i]];
    row.device = devices[i];
    ++row.total;
    if (preds[i] == truth[i]) ++row.correct;
    ++rep.confusion[static_cast<std::size_t>(truth[i]) * n_classes + static_cast<std::size_t>(preds[i])];
  }
  double sum = 0.0;
  for (auto& [tag, row] : by_device) {
    row.accuracy = 100.0 * static_cast<double>(row.correct) / static_cast<double>(row.total);
    sum += row.accuracy;
    rep.rows.push_back(row);
  }
  rep.average_acc = rep.rows.empty() ? 0.0 : sum / static_cast<double>(rep.rows.size());
  return rep;
}

EvalReport fuse_and_eval(const ProbMatrix& pm, std::span<const int> truth,
                         std::span<const std::string> devices, double floor) {
  const auto fused = prod_fusion(pm, floor);
  const auto preds = predict_label(fused, pm.n_classes);
  return accuracy_by_device(preds, truth, devices, pm.n_classes);
}

std::string report_text(const EvalReport& report, const std::string& title) {
  std::string out;
  if (!title.empty()) out += title + "\n";
  out += "Device    Acc.(%)   Correct/Total\n";
  for (const auto& r : report.rows) {
    char line[128];
    std::snprintf(line, sizeof line, "%-9s %7.1f   %zu/%zu\n", r.device.c_str(), r.accuracy, r.correct, r.total);
    out += line;
  }
  char line[64];
  std::snprintf(line, sizeof line, "%-9s %7.1f\n", "Average", report.average_acc);
  out += line;
  return out;
}

std::string report_csv(const EvalReport& report) {
  std::string out = "device,correct,total,accuracy\n";
  for (const auto& r : report.rows) {
    out += r.device + "," + std::to_string(r.correct) + "," + std::to_string(r.total) + "," +
           fmt("%.4f", r.accuracy) + "\n";
  }
  out += "Average,,," + fmt("%.4f", report.average_acc) + "\n";
  return out;
}

void write_predictions(const std::filesystem::path& path, std::span<const PredictionRow> rows) {
  const std::size_t M = rows.empty() ? 10 : rows.front().probs.size();
  std::ofstream out(path);
  if (!out) fail(ErrorCode::kIOFailure, "cannot create " + path.string());
  out << "sample_id,device_id,true_label";
  for (std::size_t m = 0; m < M; ++m) out << ",p_" << m;
  out << '\n';
  for (const auto& r : rows) {
    if (r.probs.size() != M) fail(ErrorCode::kLengthMismatch, "prediction rows differ in class count");
    if (r.sample_id.find(',') != std::string::npos || r.device_id.find(',') != std::string::npos) {
      fail(ErrorCode::kValidationError, "sample and device ids may not contain commas");
    }
    out << r.sample_id << ',' << r.device_id << ',' << r.true_label;
    // %.17g round-trips doubles exactly.
    for (double p : r.probs) out << ',' << fmt("%.17g", p);
    out << '\n';
  }
  if (!out) fail(ErrorCode::kIOFailure, "write failed: " + path.string());
}

std::vector<PredictionRow> read_predictions(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::kIOFailure, "cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line)) fail(ErrorCode::kValidationError, path.string() + ": empty prediction file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  const auto header = split_csv(line);
  if (header.size() < 4 || header[0] != "sample_id" || header[1] != "device_id" || header[2] != "true_label") {
    fail(ErrorCode::kValidationError, path.string() + ": header must be sample_id,device_id,true_label,p_0,...");
  }
  const std::size_t M = header.size() - 3;
  for (std::size_t m = 0; m < M; ++m) {
    if (header[3 + m] != "p_" + std::to_string(m)) fail(ErrorCode::kValidationError, path.string() + ": bad column " + header[3 + m]);
  }
  std::vector<PredictionRow> rows;
  std::size_t line_no = 1;
  auto bad = [&](const std::string& what) {
    fail(ErrorCode::kValidationError, path.string() + " line " + std::to_string(line_no) + ": " + what);
  };
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto cols = split_csv(line);
    if (cols.size() != header.size()) bad("expected " + std::to_string(header.size()) + " columns");
    PredictionRow r;
    r.sample_id = cols[0];
    r.device_id = cols[1];
    auto [p, ec] = std::from_chars(cols[2].data(), cols[2].data() + cols[2].size(), r.true_label);
    if (ec != std::errc() || p != cols[2].data() + cols[2].size()) bad("bad true_label");
    r.probs.resize(M);
    for (std::size_t m = 0; m < M; ++m) {
      const auto& c = cols[3 + m];
      auto [q, ec2] = std::from_chars(c.data(), c.data() + c.size(), r.probs[m]);
      if (ec2 != std::errc() || q != c.data() + c.size()) bad("bad probability '" + c + "'");
    }
    rows.push_back(std::move(r));
  }
  return rows;
}

AlignedPredictions align_systems(const std::vector<std::vector<PredictionRow>>& systems,
                                 const std::vector<std::string>& names) {
  if (systems.empty()) fail(ErrorCode::kValidationError, "no prediction files");
  if (names.size() != systems.size()) fail(ErrorCode::kLengthMismatch, "one name per system");
  const auto& first = systems.front();
  const std::size_t M = first.empty() ? 0 : first.front().probs.size();

  std::vector<std::unordered_map<std::string, std::size_t>> index(systems.size());
  for (std::size_t s = 0; s < systems.size(); ++s) {
    for (std::size_t n = 0; n < systems[s].size(); ++n) {
      if (!index[s].emplace(systems[s][n].sample_id, n).second) {
        fail(ErrorCode::kValidationError, names[s] + ": duplicate sample id " + systems[s][n].sample_id);
      }
      if (systems[s][n].probs.size() != M) fail(ErrorCode::kValidationError, names[s] + ": class count differs");
    }
  }
  for (std::size_t s = 1; s < systems.size(); ++s) {
    std::size_t shared = 0;
    for (const auto& r : first) shared += index[s].count(r.sample_id);
    if (shared == 0) fail(ErrorCode::kLengthMismatch, names[s] + " shares no sample id with " + names[0]);
    if (shared != first.size() || shared != systems[s].size()) {
      fail(ErrorCode::kValidationError, names[s] + " and " + names[0] + " cover different sample ids");
    }
  }
  if (first.empty()) fail(ErrorCode::kLengthMismatch, names[0] + " has no samples");

  AlignedPredictions out;
  out.pm = ProbMatrix(systems.size(), first.size(), M);
  out.pm.system_names = names;
  for (std::size_t n = 0; n < first.size(); ++n) {
    const auto& ref = first[n];
    out.pm.sample_ids[n] = ref.sample_id;
    out.truth.push_back(ref.true_label);
    out.devices.push_back(ref.device_id);
    for (std::size_t s = 0; s < systems.size(); ++s) {
      const auto& r = systems[s][index[s].at(ref.sample_id)];
      if (r.device_id != ref.device_id || r.true_label != ref.true_label) {
        fail(ErrorCode::kValidationError, "sample " + ref.sample_id + ": device or label differs between " +
                                              names[0] + " and " + names[s]);
      }
      std::copy(r.probs.begin(), r.probs.end(), out.pm.probs.begin() + static_cast<std::ptrdiff_t>((s * first.size() + n) * M));
    }
  }
  return out;
}

}  // namespace asc::eval
