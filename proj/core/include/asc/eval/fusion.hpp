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

#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace asc::eval {

/// Probabilities are clamped to this before taking logs, so a single zero
/// does not annihilate the product.
inline constexpr double kProbFloor = 1e-12;

/// probs is [S, N, M] row-major.
struct ProbMatrix {
  std::size_t n_systems = 0, n_samples = 0, n_classes = 0;
  std::vector<double> probs;
  std::vector<std::string> system_names;
  std::vector<std::string> sample_ids;

  ProbMatrix() = default;
  ProbMatrix(std::size_t s, std::size_t n, std::size_t m);

  double& at(std::size_t s, std::size_t n, std::size_t m) { return probs[(s * n_samples + n) * n_classes + m]; }
  double at(std::size_t s, std::size_t n, std::size_t m) const {
    return probs[(s * n_samples + n) * n_classes + m];
  }
  /// Rows in [0, 1] summing to 1 within 1e-6; at least one system.
  void validate() const;
};

/// (1/S) * prod_s p_s per sample and class, via a sum of logs. Returns [N, M].
std::vector<double> prod_fusion(const ProbMatrix& pm, double floor = kProbFloor);

/// Scores within this relative distance of the running maximum count as tied.
/// Sums of logs of equal products can differ in the last bits.
inline constexpr double kTieTolerance = 1e-9;

/// Row-wise argmax; ties go to the lowest class index.
std::vector<int> predict_label(std::span<const double> fused, std::size_t n_classes);

struct DeviceRow {
  std::string device;
  std::size_t correct = 0;
  std::size_t total = 0;
  double accuracy = 0.0;  // percent
};

struct EvalReport {
  std::vector<DeviceRow> rows;  // A, B, C, S1..S6, then other tags sorted
  double average_acc = 0.0;     // unweighted mean of the device rows, percent
  std::size_t n_classes = 0;
  std::vector<std::size_t> confusion;  // [truth, predicted]

  /// Accuracy of one device row; ValidationError if absent.
  double device_accuracy(const std::string& device) const;
  std::size_t confusion_at(std::size_t truth, std::size_t pred) const { return confusion[truth * n_classes + pred]; }
};

/// Sort key for device tags in report order.
bool device_before(const std::string& a, const std::string& b);

EvalReport accuracy_by_device(std::span<const int> preds, std::span<const int> truth,
                              std::span<const std::string> devices, std::size_t n_classes = 10);

EvalReport fuse_and_eval(const ProbMatrix& pm, std::span<const int> truth,
                         std::span<const std::string> devices, double floor = kProbFloor);

/// Aligned plain-text table, one row per device then Average.
std::string report_text(const EvalReport& report, const std::string& title = "");
/// device,correct,total,accuracy with a final Average row.
std::string report_csv(const EvalReport& report);

// Per-system prediction files: sample_id,device_id,true_label,p_0..p_{M-1}.
struct PredictionRow {
  std::string sample_id;
  std::string device_id;
  int true_label = 0;
  std::vector<double> probs;
};

void write_predictions(const std::filesystem::path& path, std::span<const PredictionRow> rows);
std::vector<PredictionRow> read_predictions(const std::filesystem::path& path);

struct AlignedPredictions {
  ProbMatrix pm;
  std::vector<int> truth;
  std::vector<std::string> devices;
};

/// Stacks systems on the sample order of the first. No common sample id ->
/// LengthMismatch; differing id sets, or a shared id whose device or label
/// disagree -> ValidationError.
AlignedPredictions align_systems(const std::vector<std::vector<PredictionRow>>& systems,
                                 const std::vector<std::string>& names);

}  // namespace asc::eval
