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

// Thin RAII wrappers over FFTW (double precision). Plans use FFTW_ESTIMATE so
// the chosen algorithm, and therefore every output bit, is reproducible.
// FFTW's planner is not thread-safe: construct these on one thread.

#include <complex>
#include <cstddef>
#include <span>

#include <fftw3.h>

namespace asc::detail {

class RealFft {
 public:
  explicit RealFft(std::size_t n);
  ~RealFft();
  RealFft(const RealFft&) = delete;
  RealFft& operator=(const RealFft&) = delete;

  std::size_t size() const noexcept { return n_; }
  std::span<double> input() noexcept { return {in_, n_}; }
  /// n/2 + 1 bins, valid after execute().
  std::span<std::complex<double>> output() noexcept {
    return {reinterpret_cast<std::complex<double>*>(out_), n_ / 2 + 1};
  }
  void execute() noexcept { fftw_execute(plan_); }

 private:
  std::size_t n_;
  double* in_;
  fftw_complex* out_;
  fftw_plan plan_;
};

/// Complex-to-real inverse transform (unnormalised, as FFTW).
class InverseRealFft {
 public:
  explicit InverseRealFft(std::size_t n);
  ~InverseRealFft();
  InverseRealFft(const InverseRealFft&) = delete;
  InverseRealFft& operator=(const InverseRealFft&) = delete;

  std::span<std::complex<double>> input() noexcept {
    return {reinterpret_cast<std::complex<double>*>(in_), n_ / 2 + 1};
  }
  std::span<double> output() noexcept { return {out_, n_}; }
  void execute() noexcept { fftw_execute(plan_); }

 private:
  std::size_t n_;
  fftw_complex* in_;
  double* out_;
  fftw_plan plan_;
};

class ComplexFft {
 public:
  explicit ComplexFft(std::size_t n);
  ~ComplexFft();
  ComplexFft(const ComplexFft&) = delete;
  ComplexFft& operator=(const ComplexFft&) = delete;

  std::span<std::complex<double>> input() noexcept {
    return {reinterpret_cast<std::complex<double>*>(in_), n_};
  }
  std::span<std::complex<double>> output() noexcept {
    return {reinterpret_cast<std::complex<double>*>(out_), n_};
  }
  void execute() noexcept { fftw_execute(plan_); }

 private:
  std::size_t n_;
  fftw_complex* in_;
  fftw_complex* out_;
  fftw_plan plan_;
};

}  // namespace asc::detail
