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

#include "fft.hpp"

#include <algorithm>
#include <new>

namespace asc::detail {
namespace {

template <typename T>
T* alloc(std::size_t count) {
  void* p = fftw_malloc(sizeof(T) * count);
  if (p == nullptr) throw std::bad_alloc();
  return static_cast<T*>(p);
}

}  // namespace

RealFft::RealFft(std::size_t n)
    : n_(n), in_(alloc<double>(n)), out_(alloc<fftw_complex>(n / 2 + 1)) {
  plan_ = fftw_plan_dft_r2c_1d(static_cast<int>(n), in_, out_, FFTW_ESTIMATE);
  std::fill_n(in_, n, 0.0);
}

RealFft::~RealFft() {
  fftw_destroy_plan(plan_);
  fftw_free(in_);
  fftw_free(out_);
}

InverseRealFft::InverseRealFft(std::size_t n)
    : n_(n), in_(alloc<fftw_complex>(n / 2 + 1)), out_(alloc<double>(n)) {
  // c2r destroys its input unless planned otherwise; callers refill it anyway.
  plan_ = fftw_plan_dft_c2r_1d(static_cast<int>(n), in_, out_, FFTW_ESTIMATE);
}

InverseRealFft::~InverseRealFft() {
  fftw_destroy_plan(plan_);
  fftw_free(in_);
  fftw_free(out_);
}

ComplexFft::ComplexFft(std::size_t n)
    : n_(n), in_(alloc<fftw_complex>(n)), out_(alloc<fftw_complex>(n)) {
  plan_ = fftw_plan_dft_1d(static_cast<int>(n), in_, out_, FFTW_FORWARD, FFTW_ESTIMATE);
}

ComplexFft::~ComplexFft() {
  fftw_destroy_plan(plan_);
  fftw_free(in_);
  fftw_free(out_);
}

}  // namespace asc::detail
