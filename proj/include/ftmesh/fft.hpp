// Copyright 2026 The ftmesh Authors
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

#include <fftw3.h>

#include <cmath>
#include <complex>
#include <cstddef>
#include <mutex>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "ftmesh/matcore.hpp"

namespace ftmesh {

namespace detail {
// The FFTW planner is not re-entrant; execution with fftw_execute_dft is.
inline std::mutex& fftw_planner_mutex() {
  static std::mutex m;
  return m;
}
}  // namespace detail

/**
 * In-place unitary DFT with the e^{+i2πjk/n}/√n sign convention of
 * dft_matrix(), i.e. FFTW's unnormalized backward transform scaled by 1/√n.
 */
class FourierTransform {
 public:
  explicit FourierTransform(std::size_t n) : n_(n), scale_(1.0 / std::sqrt(static_cast<double>(n))) {
    if (n == 0) throw std::invalid_argument("FourierTransform: size must be positive");
    std::vector<Complex> scratch(n);
    auto* buf = reinterpret_cast<fftw_complex*>(scratch.data());
    std::lock_guard<std::mutex> lock(detail::fftw_planner_mutex());
    plan_ = fftw_plan_dft_1d(static_cast<int>(n), buf, buf, FFTW_BACKWARD, FFTW_ESTIMATE | FFTW_UNALIGNED);
    if (plan_ == nullptr) throw std::runtime_error("FourierTransform: FFTW planning failed");
  }

  FourierTransform(const FourierTransform&) = delete;
  FourierTransform& operator=(const FourierTransform&) = delete;

  FourierTransform(FourierTransform&& other) noexcept
      : n_(other.n_), scale_(other.scale_), plan_(std::exchange(other.plan_, nullptr)) {}
  FourierTransform& operator=(FourierTransform&& other) noexcept {
    if (this != &other) {
      release();
      n_ = other.n_;
      scale_ = other.scale_;
      plan_ = std::exchange(other.plan_, nullptr);
    }
    return *this;
  }

  ~FourierTransform() { release(); }

  std::size_t size() const { return n_; }

  void apply(std::span<Complex> v) const {
    if (v.size() != n_) throw ShapeError("FourierTransform: vector length mismatch");
    auto* buf = reinterpret_cast<fftw_complex*>(v.data());
    fftw_execute_dft(plan_, buf, buf);
    for (auto& z : v) z *= scale_;
  }

 private:
  void release() {
    if (plan_ != nullptr) {
      std::lock_guard<std::mutex> lock(detail::fftw_planner_mutex());
      fftw_destroy_plan(plan_);
      plan_ = nullptr;
    }
  }

  std::size_t n_;
  double scale_;
  fftw_plan plan_ = nullptr;
};

}  // namespace ftmesh
